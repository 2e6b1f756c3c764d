#pragma once

#include <cstdint>
#include <string>

#include "boostkit/config.hpp"

namespace boostkit {

/// Provenance carried inside every model file.
struct ModelMeta {
    std::uint64_t seed = 0;
    std::string rng = "";
    std::string invocation = "";
};

void save_model(const AnyModel& model, const std::string& path, const ModelMeta& meta);

/// Loads any engine's model. Round-trips exactly: predictions from the
/// loaded model equal the original's bit for bit.
AnyModel load_model(const std::string& path, ModelMeta* meta = nullptr);

}  // namespace boostkit
