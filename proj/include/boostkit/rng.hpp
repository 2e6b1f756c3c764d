#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace boostkit {

/// Seedable generator with fully specified sampling algorithms.
///
/// The engine is std::mt19937_64, whose output stream is pinned by the
/// standard, and all derived draws (uniforms, bounded integers, normals)
/// are implemented here instead of via std::*_distribution, whose results
/// are implementation-defined. Outputs that depend on randomness record
/// the identifier below so they can be reproduced by any build.
class Rng {
public:
    static constexpr const char* kAlgorithmId = "mt19937_64/bk1";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % n + 1) % n;
        std::uint64_t x = engine_();
        if (rem != 0) {
            const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - rem;
            while (x > limit) x = engine_();
        }
        return x % n;
    }

    /// Standard normal via Box-Muller (pair cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform01();  // (0,1]
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace boostkit
