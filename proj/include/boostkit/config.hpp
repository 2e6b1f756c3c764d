#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "boostkit/adaboost.hpp"
#include "boostkit/gradboost.hpp"
#include "boostkit/likboost.hpp"

namespace boostkit {

enum class EngineKind { Gradient, LikelihoodGlm, LikelihoodCox, AdaBoost };

EngineKind engine_from_id(const std::string& id);
std::string engine_id(EngineKind e);

/// How the likelihood-boosting penalty is specified on the outside:
/// an explicit lambda, a step size nu translated through
/// penalty_from_stepsize on the training data (so every cv fold gets the
/// matching lambda), or the exact per-candidate step-size mode.
enum class PenaltyChoice { ExplicitLambda, NuFixed, NuExact };

/// Everything needed to (re)fit a model, shared by the CLI and the
/// resampling-based stopping search.
struct FitConfig {
    EngineKind engine = EngineKind::Gradient;
    Family family = Family::L2;
    std::optional<double> huber_delta;  // fixed-delta override
    GlmFamily glm_family = GlmFamily::Gaussian;
    std::vector<LearnerConfig> learners = {LearnerConfig{}};  // size 1 or p
    int m_stop = 100;
    double step_length = 0.1;
    PenaltyChoice penalty_choice = PenaltyChoice::NuFixed;
    double nu = 0.1;
    double lambda = 0.0;
    std::vector<int> unpenalized;
    bool standardize = false;
    bool track_hat = true;
    int n_threads = 1;
};

using AnyModel = std::variant<BoostModel, LikBoostModel, AdaBoostModel>;

/// Fits whatever the config describes (standardizing first when requested;
/// the scaling is stamped into the model so prediction undoes it).
AnyModel fit_with_config(const Dataset& d, const FitConfig& config, int m_stop_override = -1);

}  // namespace boostkit
