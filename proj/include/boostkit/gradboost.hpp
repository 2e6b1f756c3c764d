#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "boostkit/baselearners.hpp"
#include "boostkit/dataset.hpp"
#include "boostkit/losses.hpp"

namespace boostkit {

enum class LearnerKind { Linear, PSpline };

struct LearnerConfig {
    LearnerKind kind = LearnerKind::Linear;
    double target_df = 4.0;
    int degree = 3;
    int inner_knots = 20;
    int diff_order = 2;
};

/// Per-component state frozen at fit time; enough to evaluate increments on
/// new data and to center partial effects.
struct ComponentLearner {
    LearnerKind kind = LearnerKind::Linear;
    std::string name;
    bool fittable = true;
    double x_mean = 0.0;  // training mean of the column
    // spline payload
    Eigen::VectorXd knots;
    double lambda = 0.0;
    int degree = 3;
    int diff_order = 2;
    Eigen::VectorXd basis_col_means;  // training basis column means
};

struct PathEntry {
    int component = 0;
    double intercept = 0.0;       // linear increments
    double slope = 0.0;
    Eigen::VectorXd gamma;        // spline increments
    double huber_delta = 0.0;     // threshold in force at this iteration
};

enum class PredictScale { Link, Response };

/// Component-wise gradient boosting model: an offset plus an ordered list of
/// shrunken base-learner increments. Truncation to any earlier iteration is
/// exact prefix semantics.
struct BoostModel {
    Family family = Family::L2;
    std::optional<double> huber_fixed_delta;
    double step_length = 0.1;
    double offset = 0.0;
    std::vector<std::string> names;
    std::vector<ComponentLearner> learners;
    std::vector<PathEntry> path;
    std::vector<double> training_risk;  // size m_stop + 1
    Scaling scaling;
    ResponseKind response_kind = ResponseKind::Continuous;
    std::string label_negative, label_positive;
    std::vector<std::string> non_fittable;  // columns excluded from selection

    int m_stop() const { return static_cast<int>(path.size()); }
    LossFamily loss_family() const { return LossFamily(family, huber_fixed_delta); }
};

struct GradBoostOptions {
    int n_threads = 1;
};

/// Box-2 fit: initialize at the loss family's offset, then repeatedly fit
/// every component's base-learner to the negative gradient, select the
/// smallest-SSE component and add sl times its fit.
BoostModel fit_gradboost(const Dataset& d, const LossFamily& family,
                         const std::vector<LearnerConfig>& configs, int m_stop,
                         double step_length, const GradBoostOptions& options = {});

/// argmin over candidate fitted vectors of sum (u - h_j)^2; ties break to
/// the lowest component index. Unfittable candidates pass std::nullopt.
int select_component(const Eigen::VectorXd& u,
                     const std::vector<std::optional<Eigen::VectorXd>>& fits);

Eigen::VectorXd predict(const BoostModel& model, const Eigen::MatrixXd& x,
                        std::optional<int> at_m = std::nullopt,
                        PredictScale scale = PredictScale::Link);

BoostModel truncate(const BoostModel& model, int m);

struct AggregatedCoefficients {
    double intercept = 0.0;
    Eigen::VectorXd coefficients;  // per component, original scale
};

/// Collapses an all-linear path into one intercept + one slope per
/// component (offset folded into the intercept). Throws if the prefix
/// contains spline increments.
AggregatedCoefficients aggregate_coefficients(const BoostModel& model,
                                              std::optional<int> at_m = std::nullopt);

struct PartialEffect {
    Eigen::VectorXd grid;
    Eigen::VectorXd effect;  // centered to mean zero over the training column
    bool selected = false;
};

PartialEffect partial_effect(const BoostModel& model, int component, const Eigen::VectorXd& grid,
                             std::optional<int> at_m = std::nullopt);

/// Empirical risk of the truncated model at every m = 0..m_stop on `d`.
std::vector<double> risk_path(const BoostModel& model, const Dataset& d);

}  // namespace boostkit
