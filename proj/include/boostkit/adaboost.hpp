#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "boostkit/baselearners.hpp"
#include "boostkit/dataset.hpp"

namespace boostkit {

struct AdaBoostRound {
    Stump stump;
    double alpha = 0.0;    // aggregation coefficient, 0.5*ln((1-eps)/eps)
    double epsilon = 0.0;  // weighted training error of the stump
};

struct AdaBoostModel {
    std::vector<AdaBoostRound> rounds;
    bool terminated_early = false;
    std::string termination_reason;
    std::vector<std::string> names;
    Scaling scaling;
    std::string label_negative, label_positive;

    int m_stop() const { return static_cast<int>(rounds.size()); }
};

struct AdaBoostOptions {
    int n_threads = 1;
};

/// Discrete AdaBoost with stump base-learners: uniform starting weights,
/// exhaustive stump per round, exponential reweighting. Stops early when no
/// stump beats random guessing (epsilon >= 0.5, round dropped) or a stump is
/// perfect (epsilon = 0, retained with the floored-epsilon coefficient).
AdaBoostModel fit_adaboost(const Dataset& d, int m_stop, const AdaBoostOptions& options = {});

struct AdaBoostPrediction {
    Eigen::VectorXd labels;   // -1/+1, sign(0) := +1
    Eigen::VectorXd margins;  // sum of alpha_m * h_m(x)
};

AdaBoostPrediction predict_adaboost(const AdaBoostModel& model, const Eigen::MatrixXd& x);

/// Mean exponential loss of the partial vote after 0..m rounds on `d`
/// (entry 0 is the empty vote, always 1).
std::vector<double> exponential_risk_path(const AdaBoostModel& model, const Dataset& d);

}  // namespace boostkit
