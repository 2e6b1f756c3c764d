#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "boostkit/config.hpp"
#include "boostkit/dataset.hpp"
#include "boostkit/resample.hpp"

namespace boostkit {

struct DfPath {
    std::vector<double> df;  // df[m] = trace of the cumulative smoother, df[0] = 1
};

/// Boosting degrees of freedom via B_m = B_{m-1} + sl * H_{j_m} (I - B_{m-1})
/// starting from the offset's mean smoother. Exact for L2 with linear
/// smoothers; other families are rejected (use resampling instead).
DfPath df_path(const BoostModel& model, const Dataset& d, int up_to_m = -1);

/// Hurvich-style corrected AIC: log(sigma2) + (1 + df/n) / (1 - (df+2)/n).
double aicc_value(double sigma2, double df, double n);
double bic_value(double sigma2, double df, double n);

struct CriterionPath {
    std::vector<int> grid;
    std::vector<double> value;   // NaN where excluded
    std::vector<double> df;
    int selected = 0;            // argmin over grid, smallest-m ties
    std::vector<int> excluded;   // grid entries with df+2 >= n
};

CriterionPath aic_corrected(const BoostModel& model, const Dataset& d,
                            const std::vector<int>& grid);
CriterionPath bic(const BoostModel& model, const Dataset& d, const std::vector<int>& grid);

struct StoppingReport {
    std::vector<int> grid;
    Eigen::MatrixXd risk;           // resample x grid, NaN rows for skipped folds
    std::vector<double> mean_risk;  // over non-skipped folds
    int selected = 0;               // m* attaining minimal mean risk, smallest-m ties
    std::string criterion;
    std::uint64_t seed = 0;
    std::vector<int> skipped_folds;
    std::vector<std::string> warnings;
};

/// Out-of-sample risk over a grid of stopping iterations: fit each resample's
/// training part once to max(grid) and evaluate the held-out empirical loss of
/// every truncation. The loss is the fitting family's own rho (Cox uses the
/// predictive partial likelihood), never the misclassification rate.
StoppingReport cv_risk(const Dataset& d, const FitConfig& config, const ResamplingScheme& scheme,
                       const std::vector<int>& grid);

/// Single-predictor benchmark generator: x uniform on (-0.2, 0.2),
/// y = (0.5 - 0.9 exp(-50 x^2)) x + 0.02 * N(0,1), rows ordered by x.
/// true_f receives the noise-free function values.
Dataset simulate_appendix(int n, std::uint64_t seed, Eigen::VectorXd* true_f = nullptr);

}  // namespace boostkit
