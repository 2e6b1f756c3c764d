#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace boostkit {

// ---------------------------------------------------------------- linear --

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
};

/// Weighted least squares of u on [1, x] (or on x alone when
/// include_intercept is false). Throws NumericError on zero weighted
/// variance; callers treat such components as non-fittable.
LinearFit fit_linear(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                     const Eigen::VectorXd* w = nullptr, bool include_intercept = true);

/// H = X~ (X~' W X~)^-1 X~' W with X~ = [1, x].
Eigen::MatrixXd linear_hat(const Eigen::VectorXd& x, const Eigen::VectorXd* w = nullptr,
                           bool include_intercept = true);

// --------------------------------------------------------------- pspline --

/// Penalized B-spline base-learner: cubic basis on equidistant knots with a
/// second-order difference penalty, lambda calibrated to a target trace
/// (degrees of freedom) of the smoother.
class PSpline {
public:
    /// Builds the basis over the observed range of x. Defaults follow the
    /// usual P-spline setup: degree 3, 20 inner knots, difference order 2.
    PSpline(const Eigen::VectorXd& x, int degree = 3, int inner_knots = 20, int diff_order = 2);

    /// Rebuilds from serialized state (knots pin the basis exactly).
    PSpline(Eigen::VectorXd knots, int degree, int diff_order, double lambda);

    int basis_size() const { return q_; }
    int degree() const { return degree_; }
    int diff_order() const { return diff_order_; }
    double lambda() const { return lambda_; }
    void set_lambda(double l) { lambda_ = l; }
    const Eigen::VectorXd& knots() const { return knots_; }
    double xmin() const { return knots_[degree_]; }
    double xmax() const { return knots_[knots_.size() - degree_ - 1]; }
    const Eigen::MatrixXd& basis() const { return basis_; }
    const Eigen::MatrixXd& penalty() const { return penalty_; }

    /// Basis row at x. Outside the knot range the boundary row is extended
    /// linearly (value + derivative), so evaluation is defined everywhere.
    Eigen::VectorXd basis_row(double x) const;

    /// Basis matrix for a vector of evaluation points.
    Eigen::MatrixXd basis_matrix(const Eigen::VectorXd& x) const;

    /// trace of B (B'B + lambda D'D)^-1 B' for a candidate lambda.
    double df_for_lambda(double lambda) const;

    /// Bisection on log(lambda) in [-20, 40] until the smoother trace hits
    /// target_df (within 1e-6 by default). target_df must lie strictly
    /// between the penalty null-space dimension and rank(B).
    double calibrate_lambda(double target_df, double tol = 1e-6);

    /// gamma = (B'WB + lambda D'D)^-1 B'Wu. Falls back to an extra 1e-10
    /// ridge when the system is numerically singular; ridge_used() reports it.
    Eigen::VectorXd fit(const Eigen::VectorXd& u, const Eigen::VectorXd* w = nullptr) const;

    /// H = B (B'WB + lambda D'D)^-1 B'W.
    Eigen::MatrixXd hat(const Eigen::VectorXd* w = nullptr) const;

    int basis_rank() const;
    bool ridge_used() const { return ridge_used_; }

    /// Precomputes the uniform-weight factorization so repeated fit() calls
    /// inside a boosting loop cost O(nq + q^2).
    void freeze_uniform();

private:
    void build_penalty();
    void attach_data(const Eigen::VectorXd& x);

    int degree_;
    int inner_knots_;
    int diff_order_;
    int q_ = 0;
    double lambda_ = 0.0;
    Eigen::VectorXd knots_;
    Eigen::MatrixXd basis_;    // n x q over the training column
    Eigen::MatrixXd penalty_;  // q x q, D'D
    Eigen::MatrixXd btb_;      // B'B cached for df computations
    std::optional<Eigen::LDLT<Eigen::MatrixXd>> uniform_solver_;
    mutable bool ridge_used_ = false;
};

// ----------------------------------------------------------------- stump --

/// Decision stump: predicts polarity * sign(x_j - threshold), sign(0) := +1.
struct Stump {
    int component = 0;
    double threshold = 0.0;
    int polarity = 1;

    double predict(double x) const {
        const double s = x - threshold >= 0.0 ? 1.0 : -1.0;
        return polarity * s;
    }
};

struct StumpFit {
    Stump stump;
    double weighted_error = 0.0;  // normalized by the total weight
};

/// Exhaustive weighted-misclassification stump search over all components.
/// Candidate thresholds are one cut below each column's minimum (the
/// constant classifier) plus the midpoints between consecutive distinct
/// sorted values. Ties break on (error, component, threshold, polarity +1
/// first).
StumpFit fit_stump(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                   int n_threads = 1);

}  // namespace boostkit
