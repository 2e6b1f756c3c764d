#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "boostkit/dataset.hpp"

namespace boostkit {

enum class Family { L2, Laplace, Huber, Exponential, Logistic, Gamma };

Family family_from_id(const std::string& id);  // "l2", "laplace", "huber", ...
std::string family_id(Family f);

/// Whether the raw prediction lives on a link scale that needs transforming
/// for response-scale output.
double inverse_link(Family f, double link_value);

/// Loss family: loss values, negative gradients, offset initializer and
/// empirical risk. Huber carries its threshold delta; the boosting engine
/// recomputes an adaptive delta (median absolute residual) before each
/// gradient evaluation unless a fixed override is set.
class LossFamily {
public:
    explicit LossFamily(Family id, std::optional<double> huber_delta = std::nullopt);

    Family id() const { return id_; }
    bool huber_adaptive() const { return id_ == Family::Huber && adaptive_; }
    double huber_delta() const { return delta_; }
    void set_huber_delta(double d) { delta_ = d; }

    /// Throws DataError if the response variant cannot feed this family.
    void check_response(const ResponseVector& r) const;

    double loss(double y, double f) const;
    Eigen::VectorXd negative_gradient(const Eigen::VectorXd& y, const Eigen::VectorXd& f) const;

    /// The constant minimizing the (weighted) empirical risk: mean for L2,
    /// median for Laplace/Huber, log-odds in the family's link convention
    /// for Logistic/Exponential, log(mean) for Gamma.
    double offset(const Eigen::VectorXd& y, const Eigen::VectorXd* weights = nullptr) const;

    /// (1/sum w) * sum w_i * loss(y_i, f_i).
    double empirical_risk(const Eigen::VectorXd& y, const Eigen::VectorXd& f,
                          const Eigen::VectorXd* weights = nullptr) const;

    /// Median absolute residual, the adaptive Huber threshold.
    static double median_abs_residual(const Eigen::VectorXd& y, const Eigen::VectorXd& f);

private:
    Family id_;
    double delta_ = 1.0;
    bool adaptive_ = true;
};

/// Lower weighted median: smallest value whose cumulative weight reaches
/// half the total.
double weighted_median(const Eigen::VectorXd& values, const Eigen::VectorXd* weights = nullptr);

}  // namespace boostkit
