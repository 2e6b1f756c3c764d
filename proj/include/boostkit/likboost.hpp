#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "boostkit/dataset.hpp"
#include "boostkit/gradboost.hpp"  // PredictScale

namespace boostkit {

enum class GlmFamily { Gaussian, Logistic, Poisson };

GlmFamily glm_family_from_id(const std::string& id);
std::string glm_family_id(GlmFamily f);

/// Penalty attached to each candidate log-likelihood, l(gamma) - lambda*gamma^2.
/// Two ways to pin it down:
///  - Lambda: an explicit global lambda (the CoxBoost-style fixed penalty).
///  - StepSize: per-candidate lambda_j = I_j (1/nu - 1) / 2, which makes the
///    one-step update exactly nu times the unpenalized Newton step. With a
///    Gaussian response this reproduces the gradient-boosting L2 path.
struct PenaltySpec {
    enum class Mode { Lambda, StepSize };
    Mode mode = Mode::Lambda;
    double value = 0.0;

    static PenaltySpec lambda(double l);
    static PenaltySpec step_size(double nu);
};

/// Global lambda for a requested step size: (sum of events)*(1/nu - 1) for
/// survival data, n*(1/nu - 1) otherwise.
double penalty_from_stepsize(double nu, const Dataset& d);

struct LikPathEntry {
    int component = 0;
    double gamma = 0.0;            // penalized one-step estimate
    double intercept_delta = 0.0;  // glm intercept re-estimation step
    Eigen::VectorXd unpenalized;   // cox: mandatory coefficients after this step
};

struct LikBoostOptions {
    bool track_hat = true;  // glm only: cumulative smoother for df + bands
    int n_threads = 1;
};

struct LikBoostModel {
    enum class Engine { Glm, Cox };
    Engine engine = Engine::Glm;
    GlmFamily glm_family = GlmFamily::Gaussian;
    PenaltySpec penalty;
    std::vector<std::string> names;
    Eigen::VectorXd centers;  // internal per-column centering
    double intercept0 = 0.0;  // glm: intercept-only MLE
    std::vector<LikPathEntry> path;
    std::vector<int> unpenalized;   // cox: mandatory component indices
    Eigen::VectorXd unpen_init;     // cox: full maximum-partial-likelihood fit at m=0
    std::vector<double> loglik_path;  // size m_stop+1; cox: partial log-likelihood
    std::vector<double> df_path;      // glm with track_hat: trace of cumulative smoother
    Scaling scaling;
    ResponseKind response_kind = ResponseKind::Continuous;
    std::string label_negative, label_positive;

    // Band bookkeeping (glm with track_hat): every estimate is a linear map
    // of the response, est = row . y, so pointwise variances are quadratic
    // forms in these rows.
    bool hat_tracked = false;
    Eigen::VectorXd intercept_row;   // n
    Eigen::MatrixXd coefficient_rows;  // p x n
    Eigen::VectorXd final_mu;        // variance function input
    double dispersion = 1.0;         // Gaussian: RSS/(n - df); else 1
    int n_train = 0;

    int m_stop() const { return static_cast<int>(path.size()); }

    /// Intercept and per-component coefficients on the original data scale.
    std::pair<double, Eigen::VectorXd> coefficients(std::optional<int> at_m = std::nullopt) const;
};

/// Component-wise likelihood boosting for GLMs: start from the intercept-only
/// MLE, then per iteration take one penalized Fisher-scoring step for every
/// candidate, keep the one with the largest candidate log-likelihood and
/// re-estimate the intercept with one unpenalized step.
LikBoostModel fit_glm(const Dataset& d, GlmFamily family, const PenaltySpec& penalty, int m_stop,
                      const LikBoostOptions& options = {});

/// Cox variant: candidates score by U^2/(I + 2 lambda) on the partial
/// likelihood (Breslow ties), mandatory covariates refit by one unpenalized
/// Newton step after each update (full Newton at initialization).
LikBoostModel fit_cox(const Dataset& d, const PenaltySpec& penalty, int m_stop,
                      const std::vector<int>& unpenalized_components = {},
                      const LikBoostOptions& options = {});

Eigen::VectorXd predict_lik(const LikBoostModel& model, const Eigen::MatrixXd& x,
                            std::optional<int> at_m = std::nullopt,
                            PredictScale scale = PredictScale::Link);

struct BandTable {
    Eigen::VectorXd grid;
    Eigen::VectorXd estimate;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    bool selected = false;
};

/// Approximate 95% pointwise bands for intercept + component-j effect,
/// from the cumulative-smoother recursion. GLM engine only.
BandTable confidence_bands(const LikBoostModel& model, int component, const Eigen::VectorXd& grid);

/// Breslow partial log-likelihood at linear predictor eta.
double cox_partial_loglik(const Eigen::VectorXd& time, const Eigen::VectorXi& status,
                          const Eigen::VectorXd& eta);

/// Empirical risk of every truncation m = 0..m_stop evaluated on `d`: mean
/// negative log-likelihood for glm, negative partial log-likelihood per
/// event for cox. Shared by training reports and resampling-based stopping.
std::vector<double> lik_risk_path(const LikBoostModel& model, const Dataset& d);

}  // namespace boostkit
