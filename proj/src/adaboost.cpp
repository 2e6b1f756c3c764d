#include "boostkit/adaboost.hpp"

#include <cmath>

#include "boostkit/common.hpp"

namespace boostkit {

namespace {
constexpr double kEpsilonFloor = 1e-10;  // keeps alpha finite on perfect stumps
}

AdaBoostModel fit_adaboost(const Dataset& d, int m_stop, const AdaBoostOptions& options) {
    if (m_stop < 0) throw ArgError("m_stop must be >= 0");
    if (d.response.kind != ResponseKind::Binary)
        throw DataError("adaboost needs a binary response (binary response required)");
    const Eigen::Index n = d.n_rows();
    const Eigen::VectorXd& y = d.response.values;
    const bool has_pos = (y.array() > 0).any();
    const bool has_neg = (y.array() < 0).any();
    if (!has_pos || !has_neg) throw DataError("adaboost: both classes must be present");

    AdaBoostModel model;
    model.names = d.names;
    model.label_negative = d.response.label_negative;
    model.label_positive = d.response.label_positive;

    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));

    for (int m = 1; m <= m_stop; ++m) {
        const StumpFit fit = fit_stump(d.predictors, y, w, options.n_threads);
        if (fit.weighted_error >= 0.5) {
            model.terminated_early = true;
            model.termination_reason =
                "no stump beats random guessing (weighted error >= 0.5) at round " +
                std::to_string(m);
            break;
        }
        const double eps = std::max(fit.weighted_error, kEpsilonFloor);
        const double alpha = 0.5 * std::log((1.0 - eps) / eps);
        model.rounds.push_back(AdaBoostRound{fit.stump, alpha, fit.weighted_error});

        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double h = fit.stump.predict(d.predictors(i, fit.stump.component));
            w[i] *= std::exp(-alpha * y[i] * h);
            total += w[i];
        }
        w /= total;

        if (fit.weighted_error == 0.0) {
            model.terminated_early = true;
            model.termination_reason = "perfect stump at round " + std::to_string(m);
            break;
        }
    }
    return model;
}

AdaBoostPrediction predict_adaboost(const AdaBoostModel& model, const Eigen::MatrixXd& x) {
    if (model.rounds.empty()) throw ArgError("adaboost model has no rounds");
    if (x.cols() != static_cast<Eigen::Index>(model.names.size()))
        throw DataError("predict: column count mismatch");
    Eigen::MatrixXd xs = x;
    if (model.scaling.applied)
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            xs.col(j) = (x.col(j).array() - model.scaling.mean[j]) / model.scaling.sd[j];

    AdaBoostPrediction out;
    out.margins = Eigen::VectorXd::Zero(x.rows());
    out.labels.resize(x.rows());
    for (const auto& round : model.rounds)
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            out.margins[i] += round.alpha * round.stump.predict(xs(i, round.stump.component));
    for (Eigen::Index i = 0; i < x.rows(); ++i) out.labels[i] = out.margins[i] >= 0.0 ? 1.0 : -1.0;
    return out;
}

std::vector<double> exponential_risk_path(const AdaBoostModel& model, const Dataset& d) {
    if (d.response.kind != ResponseKind::Binary)
        throw DataError("exponential risk path needs a binary response");
    const Eigen::Index n = d.n_rows();
    const Eigen::VectorXd& y = d.response.values;
    Eigen::MatrixXd xs = d.predictors;
    if (model.scaling.applied)
        for (Eigen::Index j = 0; j < xs.cols(); ++j)
            xs.col(j) = (xs.col(j).array() - model.scaling.mean[j]) / model.scaling.sd[j];

    std::vector<double> risk;
    risk.reserve(model.rounds.size() + 1);
    Eigen::VectorXd margin = Eigen::VectorXd::Zero(n);
    risk.push_back(1.0);  // empty vote: exp(0)
    for (const auto& round : model.rounds) {
        for (Eigen::Index i = 0; i < n; ++i)
            margin[i] += round.alpha * round.stump.predict(xs(i, round.stump.component));
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) s += std::exp(-y[i] * margin[i]);
        risk.push_back(s / static_cast<double>(n));
    }
    return risk;
}

}  // namespace boostkit
