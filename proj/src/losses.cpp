#include "boostkit/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "boostkit/common.hpp"

namespace boostkit {

Family family_from_id(const std::string& id) {
    if (id == "l2") return Family::L2;
    if (id == "laplace") return Family::Laplace;
    if (id == "huber") return Family::Huber;
    if (id == "exponential") return Family::Exponential;
    if (id == "logistic") return Family::Logistic;
    if (id == "gamma") return Family::Gamma;
    throw ArgError("unknown loss family '" + id +
                   "' (expected l2, laplace, huber, exponential, logistic or gamma)");
}

std::string family_id(Family f) {
    switch (f) {
        case Family::L2: return "l2";
        case Family::Laplace: return "laplace";
        case Family::Huber: return "huber";
        case Family::Exponential: return "exponential";
        case Family::Logistic: return "logistic";
        case Family::Gamma: return "gamma";
    }
    return "?";
}

double inverse_link(Family f, double v) {
    switch (f) {
        case Family::Gamma: return std::exp(v);
        case Family::Logistic: return 1.0 / (1.0 + std::exp(-v));       // f is the log-odds
        case Family::Exponential: return 1.0 / (1.0 + std::exp(-2.0 * v));  // half log-odds scale
        default: return v;
    }
}

LossFamily::LossFamily(Family id, std::optional<double> huber_delta) : id_(id) {
    if (huber_delta) {
        delta_ = *huber_delta;
        adaptive_ = false;
        if (delta_ <= 0.0) throw ArgError("huber delta must be positive");
    }
}

void LossFamily::check_response(const ResponseVector& r) const {
    if (r.kind == ResponseKind::Survival)
        throw DataError("survival response requires the likelihood-cox engine");
    const bool is_binary_family = id_ == Family::Exponential || id_ == Family::Logistic;
    if (is_binary_family) {
        for (Eigen::Index i = 0; i < r.values.size(); ++i)
            if (r.values[i] != 1.0 && r.values[i] != -1.0)
                throw DataError(family_id(id_) + " loss needs a -1/+1 response (binary response required)");
    }
    if (id_ == Family::Gamma) {
        for (Eigen::Index i = 0; i < r.values.size(); ++i)
            if (!(r.values[i] > 0.0))
                throw DataError("gamma loss needs strictly positive responses");
    }
}

double LossFamily::loss(double y, double f) const {
    switch (id_) {
        case Family::L2: {
            const double r = y - f;
            return 0.5 * r * r;
        }
        case Family::Laplace: return std::abs(y - f);
        case Family::Huber: {
            const double r = std::abs(y - f);
            return r <= delta_ ? 0.5 * r * r : delta_ * (r - 0.5 * delta_);
        }
        case Family::Exponential: return std::exp(-y * f);
        case Family::Logistic: {
            // log(1 + exp(-yf)) without overflow for large |yf|
            const double m = -y * f;
            return m > 30.0 ? m : std::log1p(std::exp(m));
        }
        case Family::Gamma:
            // negative Gamma log-likelihood in mu = exp(f), up to constants
            return y * std::exp(-f) + f;
    }
    return 0.0;
}

Eigen::VectorXd LossFamily::negative_gradient(const Eigen::VectorXd& y,
                                              const Eigen::VectorXd& f) const {
    if (y.size() != f.size()) throw DataError("negative_gradient: length mismatch");
    Eigen::VectorXd u(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double r = y[i] - f[i];
        switch (id_) {
            case Family::L2: u[i] = r; break;
            case Family::Laplace: u[i] = r > 0 ? 1.0 : (r < 0 ? -1.0 : 0.0); break;
            case Family::Huber:
                u[i] = std::abs(r) <= delta_ ? r : delta_ * (r > 0 ? 1.0 : -1.0);
                break;
            case Family::Exponential: u[i] = y[i] * std::exp(-y[i] * f[i]); break;
            case Family::Logistic: {
                const double e = y[i] * f[i];
                u[i] = e > 30.0 ? y[i] * std::exp(-e) : y[i] / (1.0 + std::exp(e));
                break;
            }
            case Family::Gamma: u[i] = y[i] * std::exp(-f[i]) - 1.0; break;
        }
    }
    return u;
}

double weighted_median(const Eigen::VectorXd& values, const Eigen::VectorXd* weights) {
    const Eigen::Index n = values.size();
    if (n == 0) throw DataError("median of empty vector");
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) total += weights ? (*weights)[i] : 1.0;
    if (total <= 0.0) throw DataError("weighted median: weights sum to zero");
    double cum = 0.0;
    for (Eigen::Index idx : order) {
        cum += weights ? (*weights)[idx] : 1.0;
        if (cum >= 0.5 * total) return values[idx];
    }
    return values[order.back()];
}

double LossFamily::offset(const Eigen::VectorXd& y, const Eigen::VectorXd* weights) const {
    const Eigen::Index n = y.size();
    if (n == 0) throw DataError("offset of empty response");
    double wsum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) wsum += weights ? (*weights)[i] : 1.0;
    if (wsum <= 0.0) throw DataError("offset: weights sum to zero");
    switch (id_) {
        case Family::L2: {
            double s = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) s += (weights ? (*weights)[i] : 1.0) * y[i];
            return s / wsum;
        }
        case Family::Laplace:
        case Family::Huber: return weighted_median(y, weights);
        case Family::Exponential:
        case Family::Logistic: {
            double pos = 0.0;
            for (Eigen::Index i = 0; i < n; ++i)
                if (y[i] > 0) pos += weights ? (*weights)[i] : 1.0;
            const double pbar = pos / wsum;
            if (pbar <= 0.0 || pbar >= 1.0)
                throw DataError("offset undefined: response has a single class");
            const double logodds = std::log(pbar / (1.0 - pbar));
            // Exponential loss is minimized by the half log-odds, logistic
            // (full log-odds convention) by the log-odds itself.
            return id_ == Family::Exponential ? 0.5 * logodds : logodds;
        }
        case Family::Gamma: {
            double s = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) s += (weights ? (*weights)[i] : 1.0) * y[i];
            return std::log(s / wsum);
        }
    }
    return 0.0;
}

double LossFamily::empirical_risk(const Eigen::VectorXd& y, const Eigen::VectorXd& f,
                                  const Eigen::VectorXd* weights) const {
    if (y.size() != f.size()) throw DataError("empirical_risk: length mismatch");
    double wsum = 0.0, s = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double w = weights ? (*weights)[i] : 1.0;
        if (w < 0.0) throw DataError("empirical_risk: negative weight");
        wsum += w;
        s += w * loss(y[i], f[i]);
    }
    if (wsum <= 0.0) throw DataError("empirical_risk: weights sum to zero");
    return s / wsum;
}

double LossFamily::median_abs_residual(const Eigen::VectorXd& y, const Eigen::VectorXd& f) {
    return weighted_median((y - f).cwiseAbs());
}

}  // namespace boostkit
