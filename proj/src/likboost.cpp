#include "boostkit/likboost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "boostkit/common.hpp"
#include "boostkit/parallel.hpp"

namespace boostkit {

GlmFamily glm_family_from_id(const std::string& id) {
    if (id == "gaussian") return GlmFamily::Gaussian;
    if (id == "logistic" || id == "binomial") return GlmFamily::Logistic;
    if (id == "poisson") return GlmFamily::Poisson;
    throw ArgError("unknown glm family '" + id + "' (expected gaussian, logistic or poisson)");
}

std::string glm_family_id(GlmFamily f) {
    switch (f) {
        case GlmFamily::Gaussian: return "gaussian";
        case GlmFamily::Logistic: return "logistic";
        case GlmFamily::Poisson: return "poisson";
    }
    return "?";
}

PenaltySpec PenaltySpec::lambda(double l) {
    if (l < 0.0) throw ArgError("penalty lambda must be >= 0");
    PenaltySpec p;
    p.mode = Mode::Lambda;
    p.value = l;
    return p;
}

PenaltySpec PenaltySpec::step_size(double nu) {
    if (!(nu > 0.0 && nu < 1.0)) throw ArgError("step size nu must be in (0,1)");
    PenaltySpec p;
    p.mode = Mode::StepSize;
    p.value = nu;
    return p;
}

double penalty_from_stepsize(double nu, const Dataset& d) {
    if (!(nu > 0.0 && nu < 1.0)) throw ArgError("step size nu must be in (0,1)");
    if (d.response.kind == ResponseKind::Survival) {
        const int events = d.response.event_count();
        if (events == 0) throw DataError("penalty_from_stepsize: survival data has no events");
        return events * (1.0 / nu - 1.0);
    }
    return static_cast<double>(d.n_rows()) * (1.0 / nu - 1.0);
}

// ------------------------------------------------------------------- glm --

namespace {

struct GlmWork {
    GlmFamily family;
    Eigen::VectorXd y;  // logistic: 0/1

    double mu(double eta) const {
        switch (family) {
            case GlmFamily::Gaussian: return eta;
            case GlmFamily::Logistic: return 1.0 / (1.0 + std::exp(-eta));
            case GlmFamily::Poisson: return std::exp(eta);
        }
        return eta;
    }
    double weight(double mu_value) const {
        switch (family) {
            case GlmFamily::Gaussian: return 1.0;
            case GlmFamily::Logistic: return mu_value * (1.0 - mu_value);
            case GlmFamily::Poisson: return mu_value;
        }
        return 1.0;
    }
    double loglik(const Eigen::VectorXd& eta) const {
        double l = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            switch (family) {
                case GlmFamily::Gaussian: {
                    const double r = y[i] - eta[i];
                    l -= 0.5 * r * r;
                    break;
                }
                case GlmFamily::Logistic: {
                    const double e = eta[i];
                    l += y[i] * e - (e > 30.0 ? e : std::log1p(std::exp(e)));
                    break;
                }
                case GlmFamily::Poisson: l += y[i] * eta[i] - std::exp(eta[i]); break;
            }
        }
        return l;
    }
};

double glm_intercept_mle(const GlmWork& work) {
    const double ybar = work.y.mean();
    switch (work.family) {
        case GlmFamily::Gaussian: return ybar;
        case GlmFamily::Logistic:
            if (ybar <= 0.0 || ybar >= 1.0)
                throw DataError("intercept undefined: response has a single class");
            return std::log(ybar / (1.0 - ybar));
        case GlmFamily::Poisson:
            if (!(ybar > 0.0)) throw DataError("intercept undefined: response mean is zero");
            return std::log(ybar);
    }
    return 0.0;
}

}  // namespace

LikBoostModel fit_glm(const Dataset& d, GlmFamily family, const PenaltySpec& penalty, int m_stop,
                      const LikBoostOptions& options) {
    if (m_stop < 0) throw ArgError("m_stop must be >= 0");
    const Eigen::Index n = d.n_rows();
    const Eigen::Index p = d.n_cols();

    GlmWork work;
    work.family = family;
    switch (family) {
        case GlmFamily::Gaussian:
            if (d.response.kind != ResponseKind::Continuous)
                throw DataError("gaussian glm needs a continuous response");
            work.y = d.response.values;
            break;
        case GlmFamily::Logistic: {
            if (d.response.kind != ResponseKind::Binary)
                throw DataError("logistic glm needs a binary response (binary response required)");
            work.y = (d.response.values.array() + 1.0) / 2.0;  // -1/+1 -> 0/1
            break;
        }
        case GlmFamily::Poisson:
            if (d.response.kind != ResponseKind::Continuous)
                throw DataError("poisson glm needs a (count) continuous response");
            for (Eigen::Index i = 0; i < n; ++i)
                if (d.response.values[i] < 0.0)
                    throw DataError("poisson glm needs non-negative responses");
            work.y = d.response.values;
            break;
    }

    LikBoostModel model;
    model.engine = LikBoostModel::Engine::Glm;
    model.glm_family = family;
    model.penalty = penalty;
    model.names = d.names;
    model.response_kind = d.response.kind;
    model.label_negative = d.response.label_negative;
    model.label_positive = d.response.label_positive;
    model.n_train = static_cast<int>(n);
    model.centers = d.predictors.colwise().mean();

    Eigen::MatrixXd xc = d.predictors;  // centered columns
    for (Eigen::Index j = 0; j < p; ++j) xc.col(j).array() -= model.centers[j];

    model.intercept0 = glm_intercept_mle(work);
    Eigen::VectorXd eta = Eigen::VectorXd::Constant(n, model.intercept0);
    model.loglik_path.push_back(work.loglik(eta));

    // Cumulative smoother bookkeeping, see confidence_bands(). `resp_map`
    // is the derivative of eta-hat w.r.t. the response (exact for
    // Gaussian); `hat` is the weighted hat matrix whose trace is the df.
    const bool track = options.track_hat;
    Eigen::MatrixXd resp_map, hat;
    if (track) {
        const double mu0 = work.mu(model.intercept0);
        const double w0 = work.weight(mu0);
        Eigen::VectorXd r0 = Eigen::VectorXd::Constant(n, 1.0 / (static_cast<double>(n) * w0));
        resp_map = Eigen::VectorXd::Ones(n) * r0.transpose();
        hat = Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
        model.intercept_row = r0;
        model.coefficient_rows = Eigen::MatrixXd::Zero(p, n);
        model.df_path.push_back(hat.trace());
        model.hat_tracked = true;
    }

    struct Candidate {
        double gamma = 0.0;
        double loglik = -std::numeric_limits<double>::infinity();
        double info = 0.0;
        bool ok = false;
    };
    std::vector<Candidate> candidates(static_cast<std::size_t>(p));

    for (int m = 1; m <= m_stop; ++m) {
        Eigen::VectorXd mu(n), w(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            mu[i] = work.mu(eta[i]);
            w[i] = work.weight(mu[i]);
        }
        const Eigen::VectorXd resid = work.y - mu;

        parallel_for(static_cast<int>(p), options.n_threads, [&](int j) {
            Candidate c;
            const Eigen::VectorXd& xj = xc.col(j);
            const double score = xj.dot(resid);
            const double info = (w.array() * xj.array().square()).sum();
            double lam;
            if (penalty.mode == PenaltySpec::Mode::Lambda) {
                lam = penalty.value;
            } else {
                lam = info * (1.0 / penalty.value - 1.0) / 2.0;
            }
            const double denom = info + 2.0 * lam;
            if (denom > 0.0) {
                c.gamma = score / denom;
                c.loglik = work.loglik(eta + c.gamma * xj);
                c.info = info;
                c.ok = true;
            }
            candidates[static_cast<std::size_t>(j)] = c;
        });

        int best = -1;
        for (Eigen::Index j = 0; j < p; ++j) {
            const Candidate& c = candidates[static_cast<std::size_t>(j)];
            if (!c.ok) continue;
            if (best < 0 || c.loglik > candidates[static_cast<std::size_t>(best)].loglik)
                best = static_cast<int>(j);
        }
        if (best < 0) throw NumericError("fit_glm: no fittable candidate");
        const Candidate& cb = candidates[static_cast<std::size_t>(best)];

        LikPathEntry entry;
        entry.component = best;
        entry.gamma = cb.gamma;

        if (track) {
            // a_m = d(gamma)/dy: gamma = x~' (y - mu(resp_map y)) / denom
            const Eigen::VectorXd& xj = xc.col(best);
            const double lam = penalty.mode == PenaltySpec::Mode::Lambda
                                   ? penalty.value
                                   : cb.info * (1.0 / penalty.value - 1.0) / 2.0;
            const double denom = cb.info + 2.0 * lam;
            Eigen::VectorXd wx = w.cwiseProduct(xj);
            Eigen::VectorXd a = (xj - resp_map.transpose() * wx) / denom;
            resp_map += xj * a.transpose();
            model.coefficient_rows.row(best) += a.transpose();
            // weighted-hat recursion for df
            Eigen::RowVectorXd hrow = wx.transpose() / denom;
            hat += xj * (hrow - hrow * hat);
        }

        eta += cb.gamma * xc.col(best);

        // one unpenalized Fisher-scoring step for the intercept
        double sw = 0.0, sr = 0.0;
        Eigen::VectorXd mu2(n), w2(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            mu2[i] = work.mu(eta[i]);
            w2[i] = work.weight(mu2[i]);
            sw += w2[i];
            sr += work.y[i] - mu2[i];
        }
        const double delta = sr / sw;
        eta.array() += delta;
        entry.intercept_delta = delta;

        if (track) {
            Eigen::VectorXd wv = w2;
            Eigen::VectorXd dvec = (Eigen::VectorXd::Ones(n) -
                                    resp_map.transpose() * wv) / sw;
            resp_map += Eigen::VectorXd::Ones(n) * dvec.transpose();
            model.intercept_row += dvec;
            Eigen::RowVectorXd h0row = wv.transpose() / sw;
            hat += Eigen::VectorXd::Ones(n) * (h0row - h0row * hat);
            model.df_path.push_back(hat.trace());
        }

        model.path.push_back(std::move(entry));
        model.loglik_path.push_back(work.loglik(eta));
    }

    if (track) {
        model.final_mu.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) model.final_mu[i] = work.mu(eta[i]);
        if (family == GlmFamily::Gaussian) {
            const double rss = (work.y - model.final_mu).squaredNorm();
            const double df = model.df_path.back();
            const double denom = std::max(1.0, static_cast<double>(n) - df);
            model.dispersion = rss / denom;
        } else {
            model.dispersion = 1.0;
        }
    }
    return model;
}

// ------------------------------------------------------------------- cox --

namespace {

// Observations grouped by descending time; each group shares one risk set
// (Breslow handling of ties).
struct CoxWork {
    Eigen::VectorXd time;
    Eigen::VectorXi status;
    std::vector<int> order_desc;
    std::vector<std::pair<int, int>> groups;  // [begin,end) into order_desc
    std::vector<int> group_events;

    void build() {
        const Eigen::Index n = time.size();
        order_desc.resize(static_cast<std::size_t>(n));
        std::iota(order_desc.begin(), order_desc.end(), 0);
        std::sort(order_desc.begin(), order_desc.end(),
                  [&](int a, int b) { return time[a] > time[b]; });
        groups.clear();
        group_events.clear();
        std::size_t i = 0;
        while (i < order_desc.size()) {
            std::size_t j = i;
            int events = 0;
            while (j < order_desc.size() && time[order_desc[j]] == time[order_desc[i]]) {
                events += status[order_desc[j]];
                ++j;
            }
            groups.emplace_back(static_cast<int>(i), static_cast<int>(j));
            group_events.push_back(events);
            i = j;
        }
    }

    double partial_loglik(const Eigen::VectorXd& eta) const {
        double ll = 0.0;
        double s0 = 0.0;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            for (int k = groups[g].first; k < groups[g].second; ++k) {
                const int idx = order_desc[static_cast<std::size_t>(k)];
                s0 += std::exp(eta[idx]);
                if (status[idx]) ll += eta[idx];
            }
            if (group_events[g] > 0) ll -= group_events[g] * std::log(s0);
        }
        return ll;
    }

    // Score and observed information for a single centered column, holding
    // eta fixed (candidate coefficient at zero).
    void score_info(const Eigen::VectorXd& x, const Eigen::VectorXd& exp_eta, double& score,
                    double& info) const {
        score = 0.0;
        info = 0.0;
        double s0 = 0.0, s1 = 0.0, s2 = 0.0;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            for (int k = groups[g].first; k < groups[g].second; ++k) {
                const int idx = order_desc[static_cast<std::size_t>(k)];
                const double e = exp_eta[idx];
                s0 += e;
                s1 += e * x[idx];
                s2 += e * x[idx] * x[idx];
                if (status[idx]) score += x[idx];
            }
            if (group_events[g] > 0) {
                const double m1 = s1 / s0;
                score -= group_events[g] * m1;
                info += group_events[g] * (s2 / s0 - m1 * m1);
            }
        }
    }

    // Gradient and Hessian (negated) of the partial log-likelihood for a
    // block of columns.
    void block_grad_hess(const Eigen::MatrixXd& xu, const Eigen::VectorXd& exp_eta,
                         Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
        const Eigen::Index k = xu.cols();
        grad = Eigen::VectorXd::Zero(k);
        hess = Eigen::MatrixXd::Zero(k, k);
        double s0 = 0.0;
        Eigen::VectorXd m1 = Eigen::VectorXd::Zero(k);
        Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(k, k);
        for (std::size_t g = 0; g < groups.size(); ++g) {
            for (int kk = groups[g].first; kk < groups[g].second; ++kk) {
                const int idx = order_desc[static_cast<std::size_t>(kk)];
                const double e = exp_eta[idx];
                s0 += e;
                m1 += e * xu.row(idx).transpose();
                m2 += e * xu.row(idx).transpose() * xu.row(idx);
                if (status[idx]) grad += xu.row(idx).transpose();
            }
            if (group_events[g] > 0) {
                const Eigen::VectorXd mean = m1 / s0;
                grad -= group_events[g] * mean;
                hess += group_events[g] * (m2 / s0 - mean * mean.transpose());
            }
        }
    }
};

}  // namespace

double cox_partial_loglik(const Eigen::VectorXd& time, const Eigen::VectorXi& status,
                          const Eigen::VectorXd& eta) {
    CoxWork work;
    work.time = time;
    work.status = status;
    work.build();
    return work.partial_loglik(eta);
}

LikBoostModel fit_cox(const Dataset& d, const PenaltySpec& penalty, int m_stop,
                      const std::vector<int>& unpenalized_components,
                      const LikBoostOptions& options) {
    if (m_stop < 0) throw ArgError("m_stop must be >= 0");
    if (d.response.kind != ResponseKind::Survival)
        throw DataError("likelihood-cox engine needs a survival response");
    const Eigen::Index n = d.n_rows();
    const Eigen::Index p = d.n_cols();
    if (d.response.event_count() == 0) throw DataError("cox: no events in survival response");

    std::vector<int> unpen = unpenalized_components;
    if (unpen.empty() && !d.unpenalized.empty()) unpen = d.unpenalized;
    std::sort(unpen.begin(), unpen.end());
    for (int j : unpen)
        if (j < 0 || j >= p) throw ArgError("unpenalized component index out of range");

    std::vector<char> is_unpen(static_cast<std::size_t>(p), 0);
    for (int j : unpen) is_unpen[static_cast<std::size_t>(j)] = 1;
    const Eigen::Index p_pen = p - static_cast<Eigen::Index>(unpen.size());
    if (penalty.mode == PenaltySpec::Mode::Lambda && penalty.value <= 0.0 && p_pen > n)
        throw ArgError("cox with more penalized covariates than observations needs lambda > 0");

    LikBoostModel model;
    model.engine = LikBoostModel::Engine::Cox;
    model.penalty = penalty;
    model.names = d.names;
    model.response_kind = ResponseKind::Survival;
    model.n_train = static_cast<int>(n);
    model.centers = d.predictors.colwise().mean();
    model.unpenalized = unpen;

    Eigen::MatrixXd xc = d.predictors;
    for (Eigen::Index j = 0; j < p; ++j) xc.col(j).array() -= model.centers[j];

    CoxWork work;
    work.time = d.response.time;
    work.status = d.response.status;
    work.build();

    Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd xu(n, static_cast<Eigen::Index>(unpen.size()));
    for (std::size_t k = 0; k < unpen.size(); ++k) xu.col(static_cast<Eigen::Index>(k)) = xc.col(unpen[k]);
    Eigen::VectorXd beta_u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unpen.size()));

    auto unpen_newton_step = [&](bool to_convergence) {
        if (unpen.empty()) return;
        const int max_iter = to_convergence ? 100 : 1;
        for (int it = 0; it < max_iter; ++it) {
            Eigen::VectorXd exp_eta = eta.array().exp();
            Eigen::VectorXd grad;
            Eigen::MatrixXd hess;
            work.block_grad_hess(xu, exp_eta, grad, hess);
            Eigen::LDLT<Eigen::MatrixXd> solver(hess);
            Eigen::VectorXd step = solver.solve(grad);
            if (solver.info() != Eigen::Success || !step.allFinite())
                throw NumericError("cox: singular information for unpenalized covariates");
            beta_u += step;
            eta += xu * step;
            if (!to_convergence) return;
            if (grad.lpNorm<Eigen::Infinity>() < 1e-10 || step.lpNorm<Eigen::Infinity>() < 1e-12)
                return;
        }
    };

    // Box-3 step (1): the mandatory block plays the intercept role and is
    // fit to convergence before boosting starts.
    unpen_newton_step(true);
    model.unpen_init = beta_u;
    model.loglik_path.push_back(work.partial_loglik(eta));

    Eigen::VectorXd coef = Eigen::VectorXd::Zero(p);
    struct Candidate {
        double statistic = -1.0;
        double gamma = 0.0;
        bool ok = false;
    };
    std::vector<Candidate> candidates(static_cast<std::size_t>(p));

    for (int m = 1; m <= m_stop; ++m) {
        const Eigen::VectorXd exp_eta = eta.array().exp();
        parallel_for(static_cast<int>(p), options.n_threads, [&](int j) {
            Candidate c;
            if (!is_unpen[static_cast<std::size_t>(j)]) {
                double score, info;
                work.score_info(xc.col(j), exp_eta, score, info);
                double lam;
                if (penalty.mode == PenaltySpec::Mode::Lambda)
                    lam = penalty.value;
                else
                    lam = info * (1.0 / penalty.value - 1.0) / 2.0;
                const double denom = info + 2.0 * lam;
                if (denom > 0.0) {
                    c.statistic = score * score / denom;
                    c.gamma = score / denom;
                    c.ok = true;
                }
            }
            candidates[static_cast<std::size_t>(j)] = c;
        });

        int best = -1;
        for (Eigen::Index j = 0; j < p; ++j) {
            const Candidate& c = candidates[static_cast<std::size_t>(j)];
            if (!c.ok) continue;
            if (best < 0 || c.statistic > candidates[static_cast<std::size_t>(best)].statistic)
                best = static_cast<int>(j);
        }
        if (best < 0) throw NumericError("fit_cox: no fittable penalized candidate");

        LikPathEntry entry;
        entry.component = best;
        entry.gamma = candidates[static_cast<std::size_t>(best)].gamma;
        coef[best] += entry.gamma;
        eta += entry.gamma * xc.col(best);

        unpen_newton_step(false);
        entry.unpenalized = beta_u;
        model.path.push_back(std::move(entry));
        model.loglik_path.push_back(work.partial_loglik(eta));
    }
    return model;
}

// ----------------------------------------------------------- predictions --

namespace {

Eigen::MatrixXd scaled_predictors(const LikBoostModel& model, const Eigen::MatrixXd& x) {
    if (x.cols() != static_cast<Eigen::Index>(model.names.size()))
        throw DataError("predict: expected " + std::to_string(model.names.size()) +
                        " predictor columns, got " + std::to_string(x.cols()));
    Eigen::MatrixXd xs = x;
    if (model.scaling.applied)
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            xs.col(j) = (x.col(j).array() - model.scaling.mean[j]) / model.scaling.sd[j];
    return xs;
}

}  // namespace

Eigen::VectorXd predict_lik(const LikBoostModel& model, const Eigen::MatrixXd& x,
                            std::optional<int> at_m, PredictScale scale) {
    const int m = at_m.value_or(model.m_stop());
    if (m < 0 || m > model.m_stop()) throw ArgError("at_m out of range");
    Eigen::MatrixXd xs = scaled_predictors(model, x);
    const Eigen::Index rows = xs.rows();
    Eigen::VectorXd eta = Eigen::VectorXd::Zero(rows);

    if (model.engine == LikBoostModel::Engine::Glm) {
        eta.array() += model.intercept0;
        for (int i = 0; i < m; ++i) {
            const LikPathEntry& e = model.path[static_cast<std::size_t>(i)];
            const double c = model.centers[e.component];
            for (Eigen::Index r = 0; r < rows; ++r)
                eta[r] += e.gamma * (xs(r, e.component) - c);
            eta.array() += e.intercept_delta;
        }
        if (scale == PredictScale::Response) {
            GlmWork work;
            work.family = model.glm_family;
            for (Eigen::Index r = 0; r < rows; ++r) eta[r] = work.mu(eta[r]);
        }
        return eta;
    }

    // cox: linear predictor (log relative risk vs the centered baseline)
    const Eigen::VectorXd& beta_u =
        m == 0 ? model.unpen_init : model.path[static_cast<std::size_t>(m - 1)].unpenalized;
    for (std::size_t k = 0; k < model.unpenalized.size(); ++k) {
        const int j = model.unpenalized[k];
        const double c = model.centers[j];
        for (Eigen::Index r = 0; r < rows; ++r)
            eta[r] += beta_u[static_cast<Eigen::Index>(k)] * (xs(r, j) - c);
    }
    for (int i = 0; i < m; ++i) {
        const LikPathEntry& e = model.path[static_cast<std::size_t>(i)];
        const double c = model.centers[e.component];
        for (Eigen::Index r = 0; r < rows; ++r)
            eta[r] += e.gamma * (xs(r, e.component) - c);
    }
    if (scale == PredictScale::Response) eta = eta.array().exp();
    return eta;
}

std::pair<double, Eigen::VectorXd> LikBoostModel::coefficients(std::optional<int> at_m) const {
    const int m = at_m.value_or(m_stop());
    if (m < 0 || m > m_stop()) throw ArgError("at_m out of range");
    const auto p = static_cast<Eigen::Index>(names.size());
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    double intercept = intercept0;
    for (int i = 0; i < m; ++i) {
        const LikPathEntry& e = path[static_cast<std::size_t>(i)];
        beta[e.component] += e.gamma;
        intercept += e.intercept_delta;
    }
    if (engine == Engine::Cox) {
        const Eigen::VectorXd& bu =
            m == 0 ? unpen_init : path[static_cast<std::size_t>(m - 1)].unpenalized;
        for (std::size_t k = 0; k < unpenalized.size(); ++k)
            beta[unpenalized[k]] = bu[static_cast<Eigen::Index>(k)];
        intercept = 0.0;
    }
    // fold internal centering (and any standardization) back to the original scale
    for (Eigen::Index j = 0; j < p; ++j) {
        double mean = centers[j], sd = 1.0;
        if (scaling.applied) {
            mean = scaling.mean[j] + scaling.sd[j] * centers[j];
            sd = scaling.sd[j];
        }
        if (engine == Engine::Glm) intercept -= beta[j] / sd * mean;
        beta[j] /= sd;
    }
    return {intercept, beta};
}

std::vector<double> lik_risk_path(const LikBoostModel& model, const Dataset& d) {
    Eigen::MatrixXd xs = scaled_predictors(model, d.predictors);
    const Eigen::Index n = xs.rows();
    std::vector<double> risks;
    risks.reserve(model.path.size() + 1);

    if (model.engine == LikBoostModel::Engine::Glm) {
        GlmWork work;
        work.family = model.glm_family;
        switch (model.glm_family) {
            case GlmFamily::Gaussian:
            case GlmFamily::Poisson:
                if (d.response.kind != ResponseKind::Continuous)
                    throw DataError("risk path: continuous response required");
                work.y = d.response.values;
                break;
            case GlmFamily::Logistic:
                if (d.response.kind != ResponseKind::Binary)
                    throw DataError("risk path: binary response required");
                work.y = (d.response.values.array() + 1.0) / 2.0;
                break;
        }
        Eigen::VectorXd eta = Eigen::VectorXd::Constant(n, model.intercept0);
        risks.push_back(-work.loglik(eta) / static_cast<double>(n));
        for (const auto& e : model.path) {
            const double c = model.centers[e.component];
            for (Eigen::Index r = 0; r < n; ++r) eta[r] += e.gamma * (xs(r, e.component) - c);
            eta.array() += e.intercept_delta;
            risks.push_back(-work.loglik(eta) / static_cast<double>(n));
        }
        return risks;
    }

    if (d.response.kind != ResponseKind::Survival)
        throw DataError("risk path: survival response required");
    const double events = std::max(1, d.response.event_count());
    Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd beta_prev = model.unpen_init;
    for (std::size_t k = 0; k < model.unpenalized.size(); ++k) {
        const int j = model.unpenalized[k];
        for (Eigen::Index r = 0; r < n; ++r)
            eta[r] += beta_prev[static_cast<Eigen::Index>(k)] * (xs(r, j) - model.centers[j]);
    }
    risks.push_back(-cox_partial_loglik(d.response.time, d.response.status, eta) / events);
    for (const auto& e : model.path) {
        const double c = model.centers[e.component];
        for (Eigen::Index r = 0; r < n; ++r) eta[r] += e.gamma * (xs(r, e.component) - c);
        for (std::size_t k = 0; k < model.unpenalized.size(); ++k) {
            const int j = model.unpenalized[k];
            const double delta = e.unpenalized[static_cast<Eigen::Index>(k)] -
                                 beta_prev[static_cast<Eigen::Index>(k)];
            if (delta != 0.0)
                for (Eigen::Index r = 0; r < n; ++r) eta[r] += delta * (xs(r, j) - model.centers[j]);
        }
        beta_prev = e.unpenalized.size() > 0 ? e.unpenalized : beta_prev;
        risks.push_back(-cox_partial_loglik(d.response.time, d.response.status, eta) / events);
    }
    return risks;
}

BandTable confidence_bands(const LikBoostModel& model, int component,
                           const Eigen::VectorXd& grid) {
    if (model.engine != LikBoostModel::Engine::Glm)
        throw ArgError("confidence bands are available for the glm engine only");
    if (!model.hat_tracked) throw ArgError("model was fitted without hat tracking");
    if (component < 0 || component >= static_cast<int>(model.names.size()))
        throw ArgError("component out of range");
    if (grid.size() == 0) throw ArgError("empty grid");

    BandTable out;
    out.grid = grid;
    out.estimate = Eigen::VectorXd::Zero(grid.size());
    out.lower = Eigen::VectorXd::Zero(grid.size());
    out.upper = Eigen::VectorXd::Zero(grid.size());

    double beta = 0.0;
    double intercept_internal = model.intercept0;
    for (const auto& e : model.path) {
        if (e.component == component) {
            beta += e.gamma;
            out.selected = true;
        }
        intercept_internal += e.intercept_delta;
    }
    if (model.m_stop() > 0 && !out.selected) return out;  // zero-width at zero, flagged

    Eigen::VectorXd g = grid;
    if (model.scaling.applied) {
        const auto j = static_cast<std::size_t>(component);
        g = (grid.array() - model.scaling.mean[j]) / model.scaling.sd[j];
    }

    Eigen::VectorXd variance_weights(model.n_train);
    for (int i = 0; i < model.n_train; ++i) {
        switch (model.glm_family) {
            case GlmFamily::Gaussian: variance_weights[i] = model.dispersion; break;
            case GlmFamily::Logistic:
                variance_weights[i] = model.final_mu[i] * (1.0 - model.final_mu[i]);
                break;
            case GlmFamily::Poisson: variance_weights[i] = model.final_mu[i]; break;
        }
    }

    const double c = model.centers[component];
    for (Eigen::Index k = 0; k < g.size(); ++k) {
        const double xk = g[k] - c;
        out.estimate[k] = intercept_internal + beta * xk;
        Eigen::VectorXd row =
            model.intercept_row + xk * model.coefficient_rows.row(component).transpose();
        const double var = (row.array().square() * variance_weights.array()).sum();
        const double se = std::sqrt(std::max(0.0, var));
        out.lower[k] = out.estimate[k] - 1.96 * se;
        out.upper[k] = out.estimate[k] + 1.96 * se;
    }
    return out;
}

}  // namespace boostkit
