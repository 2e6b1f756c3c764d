#include "boostkit/gradboost.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "boostkit/common.hpp"
#include "boostkit/parallel.hpp"

namespace boostkit {

namespace {

Eigen::MatrixXd apply_scaling(const Eigen::MatrixXd& x, const Scaling& s) {
    if (!s.applied) return x;
    Eigen::MatrixXd out = x;
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        out.col(j) = (x.col(j).array() - s.mean[j]) / s.sd[j];
    return out;
}

// Increment of one path entry evaluated on a prediction basis cache.
struct SplineEval {
    const PSpline* spline = nullptr;
    Eigen::MatrixXd basis;  // rows for the prediction points
};

double linear_increment(const PathEntry& e, double x) { return e.intercept + e.slope * x; }

}  // namespace

int select_component(const Eigen::VectorXd& u,
                     const std::vector<std::optional<Eigen::VectorXd>>& fits) {
    int best = -1;
    double best_sse = 0.0;
    for (std::size_t j = 0; j < fits.size(); ++j) {
        if (!fits[j]) continue;
        const double sse = (u - *fits[j]).squaredNorm();
        if (best < 0 || sse < best_sse) {
            best = static_cast<int>(j);
            best_sse = sse;
        }
    }
    if (best < 0) throw NumericError("select_component: no fittable component");
    return best;
}

BoostModel fit_gradboost(const Dataset& d, const LossFamily& family,
                         const std::vector<LearnerConfig>& configs, int m_stop,
                         double step_length, const GradBoostOptions& options) {
    if (m_stop < 0) throw ArgError("m_stop must be >= 0");
    if (!(step_length > 0.0 && step_length <= 1.0)) throw ArgError("step length must be in (0,1]");
    family.check_response(d.response);
    const Eigen::Index n = d.n_rows();
    const Eigen::Index p = d.n_cols();
    if (n < 1 || p < 1) throw DataError("empty dataset");
    if (!(configs.size() == 1 || configs.size() == static_cast<std::size_t>(p)))
        throw ArgError("learner config count must be 1 or p");

    const Eigen::VectorXd& y = d.response.values;

    BoostModel model;
    model.family = family.id();
    if (family.id() == Family::Huber && !family.huber_adaptive())
        model.huber_fixed_delta = family.huber_delta();
    model.step_length = step_length;
    model.names = d.names;
    model.response_kind = d.response.kind;
    model.label_negative = d.response.label_negative;
    model.label_positive = d.response.label_positive;

    // Build per-component learners; zero-variance columns drop out of the
    // selection and are reported once in the model metadata.
    std::vector<std::unique_ptr<PSpline>> splines(static_cast<std::size_t>(p));
    model.learners.resize(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) {
        const LearnerConfig& cfg = configs.size() == 1 ? configs[0] : configs[static_cast<std::size_t>(j)];
        ComponentLearner& cl = model.learners[static_cast<std::size_t>(j)];
        cl.kind = cfg.kind;
        cl.name = d.names[static_cast<std::size_t>(j)];
        cl.x_mean = d.predictors.col(j).mean();
        const double var = (d.predictors.col(j).array() - cl.x_mean).square().sum();
        if (var <= 0.0) {
            cl.fittable = false;
            model.non_fittable.push_back(cl.name);
            continue;
        }
        if (cfg.kind == LearnerKind::PSpline) {
            auto ps = std::make_unique<PSpline>(d.predictors.col(j), cfg.degree, cfg.inner_knots,
                                                cfg.diff_order);
            ps->calibrate_lambda(cfg.target_df);
            ps->freeze_uniform();
            cl.knots = ps->knots();
            cl.lambda = ps->lambda();
            cl.degree = cfg.degree;
            cl.diff_order = cfg.diff_order;
            cl.basis_col_means = ps->basis().colwise().mean();
            splines[static_cast<std::size_t>(j)] = std::move(ps);
        }
    }
    if (std::none_of(model.learners.begin(), model.learners.end(),
                     [](const ComponentLearner& c) { return c.fittable; }))
        throw DataError("all components are non-fittable (constant columns)");

    LossFamily fam = family;
    model.offset = fam.offset(y);
    Eigen::VectorXd f = Eigen::VectorXd::Constant(n, model.offset);

    auto current_delta = [&](const Eigen::VectorXd& fit) {
        return family.huber_adaptive() ? LossFamily::median_abs_residual(y, fit)
                                       : family.huber_delta();
    };
    if (family.id() == Family::Huber) fam.set_huber_delta(current_delta(f));
    model.training_risk.reserve(static_cast<std::size_t>(m_stop) + 1);
    model.training_risk.push_back(fam.empirical_risk(y, f));

    std::vector<std::optional<Eigen::VectorXd>> fits(static_cast<std::size_t>(p));
    std::vector<PathEntry> candidates(static_cast<std::size_t>(p));

    for (int m = 1; m <= m_stop; ++m) {
        if (family.huber_adaptive()) fam.set_huber_delta(current_delta(f));
        const Eigen::VectorXd u = fam.negative_gradient(y, f);

        parallel_for(static_cast<int>(p), options.n_threads, [&](int j) {
            const auto sj = static_cast<std::size_t>(j);
            fits[sj].reset();
            const ComponentLearner& cl = model.learners[sj];
            if (!cl.fittable) return;
            PathEntry entry;
            entry.component = j;
            Eigen::VectorXd fitted(n);
            if (cl.kind == LearnerKind::Linear) {
                const LinearFit lf = fit_linear(d.predictors.col(j), u);
                entry.intercept = lf.intercept;
                entry.slope = lf.slope;
                for (Eigen::Index i = 0; i < n; ++i)
                    fitted[i] = linear_increment(entry, d.predictors(i, j));
            } else {
                const PSpline& ps = *splines[sj];
                entry.gamma = ps.fit(u);
                for (Eigen::Index i = 0; i < n; ++i)
                    fitted[i] = ps.basis().row(i).dot(entry.gamma);
            }
            candidates[sj] = std::move(entry);
            fits[sj] = std::move(fitted);
        });

        const int best = select_component(u, fits);
        PathEntry chosen = candidates[static_cast<std::size_t>(best)];
        chosen.huber_delta = fam.huber_delta();
        f += step_length * *fits[static_cast<std::size_t>(best)];
        model.path.push_back(std::move(chosen));
        model.training_risk.push_back(fam.empirical_risk(y, f));
    }
    return model;
}

namespace {

// Shared increment accumulation for predict/risk_path: adds the first
// `at_m` path increments to f, evaluated on (already scaled) predictors.
void accumulate_path(const BoostModel& model, const Eigen::MatrixXd& xs, int at_m,
                     Eigen::VectorXd& f,
                     const std::function<void(int, const Eigen::VectorXd&)>& per_step = nullptr) {
    const Eigen::Index n = xs.rows();
    // Basis rows per spline component, built once.
    std::map<int, std::pair<PSpline, Eigen::MatrixXd>> spline_cache;
    for (int m = 0; m < at_m; ++m) {
        const PathEntry& e = model.path[static_cast<std::size_t>(m)];
        const ComponentLearner& cl = model.learners[static_cast<std::size_t>(e.component)];
        if (cl.kind == LearnerKind::PSpline && spline_cache.find(e.component) == spline_cache.end()) {
            PSpline ps(cl.knots, cl.degree, cl.diff_order, cl.lambda);
            Eigen::MatrixXd rows = ps.basis_matrix(xs.col(e.component));
            spline_cache.emplace(e.component, std::make_pair(std::move(ps), std::move(rows)));
        }
    }
    for (int m = 0; m < at_m; ++m) {
        const PathEntry& e = model.path[static_cast<std::size_t>(m)];
        const ComponentLearner& cl = model.learners[static_cast<std::size_t>(e.component)];
        if (cl.kind == LearnerKind::Linear) {
            for (Eigen::Index i = 0; i < n; ++i)
                f[i] += model.step_length * linear_increment(e, xs(i, e.component));
        } else {
            const Eigen::MatrixXd& rows = spline_cache.at(e.component).second;
            for (Eigen::Index i = 0; i < n; ++i)
                f[i] += model.step_length * rows.row(i).dot(e.gamma);
        }
        if (per_step) per_step(m + 1, f);
    }
}

}  // namespace

Eigen::VectorXd predict(const BoostModel& model, const Eigen::MatrixXd& x,
                        std::optional<int> at_m, PredictScale scale) {
    if (x.cols() != static_cast<Eigen::Index>(model.names.size()))
        throw DataError("predict: expected " + std::to_string(model.names.size()) +
                        " predictor columns, got " + std::to_string(x.cols()));
    const int m = at_m.value_or(model.m_stop());
    if (m < 0 || m > model.m_stop()) throw ArgError("at_m out of range");
    Eigen::MatrixXd xs = apply_scaling(x, model.scaling);
    Eigen::VectorXd f = Eigen::VectorXd::Constant(x.rows(), model.offset);
    accumulate_path(model, xs, m, f);
    if (scale == PredictScale::Response)
        for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = inverse_link(model.family, f[i]);
    return f;
}

BoostModel truncate(const BoostModel& model, int m) {
    if (m < 0 || m > model.m_stop()) throw ArgError("truncate: m out of range");
    BoostModel out = model;
    out.path.resize(static_cast<std::size_t>(m));
    out.training_risk.resize(static_cast<std::size_t>(m) + 1);
    return out;
}

AggregatedCoefficients aggregate_coefficients(const BoostModel& model, std::optional<int> at_m) {
    const int m = at_m.value_or(model.m_stop());
    if (m < 0 || m > model.m_stop()) throw ArgError("at_m out of range");
    const auto p = static_cast<Eigen::Index>(model.names.size());
    AggregatedCoefficients out;
    out.coefficients = Eigen::VectorXd::Zero(p);
    double intercept_sum = 0.0;
    for (int i = 0; i < m; ++i) {
        const PathEntry& e = model.path[static_cast<std::size_t>(i)];
        if (model.learners[static_cast<std::size_t>(e.component)].kind != LearnerKind::Linear)
            throw ArgError("aggregate_coefficients requires an all-linear model; "
                           "use partial_effect for spline components");
        intercept_sum += e.intercept;
        out.coefficients[e.component] += model.step_length * e.slope;
    }
    out.intercept = model.offset + model.step_length * intercept_sum;
    if (model.scaling.applied) {
        for (Eigen::Index j = 0; j < p; ++j) {
            out.intercept -= out.coefficients[j] * model.scaling.mean[j] / model.scaling.sd[j];
            out.coefficients[j] /= model.scaling.sd[j];
        }
    }
    return out;
}

PartialEffect partial_effect(const BoostModel& model, int component, const Eigen::VectorXd& grid,
                             std::optional<int> at_m) {
    if (grid.size() == 0) throw ArgError("partial_effect: empty grid");
    if (component < 0 || component >= static_cast<int>(model.names.size()))
        throw ArgError("partial_effect: component out of range");
    const int m = at_m.value_or(model.m_stop());
    if (m < 0 || m > model.m_stop()) throw ArgError("at_m out of range");

    PartialEffect out;
    out.grid = grid;
    out.effect = Eigen::VectorXd::Zero(grid.size());

    Eigen::VectorXd g = grid;
    if (model.scaling.applied) {
        const auto j = static_cast<std::size_t>(component);
        g = (grid.array() - model.scaling.mean[j]) / model.scaling.sd[j];
    }

    const ComponentLearner& cl = model.learners[static_cast<std::size_t>(component)];
    std::optional<PSpline> ps;
    Eigen::MatrixXd rows;
    if (cl.kind == LearnerKind::PSpline && cl.knots.size() > 0) {
        ps.emplace(cl.knots, cl.degree, cl.diff_order, cl.lambda);
        rows = ps->basis_matrix(g);
    }

    double center = 0.0;
    for (int i = 0; i < m; ++i) {
        const PathEntry& e = model.path[static_cast<std::size_t>(i)];
        if (e.component != component) continue;
        out.selected = true;
        if (cl.kind == LearnerKind::Linear) {
            for (Eigen::Index k = 0; k < g.size(); ++k)
                out.effect[k] += model.step_length * linear_increment(e, g[k]);
            center += model.step_length * (e.intercept + e.slope * cl.x_mean);
        } else {
            for (Eigen::Index k = 0; k < g.size(); ++k)
                out.effect[k] += model.step_length * rows.row(k).dot(e.gamma);
            center += model.step_length * cl.basis_col_means.dot(e.gamma);
        }
    }
    if (out.selected) out.effect.array() -= center;
    return out;
}

std::vector<double> risk_path(const BoostModel& model, const Dataset& d) {
    LossFamily fam = model.loss_family();
    fam.check_response(d.response);
    if (d.n_cols() != static_cast<Eigen::Index>(model.names.size()))
        throw DataError("risk_path: column count mismatch");
    const Eigen::VectorXd& y = d.response.values;
    Eigen::MatrixXd xs = apply_scaling(d.predictors, model.scaling);
    Eigen::VectorXd f = Eigen::VectorXd::Constant(d.n_rows(), model.offset);

    std::vector<double> risks;
    risks.reserve(model.path.size() + 1);
    if (fam.id() == Family::Huber && fam.huber_adaptive())
        fam.set_huber_delta(LossFamily::median_abs_residual(y, f));
    risks.push_back(fam.empirical_risk(y, f));
    accumulate_path(model, xs, model.m_stop(), f, [&](int m, const Eigen::VectorXd& cur) {
        if (fam.id() == Family::Huber)
            fam.set_huber_delta(model.path[static_cast<std::size_t>(m - 1)].huber_delta);
        risks.push_back(fam.empirical_risk(y, cur));
    });
    return risks;
}

}  // namespace boostkit
