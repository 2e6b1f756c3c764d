#include "boostkit/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "boostkit/common.hpp"
#include "boostkit/parallel.hpp"
#include "boostkit/rng.hpp"

namespace boostkit {

DfPath df_path(const BoostModel& model, const Dataset& d, int up_to_m) {
    if (model.family != Family::L2)
        throw ArgError("df path is defined for the L2 family only; "
                       "use resampling-based stopping for other losses");
    const int m_max = up_to_m < 0 ? model.m_stop() : up_to_m;
    if (m_max > model.m_stop()) throw ArgError("up_to_m beyond the fitted path");
    const Eigen::Index n = d.n_rows();
    Eigen::MatrixXd xs = d.predictors;
    if (model.scaling.applied)
        for (Eigen::Index j = 0; j < xs.cols(); ++j)
            xs.col(j) = (xs.col(j).array() - model.scaling.mean[j]) / model.scaling.sd[j];

    // Low-rank factors H_j = F_j G_j per selected component.
    struct Factor {
        Eigen::MatrixXd f;  // n x k
        Eigen::MatrixXd g;  // k x n
    };
    std::map<int, Factor> factors;
    auto factor_for = [&](int j) -> const Factor& {
        auto it = factors.find(j);
        if (it != factors.end()) return it->second;
        const ComponentLearner& cl = model.learners[static_cast<std::size_t>(j)];
        Factor fac;
        if (cl.kind == LearnerKind::Linear) {
            Eigen::MatrixXd design(n, 2);
            design.col(0).setOnes();
            design.col(1) = xs.col(j);
            Eigen::MatrixXd gram = design.transpose() * design;
            fac.f = design * gram.ldlt().solve(Eigen::MatrixXd::Identity(2, 2));
            fac.g = design.transpose();
        } else {
            PSpline ps(cl.knots, cl.degree, cl.diff_order, cl.lambda);
            Eigen::MatrixXd basis = ps.basis_matrix(xs.col(j));
            Eigen::MatrixXd a = basis.transpose() * basis + cl.lambda * ps.penalty();
            fac.f = basis * a.ldlt().solve(Eigen::MatrixXd::Identity(ps.basis_size(), ps.basis_size()));
            fac.g = basis.transpose();
        }
        return factors.emplace(j, std::move(fac)).first->second;
    };

    DfPath out;
    out.df.reserve(static_cast<std::size_t>(m_max) + 1);
    Eigen::MatrixXd b = Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
    out.df.push_back(b.trace());
    for (int m = 1; m <= m_max; ++m) {
        const PathEntry& e = model.path[static_cast<std::size_t>(m - 1)];
        const Factor& fac = factor_for(e.component);
        // B += sl * F (G - G B)
        Eigen::MatrixXd gb = fac.g - fac.g * b;
        b.noalias() += model.step_length * (fac.f * gb);
        out.df.push_back(b.trace());
    }
    return out;
}

double aicc_value(double sigma2, double df, double n) {
    return std::log(sigma2) + (1.0 + df / n) / (1.0 - (df + 2.0) / n);
}

double bic_value(double sigma2, double df, double n) {
    return n * std::log(sigma2) + df * std::log(n);
}

namespace {

CriterionPath criterion_path(const BoostModel& model, const Dataset& d,
                             const std::vector<int>& grid, bool corrected_aic) {
    if (grid.empty()) throw ArgError("empty stopping grid");
    const int m_max = *std::max_element(grid.begin(), grid.end());
    if (m_max > model.m_stop()) throw ArgError("grid exceeds the fitted path");
    const double n = static_cast<double>(d.n_rows());

    const std::vector<double> risks = risk_path(model, d);
    const DfPath dfs = df_path(model, d, m_max);

    CriterionPath out;
    out.grid = grid;
    out.value.resize(grid.size(), std::numeric_limits<double>::quiet_NaN());
    out.df.resize(grid.size());
    int best = -1;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const int m = grid[k];
        if (m < 0 || m > m_max) throw ArgError("grid entry out of range");
        const double df = dfs.df[static_cast<std::size_t>(m)];
        out.df[k] = df;
        // L2 risk is mean(0.5 (y-f)^2), so sigma2 = 2 * risk.
        const double sigma2 = 2.0 * risks[static_cast<std::size_t>(m)];
        if (corrected_aic && df + 2.0 >= n) {
            out.excluded.push_back(m);
            continue;
        }
        out.value[k] = corrected_aic ? aicc_value(sigma2, df, n) : bic_value(sigma2, df, n);
        if (best < 0 || out.value[k] < out.value[static_cast<std::size_t>(best)])
            best = static_cast<int>(k);
    }
    if (best < 0) throw NumericError("all grid entries excluded (df too large for n)");
    out.selected = grid[static_cast<std::size_t>(best)];
    return out;
}

}  // namespace

CriterionPath aic_corrected(const BoostModel& model, const Dataset& d,
                            const std::vector<int>& grid) {
    return criterion_path(model, d, grid, true);
}

CriterionPath bic(const BoostModel& model, const Dataset& d, const std::vector<int>& grid) {
    return criterion_path(model, d, grid, false);
}

namespace {

std::vector<int> strata_labels(const Dataset& d) {
    std::vector<int> labels(static_cast<std::size_t>(d.n_rows()));
    switch (d.response.kind) {
        case ResponseKind::Binary:
            for (Eigen::Index i = 0; i < d.n_rows(); ++i)
                labels[static_cast<std::size_t>(i)] = d.response.values[i] > 0 ? 1 : 0;
            return labels;
        case ResponseKind::Survival:
            for (Eigen::Index i = 0; i < d.n_rows(); ++i)
                labels[static_cast<std::size_t>(i)] = d.response.status[i];
            return labels;
        case ResponseKind::Continuous:
            throw DataError("stratified resampling needs a binary or survival response");
    }
    return labels;
}

// Held-out risk at every m = 0..m_stop for whatever engine was fitted.
std::vector<double> heldout_risk_path(const AnyModel& model, const Dataset& test) {
    if (std::holds_alternative<BoostModel>(model))
        return risk_path(std::get<BoostModel>(model), test);
    if (std::holds_alternative<LikBoostModel>(model))
        return lik_risk_path(std::get<LikBoostModel>(model), test);
    const AdaBoostModel& ada = std::get<AdaBoostModel>(model);
    return exponential_risk_path(ada, test);
}

}  // namespace

StoppingReport cv_risk(const Dataset& d, const FitConfig& config, const ResamplingScheme& scheme,
                       const std::vector<int>& grid) {
    if (grid.empty()) throw ArgError("empty stopping grid");
    std::vector<int> sorted_grid = grid;
    std::sort(sorted_grid.begin(), sorted_grid.end());
    sorted_grid.erase(std::unique(sorted_grid.begin(), sorted_grid.end()), sorted_grid.end());
    const int m_max = sorted_grid.back();
    if (m_max < 1) throw ArgError("stopping grid must reach at least m = 1");
    if (sorted_grid.front() < 0) throw ArgError("stopping grid entries must be >= 0");

    std::vector<int> labels;
    const std::vector<int>* strata = nullptr;
    if (scheme.stratified) {
        labels = strata_labels(d);
        strata = &labels;
    }
    const std::vector<ResampleSplit> splits =
        resample_indices(scheme, static_cast<int>(d.n_rows()), strata);

    StoppingReport report;
    report.grid = sorted_grid;
    report.seed = scheme.seed;
    report.criterion = "out-of-sample " +
                       (config.engine == EngineKind::LikelihoodCox
                            ? std::string("negative partial log-likelihood")
                        : config.engine == EngineKind::LikelihoodGlm
                            ? std::string("negative log-likelihood")
                        : config.engine == EngineKind::AdaBoost
                            ? std::string("exponential loss")
                            : family_id(config.family) + " loss");
    const auto n_rep = static_cast<Eigen::Index>(splits.size());
    const auto n_grid = static_cast<Eigen::Index>(sorted_grid.size());
    report.risk = Eigen::MatrixXd::Constant(n_rep, n_grid,
                                            std::numeric_limits<double>::quiet_NaN());

    std::vector<std::string> fold_warnings(splits.size());
    std::vector<char> skipped(splits.size(), 0);

    FitConfig fold_config = config;
    fold_config.n_threads = 1;  // folds already run in parallel
    fold_config.track_hat = false;

    parallel_for(static_cast<int>(splits.size()), config.n_threads, [&](int r) {
        const auto sr = static_cast<std::size_t>(r);
        const ResampleSplit& split = splits[sr];
        if (split.test.empty()) {
            skipped[sr] = 1;
            fold_warnings[sr] = "fold " + std::to_string(r + 1) + " skipped: empty test set";
            return;
        }
        try {
            const Dataset train = d.subset(split.train);
            const Dataset test = d.subset(split.test);
            const AnyModel model = fit_with_config(train, fold_config, m_max);
            const std::vector<double> risks = heldout_risk_path(model, test);
            for (Eigen::Index k = 0; k < n_grid; ++k) {
                const auto m = static_cast<std::size_t>(sorted_grid[static_cast<std::size_t>(k)]);
                report.risk(r, k) = risks[std::min(m, risks.size() - 1)];
            }
        } catch (const DataError& err) {
            skipped[sr] = 1;
            fold_warnings[sr] = "fold " + std::to_string(r + 1) + " skipped: " + err.what();
        }
    });

    for (std::size_t r = 0; r < splits.size(); ++r) {
        if (skipped[r]) {
            report.skipped_folds.push_back(static_cast<int>(r));
            report.warnings.push_back(fold_warnings[r]);
        }
    }
    const auto used = static_cast<double>(splits.size() - report.skipped_folds.size());
    if (used == 0) throw DataError("all resampling folds were skipped");

    report.mean_risk.resize(static_cast<std::size_t>(n_grid));
    int best = -1;
    for (Eigen::Index k = 0; k < n_grid; ++k) {
        double s = 0.0;
        for (Eigen::Index r = 0; r < n_rep; ++r)
            if (!skipped[static_cast<std::size_t>(r)]) s += report.risk(r, k);
        report.mean_risk[static_cast<std::size_t>(k)] = s / used;
        if (best < 0 || report.mean_risk[static_cast<std::size_t>(k)] <
                            report.mean_risk[static_cast<std::size_t>(best)])
            best = static_cast<int>(k);
    }
    report.selected = sorted_grid[static_cast<std::size_t>(best)];
    return report;
}

Dataset simulate_appendix(int n, std::uint64_t seed, Eigen::VectorXd* true_f) {
    if (n < 1) throw ArgError("simulate: n must be >= 1");
    Rng rng(seed);
    Eigen::VectorXd x(n), noise(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(-0.2, 0.2);
    for (int i = 0; i < n; ++i) noise[i] = rng.normal();

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return x[a] < x[b]; });

    Dataset d;
    d.names = {"x"};
    d.predictors.resize(n, 1);
    d.response.kind = ResponseKind::Continuous;
    d.response.values.resize(n);
    if (true_f) true_f->resize(n);
    for (int i = 0; i < n; ++i) {
        const double xv = x[order[static_cast<std::size_t>(i)]];
        const double f = (0.5 - 0.9 * std::exp(-50.0 * xv * xv)) * xv;
        d.predictors(i, 0) = xv;
        d.response.values[i] = f + 0.02 * noise[order[static_cast<std::size_t>(i)]];
        if (true_f) (*true_f)[i] = f;
    }
    return d;
}

}  // namespace boostkit
