#include <doctest.h>

#include <cmath>
#include <set>

#include "boostkit/common.hpp"
#include "boostkit/gradboost.hpp"
#include "boostkit/rng.hpp"

using namespace boostkit;

namespace {

Dataset make_dataset(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    Dataset d;
    d.predictors = x;
    for (int j = 0; j < x.cols(); ++j) d.names.push_back("x" + std::to_string(j + 1));
    d.response.kind = ResponseKind::Continuous;
    d.response.values = y;
    return d;
}

Dataset random_gaussian(int n, int p, std::uint64_t seed, Eigen::VectorXd* beta_out = nullptr) {
    Rng rng(seed);
    Eigen::MatrixXd x(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
    Eigen::VectorXd beta(p);
    for (int j = 0; j < p; ++j) beta[j] = rng.uniform(-2.0, 2.0);
    Eigen::VectorXd y = x * beta;
    for (int i = 0; i < n; ++i) y[i] += 0.3 * rng.normal();
    if (beta_out) *beta_out = beta;
    return make_dataset(x, y);
}

double ols_slope(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double xb = x.mean(), yb = y.mean();
    return (x.array() - xb).cwiseProduct(y.array() - yb).sum() /
           (x.array() - xb).square().sum();
}

}  // namespace

TEST_SUITE("gradboost") {

TEST_CASE("m_stop 0 is the offset-only model") {
    const Dataset d = random_gaussian(20, 3, 1);
    const BoostModel m = fit_gradboost(d, LossFamily(Family::L2), {LearnerConfig{}}, 0, 0.1);
    CHECK(m.m_stop() == 0);
    const Eigen::VectorXd pred = predict(m, d.predictors);
    for (int i = 0; i < 20; ++i)
        CHECK(pred[i] == doctest::Approx(d.response.values.mean()).epsilon(1e-14));
    const auto agg = aggregate_coefficients(m);
    CHECK(agg.intercept == doctest::Approx(d.response.values.mean()));
    CHECK(agg.coefficients.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single centered predictor follows the geometric-series oracle") {
    Rng rng(2);
    const int n = 50;
    Eigen::MatrixXd x(n, 1);
    for (int i = 0; i < n; ++i) x(i, 0) = rng.normal();
    x.col(0).array() -= x.col(0).mean();
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = 1.5 * x(i, 0) + 0.2 * rng.normal();
    const Dataset d = make_dataset(x, y);
    const double beta = ols_slope(x.col(0), y);

    for (double sl : {0.1, 0.5, 1.0}) {
        for (int m : {1, 10, 100}) {
            const BoostModel model =
                fit_gradboost(d, LossFamily(Family::L2), {LearnerConfig{}}, m, sl);
            // independent recursion oracle: s <- s + sl (beta - s)
            double s = 0.0;
            for (int k = 0; k < m; ++k) s += sl * (beta - s);
            const auto agg = aggregate_coefficients(model);
            CHECK(agg.coefficients[0] == doctest::Approx(s).epsilon(1e-10));
            CHECK(std::abs(agg.coefficients[0] - (1.0 - std::pow(1.0 - sl, m)) * beta) < 1e-10);
        }
    }
}

TEST_CASE("exact sparse recovery: every iteration selects the true component") {
    Rng rng(3);
    const int n = 5, p = 10;
    Eigen::MatrixXd x(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
    const Eigen::VectorXd y = 2.0 * x.col(2);
    const Dataset d = make_dataset(x, y);
    const BoostModel m = fit_gradboost(d, LossFamily(Family::L2), {LearnerConfig{}}, 150, 0.1);

    // brute-force SSE check per iteration: replay the path
    Eigen::VectorXd f = Eigen::VectorXd::Constant(n, m.offset);
    for (const auto& e : m.path) {
        const Eigen::VectorXd u = y - f;
        int best = -1;
        double best_sse = 0;
        for (int j = 0; j < p; ++j) {
            const auto lf = fit_linear(x.col(j), u);
            const double sse =
                (u.array() - lf.intercept - lf.slope * x.col(j).array()).square().sum();
            if (best < 0 || sse < best_sse) {
                best = j;
                best_sse = sse;
            }
        }
        CHECK(e.component == best);
        CHECK(e.component == 2);
        f += m.step_length * (e.intercept + (e.slope * x.col(e.component).array())).matrix();
    }
    const auto agg = aggregate_coefficients(m);
    CHECK(agg.coefficients[2] == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("select_component: zero SSE wins, ties break low") {
    const Eigen::VectorXd u = Eigen::Vector3d(1, 2, 3);
    std::vector<std::optional<Eigen::VectorXd>> fits;
    fits.emplace_back(Eigen::Vector3d(1, 2, 3));
    fits.emplace_back(Eigen::Vector3d(0, 0, 0));
    CHECK(select_component(u, fits) == 0);

    fits.clear();
    fits.emplace_back(Eigen::Vector3d(1, 2, 2.5));
    fits.emplace_back(Eigen::Vector3d(1, 2, 2.5));
    CHECK(select_component(u, fits) == 0);

    fits.clear();
    fits.emplace_back(std::nullopt);
    fits.emplace_back(Eigen::Vector3d(1, 2, 3));
    CHECK(select_component(u, fits) == 1);
}

TEST_CASE("select_component matches exhaustive SSE enumeration on random fits") {
    Rng rng(4);
    for (int t = 0; t < 50; ++t) {
        Eigen::VectorXd u(8);
        for (int i = 0; i < 8; ++i) u[i] = rng.normal();
        std::vector<std::optional<Eigen::VectorXd>> fits;
        for (int j = 0; j < 5; ++j) {
            Eigen::VectorXd h(8);
            for (int i = 0; i < 8; ++i) h[i] = rng.normal();
            fits.emplace_back(h);
        }
        int best = 0;
        double best_sse = (u - *fits[0]).squaredNorm();
        for (int j = 1; j < 5; ++j) {
            const double sse = (u - *fits[static_cast<std::size_t>(j)]).squaredNorm();
            if (sse < best_sse) {
                best = j;
                best_sse = sse;
            }
        }
        CHECK(select_component(u, fits) == best);
    }
}

TEST_CASE("predict: self-consistency, truncation, response scale") {
    const Dataset d = random_gaussian(40, 4, 5);
    const BoostModel m = fit_gradboost(d, LossFamily(Family::L2), {LearnerConfig{}}, 30, 0.1);

    SUBCASE("at_m 0 is the constant offset") {
        const Eigen::VectorXd p0 = predict(m, d.predictors, 0);
        for (int i = 0; i < 40; ++i) CHECK(p0[i] == m.offset);
    }
    SUBCASE("training prediction reproduces the recorded risk path") {
        const std::vector<double> risks = risk_path(m, d);
        REQUIRE(risks.size() == m.training_risk.size());
        for (std::size_t k = 0; k < risks.size(); ++k)
            CHECK(risks[k] == doctest::Approx(m.training_risk[k]).epsilon(1e-12));
    }
    SUBCASE("truncate is exact prefix semantics") {
        const BoostModel t10 = truncate(m, 10);
        CHECK(t10.m_stop() == 10);
        const Eigen::VectorXd a = predict(t10, d.predictors);
        const Eigen::VectorXd b = predict(m, d.predictors, 10);
        for (int i = 0; i < 40; ++i) CHECK(a[i] == b[i]);  // bitwise equal
        const BoostModel t_all = truncate(m, m.m_stop());
        CHECK(t_all.path.size() == m.path.size());
        const BoostModel t0 = truncate(m, 0);
        CHECK(predict(t0, d.predictors)[0] == m.offset);
        CHECK_THROWS_AS(truncate(m, m.m_stop() + 1), ArgError);
    }
    SUBCASE("truncate-then-refit yields the identical path") {
        const BoostModel refit =
            fit_gradboost(d, LossFamily(Family::L2), {LearnerConfig{}}, 10, 0.1);
        const BoostModel trunc = truncate(m, 10);
        REQUIRE(refit.path.size() == trunc.path.size());
        for (std::size_t k = 0; k < refit.path.size(); ++k) {
            CHECK(refit.path[k].component == trunc.path[k].component);
            CHECK(refit.path[k].slope == trunc.path[k].slope);
            CHECK(refit.path[k].intercept == trunc.path[k].intercept);
        }
    }
}

TEST_CASE("gamma family predicts on response scale with exp") {
    Rng rng(6);
    const int n = 30;
    Eigen::MatrixXd x(n, 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = rng.uniform(0.0, 1.0);
        y[i] = std::exp(0.5 + x(i, 0)) * (0.5 + rng.uniform01());
    }
    const Dataset d = make_dataset(x, y);
    const BoostModel m = fit_gradboost(d, LossFamily(Family::Gamma), {LearnerConfig{}}, 20, 0.1);
    const Eigen::VectorXd link = predict(m, x, std::nullopt, PredictScale::Link);
    const Eigen::VectorXd resp = predict(m, x, std::nullopt, PredictScale::Response);
    for (int i = 0; i < n; ++i) CHECK(resp[i] == doctest::Approx(std::exp(link[i])).epsilon(1e-14));
}

TEST_CASE("L2 training risk is non-increasing; strictly while increments are nonzero") {
    for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
        const Dataset d = random_gaussian(35, 4, seed);
        for (double sl : {0.1, 0.5, 1.0}) {
            const BoostModel m =
                fit_gradboost(d, LossFamily(Family::L2), {LearnerConfig{}}, 40, sl);
            for (std::size_t k = 1; k < m.training_risk.size(); ++k)
                CHECK(m.training_risk[k] <= m.training_risk[k - 1] + 1e-14);
        }
    }
}

TEST_CASE("selection-count bound: distinct components <= min(p, m_stop)") {
    const Dataset d = random_gaussian(25, 8, 21);
    const BoostModel m = fit_gradboost(d, LossFamily(Family::L2), {LearnerConfig{}}, 5, 0.1);
    std::set<int> distinct;
    for (const auto& e : m.path) distinct.insert(e.component);
    CHECK(static_cast<int>(distinct.size()) <= 5);
}

TEST_CASE("sl=1 single linear learner reproduces OLS in one iteration") {
    Rng rng(22);
    const int n = 30;
    Eigen::MatrixXd x(n, 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = rng.uniform(-2, 3);
        y[i] = 1.0 + 2.5 * x(i, 0) + rng.normal();
    }
    const Dataset d = make_dataset(x, y);
    const BoostModel m = fit_gradboost(d, LossFamily(Family::L2), {LearnerConfig{}}, 1, 1.0);
    const auto agg = aggregate_coefficients(m);
    const double slope = ols_slope(x.col(0), y);
    const double intercept = y.mean() - slope * x.col(0).mean();
    CHECK(agg.coefficients[0] == doctest::Approx(slope).epsilon(1e-10));
    CHECK(agg.intercept == doctest::Approx(intercept).epsilon(1e-10));
}

TEST_CASE("determinism: identical inputs give identical paths, any thread count") {
    const Dataset d = random_gaussian(40, 6, 23);
    GradBoostOptions serial, parallel;
    serial.n_threads = 1;
    parallel.n_threads = 4;
    const BoostModel a = fit_gradboost(d, LossFamily(Family::L2), {LearnerConfig{}}, 25, 0.1, serial);
    const BoostModel b =
        fit_gradboost(d, LossFamily(Family::L2), {LearnerConfig{}}, 25, 0.1, parallel);
    REQUIRE(a.path.size() == b.path.size());
    for (std::size_t k = 0; k < a.path.size(); ++k) {
        CHECK(a.path[k].component == b.path[k].component);
        CHECK(a.path[k].slope == b.path[k].slope);
    }
    CHECK(a.training_risk == b.training_risk);
}

TEST_CASE("spline learners: fit, partial effects, risk consistency") {
    Rng rng(24);
    const int n = 100;
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = rng.uniform(-1, 1);
        x(i, 1) = rng.uniform(-1, 1);
        y[i] = std::sin(3.0 * x(i, 0)) + 0.1 * rng.normal();
    }
    const Dataset d = make_dataset(x, y);
    LearnerConfig spline;
    spline.kind = LearnerKind::PSpline;
    const BoostModel m = fit_gradboost(d, LossFamily(Family::L2), {spline}, 150, 0.1);

    SUBCASE("aggregate_coefficients refuses spline paths") {
        CHECK_THROWS_AS(aggregate_coefficients(m), ArgError);
    }
    SUBCASE("partial effect recovers the sine shape") {
        Eigen::VectorXd grid(41);
        for (int k = 0; k <= 40; ++k) grid[k] = -0.9 + 1.8 * k / 40.0;
        const PartialEffect pe = partial_effect(m, 0, grid);
        CHECK(pe.selected);
        double max_err = 0.0;
        const double offset_shift = 0.0;
        for (int k = 0; k <= 40; ++k) {
            const double truth = std::sin(3.0 * grid[k]);
            max_err = std::max(max_err, std::abs(pe.effect[k] + offset_shift - truth));
        }
        CHECK(max_err < 0.25);
    }
    SUBCASE("never-selected component reports a zero function") {
        // component 2 is pure noise against a strong sine signal; selection
        // may still pick it occasionally, so probe a fresh all-noise fit
        Eigen::MatrixXd x2 = x;
        const Dataset d2 = make_dataset(x2, y);
        const BoostModel m2 = fit_gradboost(d2, LossFamily(Family::L2), {spline}, 3, 0.1);
        std::set<int> used;
        for (const auto& e : m2.path) used.insert(e.component);
        for (int j = 0; j < 2; ++j) {
            if (used.count(j)) continue;
            const PartialEffect pe = partial_effect(m2, j, Eigen::VectorXd::LinSpaced(5, -1, 1));
            CHECK_FALSE(pe.selected);
            CHECK(pe.effect.cwiseAbs().maxCoeff() == 0.0);
        }
    }
    SUBCASE("risk_path recomputation matches stored training risks") {
        const std::vector<double> risks = risk_path(m, d);
        for (std::size_t k = 0; k < risks.size(); ++k)
            CHECK(risks[k] == doctest::Approx(m.training_risk[k]).epsilon(1e-12));
    }
    SUBCASE("partial effect is centered over the training column") {
        Eigen::VectorXd train_grid = x.col(0);
        const PartialEffect pe = partial_effect(m, 0, train_grid);
        CHECK(pe.effect.mean() == doctest::Approx(0.0).epsilon(1e-10));
    }
}

TEST_CASE("mixed linear and spline learners choose by SSE") {
    Rng rng(25);
    const int n = 80;
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = rng.uniform(-1, 1);
        x(i, 1) = rng.uniform(-1, 1);
        y[i] = 2.0 * x(i, 1) + 0.05 * rng.normal();
    }
    const Dataset d = make_dataset(x, y);
    std::vector<LearnerConfig> configs(2);
    configs[0].kind = LearnerKind::PSpline;
    configs[1].kind = LearnerKind::Linear;
    const BoostModel m = fit_gradboost(d, LossFamily(Family::L2), configs, 50, 0.1);
    int linear_picks = 0;
    for (const auto& e : m.path) linear_picks += e.component == 1;
    CHECK(linear_picks > 25);  // the true linear signal dominates
}

TEST_CASE("huber adaptive delta is recorded and reproducible") {
    Rng rng(26);
    const int n = 50;
    Eigen::MatrixXd x(n, 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = rng.uniform(-1, 1);
        y[i] = x(i, 0) + 0.1 * rng.normal();
    }
    y[0] += 25.0;  // outlier
    const Dataset d = make_dataset(x, y);
    const BoostModel m = fit_gradboost(d, LossFamily(Family::Huber), {LearnerConfig{}}, 20, 0.1);
    CHECK(m.path[0].huber_delta > 0.0);
    const std::vector<double> risks = risk_path(m, d);
    for (std::size_t k = 0; k < risks.size(); ++k)
        CHECK(risks[k] == doctest::Approx(m.training_risk[k]).epsilon(1e-12));
}

TEST_CASE("non-fittable constant columns are excluded and reported") {
    Rng rng(27);
    const int n = 20;
    Eigen::MatrixXd x(n, 2);
    x.col(0).setConstant(7.0);
    for (int i = 0; i < n; ++i) x(i, 1) = rng.normal();
    Eigen::VectorXd y = 2.0 * x.col(1);
    const Dataset d = make_dataset(x, y);
    const BoostModel m = fit_gradboost(d, LossFamily(Family::L2), {LearnerConfig{}}, 10, 0.1);
    REQUIRE(m.non_fittable.size() == 1);
    CHECK(m.non_fittable[0] == "x1");
    for (const auto& e : m.path) CHECK(e.component == 1);
}

TEST_CASE("standardized fit reports coefficients on the original scale") {
    Rng rng(28);
    const int n = 60;
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = 100.0 + 10.0 * rng.normal();
        x(i, 1) = rng.normal();
        y[i] = 3.0 + 0.2 * x(i, 0) + 1.0 * x(i, 1) + 0.01 * rng.normal();
    }
    Dataset d = make_dataset(x, y);
    auto [ds, sc] = standardize(d);
    BoostModel m = fit_gradboost(ds, LossFamily(Family::L2), {LearnerConfig{}}, 4000, 0.1);
    m.scaling = sc;
    const auto agg = aggregate_coefficients(m);
    CHECK(agg.coefficients[0] == doctest::Approx(0.2).epsilon(1e-3));
    CHECK(agg.coefficients[1] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(agg.intercept == doctest::Approx(3.0).epsilon(1e-2));
    // prediction applies the stored scaling to raw inputs
    const Eigen::VectorXd pred = predict(m, x);
    CHECK((pred - y).cwiseAbs().maxCoeff() < 0.1);
}

TEST_CASE("errors: bad step length, binary family on continuous response") {
    const Dataset d = random_gaussian(10, 2, 30);
    CHECK_THROWS_AS(fit_gradboost(d, LossFamily(Family::L2), {LearnerConfig{}}, 5, 0.0), ArgError);
    CHECK_THROWS_AS(fit_gradboost(d, LossFamily(Family::L2), {LearnerConfig{}}, -1, 0.1), ArgError);
    CHECK_THROWS_AS(fit_gradboost(d, LossFamily(Family::Logistic), {LearnerConfig{}}, 5, 0.1),
                    DataError);
}

}  // TEST_SUITE
