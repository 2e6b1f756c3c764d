// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criterion 10 needs the public bodyfat dataset (71 rows) as a CSV
// and reports SKIP when the file is absent; see README for the format.
//
// Usage: acceptance [path-to-boostkit-binary] [path-to-bodyfat-csv]

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "boostkit/model_io.hpp"
#include "boostkit/rng.hpp"
#include "boostkit/stopping.hpp"

namespace fs = std::filesystem;
using namespace boostkit;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;
int g_skips = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << detail
              << "\n";
    if (!pass) ++g_failures;
}

void report_skip(int criterion, const std::string& detail) {
    std::cout << "[SKIP] criterion " << criterion << ": " << detail << "\n";
    ++g_skips;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Dataset gaussian_dataset(int n, int p, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd x(n, p);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) x(i, j) = rng.normal() * (1.0 + 0.5 * j);
        y[i] = 1.5 * x(i, 0) - 0.8 * x(i, std::min(2, p - 1)) + 0.5 * rng.normal();
    }
    Dataset d;
    d.predictors = x;
    for (int j = 0; j < p; ++j) d.names.push_back("x" + std::to_string(j + 1));
    d.response.kind = ResponseKind::Continuous;
    d.response.values = y;
    return d;
}

// ---------------------------------------------------------------------- 1 --

void criterion_1() {
    const auto t0 = Clock::now();
    const Dataset d = gaussian_dataset(50, 5, 20140101);
    const double sl = 0.1;
    const int m_stop = 100;
    const BoostModel grad = fit_gradboost(d, LossFamily(Family::L2), {LearnerConfig{}}, m_stop, sl);
    const LikBoostModel lik = fit_glm(d, GlmFamily::Gaussian, PenaltySpec::step_size(sl), m_stop);

    bool ok = grad.path.size() == lik.path.size();
    Eigen::VectorXd cg = Eigen::VectorXd::Zero(5);
    Eigen::VectorXd cl = Eigen::VectorXd::Zero(5);
    double max_gap = 0.0;
    for (int m = 0; m < m_stop && ok; ++m) {
        const auto& ge = grad.path[static_cast<std::size_t>(m)];
        const auto& le = lik.path[static_cast<std::size_t>(m)];
        ok = ok && ge.component == le.component;
        cg[ge.component] += sl * ge.slope;
        cl[le.component] += le.gamma;
        max_gap = std::max(max_gap, (cg - cl).cwiseAbs().maxCoeff());
    }
    ok = ok && max_gap < 1e-8;
    const double elapsed = seconds_since(t0);
    ok = ok && elapsed < 1.0;
    std::ostringstream msg;
    msg << "gradient/likelihood L2 coincidence (max coefficient gap " << max_gap << ", "
        << elapsed << " s)";
    report(1, ok, msg.str());
}

// ---------------------------------------------------------------------- 2 --

void criterion_2() {
    Rng rng(2);
    const int n = 60;
    Eigen::MatrixXd x(n, 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = rng.uniform(-1.0, 4.0);
        y[i] = 0.5 + 2.0 * x(i, 0) + 0.3 * rng.normal();
    }
    Dataset d;
    d.predictors = x;
    d.names = {"x1"};
    d.response.kind = ResponseKind::Continuous;
    d.response.values = y;
    const double xb = x.col(0).mean();
    const double beta =
        (x.col(0).array() - xb).matrix().dot(y) / (x.col(0).array() - xb).square().sum();

    double worst = 0.0;
    for (double sl : {0.1, 0.5, 1.0}) {
        for (int m : {1, 10, 100}) {
            const BoostModel model =
                fit_gradboost(d, LossFamily(Family::L2), {LearnerConfig{}}, m, sl);
            const auto agg = aggregate_coefficients(model);
            const double target = (1.0 - std::pow(1.0 - sl, m)) * beta;
            worst = std::max(worst, std::abs(agg.coefficients[0] - target));
        }
    }
    std::ostringstream msg;
    msg << "univariate closed form (worst deviation " << worst << ")";
    report(2, worst < 1e-10, msg.str());
}

// ---------------------------------------------------------------------- 3 --

void criterion_3() {
    const Dataset d = gaussian_dataset(200, 5, 33);
    const BoostModel m =
        fit_gradboost(d, LossFamily(Family::L2), {LearnerConfig{}}, 10000, 0.1);
    const auto agg = aggregate_coefficients(m);

    Eigen::MatrixXd design(200, 6);
    design.col(0).setOnes();
    design.rightCols(5) = d.predictors;
    const Eigen::VectorXd ols =
        (design.transpose() * design).ldlt().solve(design.transpose() * d.response.values);
    double worst = std::abs(agg.intercept - ols[0]);
    for (int j = 0; j < 5; ++j) worst = std::max(worst, std::abs(agg.coefficients[j] - ols[j + 1]));
    std::ostringstream msg;
    msg << "full-rank convergence to OLS (worst gap " << worst << ")";
    report(3, worst < 1e-6, msg.str());
}

// ---------------------------------------------------------------------- 4 --

void criterion_4() {
    bool ok = true;
    double worst_fp = 0.0;
    for (std::uint64_t seed = 1; seed <= 50 && ok; ++seed) {
        Rng rng(seed * 7919);
        const int n = 40;
        Eigen::MatrixXd x(n, 3);
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < 3; ++j) x(i, j) = rng.normal();
            const bool signal = x(i, 0) + 0.5 * x(i, 1) > 0;
            y[i] = (signal != (rng.uniform01() < 0.3)) ? 1.0 : -1.0;
        }
        y[0] = 1.0;
        y[1] = -1.0;
        Dataset d;
        d.predictors = x;
        d.names = {"a", "b", "c"};
        d.response.kind = ResponseKind::Binary;
        d.response.values = y;

        const AdaBoostModel model = fit_adaboost(d, 10);
        Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / n);
        for (const auto& round : model.rounds) {
            double total = 0.0;
            Eigen::VectorXd w_new = w;
            for (int i = 0; i < n; ++i) {
                const double h = round.stump.predict(x(i, round.stump.component));
                w_new[i] *= std::exp(-round.alpha * y[i] * h);
                total += w_new[i];
            }
            w_new /= total;
            double err = 0.0;
            for (int i = 0; i < n; ++i)
                if (round.stump.predict(x(i, round.stump.component)) != y[i]) err += w_new[i];
            worst_fp = std::max(worst_fp, std::abs(err - 0.5));
            ok = ok && std::abs(err - 0.5) < 1e-12;
            w = w_new;
        }
        const std::vector<double> risk = exponential_risk_path(model, d);
        for (std::size_t k = 1; k < risk.size(); ++k) ok = ok && risk[k] <= risk[k - 1] + 1e-12;
    }
    std::ostringstream msg;
    msg << "adaboost reweighting fixed point over 50 datasets (worst |err-0.5| = " << worst_fp
        << "), exponential risk non-increasing";
    report(4, ok, msg.str());
}

// ---------------------------------------------------------------------- 5 --

void criterion_5() {
    Eigen::MatrixXd x(8, 1);
    x << 1, 2, 3, 4, 5, 6, 7, 8;
    Eigen::VectorXd y(8);
    y << 1, 1, 1, -1, -1, -1, 1, 1;
    Dataset d;
    d.predictors = x;
    d.names = {"x1"};
    d.response.kind = ResponseKind::Binary;
    d.response.values = y;
    const AdaBoostModel m = fit_adaboost(d, 1);
    const bool ok = m.m_stop() == 1 && std::abs(m.rounds[0].epsilon - 0.25) < 1e-15 &&
                    std::abs(m.rounds[0].alpha - 0.5 * std::log(3.0)) < 1e-12;
    std::ostringstream msg;
    msg << "adaboost derived round: eps=" << m.rounds[0].epsilon << ", alpha=" << m.rounds[0].alpha
        << " vs 0.5 ln 3";
    report(5, ok, msg.str());
}

// ---------------------------------------------------------------------- 6 --

void criterion_6() {
    const auto t0 = Clock::now();
    Rng rng(66);
    Eigen::VectorXd x(150);
    for (int i = 0; i < 150; ++i) x[i] = rng.uniform(-1.0, 1.0);
    PSpline ps(x);
    const int rank = ps.basis_rank();
    const double df0 = ps.df_for_lambda(0.0);
    const double df_inf = ps.df_for_lambda(1e12);
    ps.calibrate_lambda(4.0);
    const double df4 = ps.df_for_lambda(ps.lambda());

    // independent eigendecomposition oracle at the calibrated lambda
    const Eigen::MatrixXd a = ps.basis().transpose() * ps.basis() + ps.lambda() * ps.penalty();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const Eigen::MatrixXd inv = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                                es.eigenvectors().transpose();
    const double df_oracle = (inv * (ps.basis().transpose() * ps.basis())).trace();

    const double elapsed = seconds_since(t0);
    const bool ok = std::abs(df0 - rank) < 1e-6 && std::abs(df_inf - 2.0) < 1e-3 &&
                    std::abs(df4 - 4.0) < 1e-6 && std::abs(df_oracle - 4.0) < 1e-5 &&
                    elapsed < 1.0;
    std::ostringstream msg;
    msg << "pspline df calibration: df(0)=" << df0 << " (rank " << rank << "), df(1e12)=" << df_inf
        << ", |df(lambda*)-4|=" << std::abs(df4 - 4.0) << ", " << elapsed << " s";
    report(6, ok, msg.str());
}

// ---------------------------------------------------------------------- 7 --

void criterion_7() {
    const double v = aicc_value(1.0, 2.0, 10.0);
    std::ostringstream msg;
    msg << "AICc arithmetic: aicc(1, 2, 10) = " << v;
    report(7, v == 2.0, msg.str());
}

// ---------------------------------------------------------------------- 8 --

void criterion_8() {
    const auto t0 = Clock::now();
    Eigen::VectorXd truth;
    const Dataset d = simulate_appendix(150, 1234, &truth);

    FitConfig cfg;
    cfg.engine = EngineKind::Gradient;
    cfg.family = Family::L2;
    cfg.learners[0].kind = LearnerKind::PSpline;
    cfg.m_stop = 200;

    std::vector<int> grid;
    for (int m = 1; m <= 200; ++m) grid.push_back(m);
    const StoppingReport rep = cv_risk(d, cfg, ResamplingScheme::bootstrap(25, 123), grid);
    const int m_star = rep.selected;

    LearnerConfig spline;
    spline.kind = LearnerKind::PSpline;
    const BoostModel big = fit_gradboost(d, LossFamily(Family::L2), {spline}, 50000, 0.1);
    const Eigen::VectorXd fit_at_star = predict(big, d.predictors, m_star);
    const Eigen::VectorXd fit_at_end = predict(big, d.predictors);

    const double rmse_star = std::sqrt((fit_at_star - truth).squaredNorm() / 150.0);
    const double rmse_end = std::sqrt((fit_at_end - truth).squaredNorm() / 150.0);
    const double elapsed = seconds_since(t0);

    const bool ok = m_star >= 1 && rmse_star <= 0.02 && rmse_end > rmse_star && elapsed < 60.0;
    std::ostringstream msg;
    msg << "simulation benchmark: m*=" << m_star << ", true-function RMSE at m* = " << rmse_star
        << " (<= 0.02), at m=50000 = " << rmse_end << " (overfits), " << elapsed << " s";
    report(8, ok, msg.str());
}

// ---------------------------------------------------------------------- 9 --

void criterion_9() {
    // the penalty formula, exact
    Eigen::VectorXi status = Eigen::VectorXi::Zero(200);
    for (int i = 0; i < 126; ++i) status[i] = 1;
    Dataset d126;
    d126.predictors = Eigen::MatrixXd::Random(200, 2);
    d126.names = {"a", "b"};
    d126.response.kind = ResponseKind::Survival;
    d126.response.time = Eigen::VectorXd::LinSpaced(200, 1.0, 200.0);
    d126.response.status = status;
    const double lambda126 = penalty_from_stepsize(0.1, d126);
    const bool formula_ok = lambda126 == 1134.0;

    // synthetic high-dimensional survival run
    Rng rng(909);
    const int n = 60, p = 100;
    Eigen::MatrixXd x(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
    const std::vector<std::pair<int, double>> effects = {{5, 1.8}, {37, -1.8}, {91, 1.5}};
    Eigen::VectorXd time(n);
    Eigen::VectorXi st(n);
    for (int i = 0; i < n; ++i) {
        double eta = 0.0;
        for (const auto& [j, b] : effects) eta += b * x(i, j);
        const double t = -std::log(1.0 - rng.uniform01()) / std::exp(eta);
        const double c = 3.0 * rng.uniform01();
        time[i] = std::max(1e-6, std::min(t, c));
        st[i] = t <= c ? 1 : 0;
    }
    Dataset surv;
    surv.predictors = x;
    for (int j = 0; j < p; ++j) surv.names.push_back("g" + std::to_string(j));
    surv.response.kind = ResponseKind::Survival;
    surv.response.time = time;
    surv.response.status = st;

    const LikBoostModel m =
        fit_cox(surv, PenaltySpec::lambda(penalty_from_stepsize(0.1, surv)), 50);
    std::set<int> selected;
    for (const auto& e : m.path) selected.insert(e.component);
    const bool found_all = selected.count(5) && selected.count(37) && selected.count(91);
    const bool pll_up = m.loglik_path.back() > m.loglik_path.front();

    std::ostringstream msg;
    msg << "cox engine: penalty(0.1, 126 events) = " << lambda126 << " (exact 1134), "
        << "partial log-likelihood " << m.loglik_path.front() << " -> " << m.loglik_path.back()
        << ", true components " << (found_all ? "all selected" : "MISSING");
    report(9, formula_ok && found_all && pll_up, msg.str());
}

// --------------------------------------------------------------------- 10 --

std::string find_bodyfat(const std::string& cli_arg) {
    if (!cli_arg.empty() && fs::exists(cli_arg)) return cli_arg;
    if (const char* env = std::getenv("BOOSTKIT_BODYFAT"))
        if (fs::exists(env)) return env;
    for (const char* candidate : {"data/bodyfat.csv", "../data/bodyfat.csv",
                                  "../../data/bodyfat.csv"})
        if (fs::exists(candidate)) return candidate;
    return "";
}

void criterion_10(const std::string& bodyfat_path) {
    const std::string path = find_bodyfat(bodyfat_path);
    if (path.empty()) {
        report_skip(10, "bodyfat dataset not present (set BOOSTKIT_BODYFAT or data/bodyfat.csv)");
        return;
    }
    ResponseSpec spec;
    spec.kind = ResponseKind::Continuous;
    spec.column = "DEXfat";
    const Dataset full = load_csv(path, spec);
    const std::vector<std::string> wanted = {"hipcirc", "kneebreadth", "anthro3a"};
    std::vector<int> keep;
    for (const auto& name : wanted) {
        const int j = full.column_index(name);
        if (j < 0) {
            report(10, false, "bodyfat file lacks column " + name);
            return;
        }
        keep.push_back(j);
    }
    Dataset three;
    three.names = wanted;
    three.predictors.resize(full.n_rows(), 3);
    for (int k = 0; k < 3; ++k) three.predictors.col(k) = full.predictors.col(keep[k]);
    three.response = full.response;

    const BoostModel m = fit_gradboost(three, LossFamily(Family::L2), {LearnerConfig{}}, 100, 0.1);
    const auto agg = aggregate_coefficients(m);
    const double e0 = std::abs(agg.intercept - -75.2073);
    const double e1 = std::abs(agg.coefficients[0] - 0.5115);
    const double e2 = std::abs(agg.coefficients[1] - 1.9005);
    const double e3 = std::abs(agg.coefficients[2] - 8.9071);
    const bool coef_ok = e0 < 1e-2 && e1 < 1e-2 && e2 < 1e-2 && e3 < 1e-2;

    // AICc-optimal m on the 61-row training split (first 10 rows held out)
    std::vector<int> train_rows;
    for (int i = 10; i < full.n_rows(); ++i) train_rows.push_back(i);
    const Dataset train = three.subset(train_rows);
    LearnerConfig spline;
    spline.kind = LearnerKind::PSpline;
    const BoostModel gam = fit_gradboost(train, LossFamily(Family::L2), {spline}, 500, 0.1);
    std::vector<int> grid;
    for (int k = 1; k <= 500; ++k) grid.push_back(k);
    const CriterionPath aic = aic_corrected(gam, train, grid);
    const bool aic_ok = aic.selected >= 139 && aic.selected <= 159;

    std::ostringstream msg;
    msg << "bodyfat cross-check: coefficients (" << agg.intercept << ", " << agg.coefficients[0]
        << ", " << agg.coefficients[1] << ", " << agg.coefficients[2]
        << "), AICc-optimal m = " << aic.selected << " (target 149 +- 10)";
    report(10, coef_ok && aic_ok, msg.str());
}

// --------------------------------------------------------------------- 11 --

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& cmd) { return std::system(cmd.c_str()); }

void criterion_11(const std::string& cli) {
    if (cli.empty() || !fs::exists(cli)) {
        report(11, false, "boostkit binary path not provided to the acceptance runner");
        return;
    }
    const fs::path work = fs::temp_directory_path() / "boostkit_acceptance_c11";
    fs::remove_all(work);
    fs::create_directories(work);
    const std::string sim = (work / "sim.csv").string();
    if (run_cli(cli + " simulate --n 120 --seed 77 --out " + sim + " > /dev/null") != 0) {
        report(11, false, "simulate invocation failed");
        return;
    }

    bool ok = true;
    std::string detail;
    // fit at two thread counts, then repeat one to confirm rerun stability
    for (const std::string tag : {"fit_t1", "fit_t4", "fit_t1_rerun"}) {
        const std::string threads = tag == "fit_t4" ? "4" : "1";
        const std::string out = (work / tag).string();
        const std::string cmd = cli + " fit --data " + sim +
                                " --response y --learner pspline --mstop 60 --seed 5 --threads " +
                                threads + " --out " + out + " > /dev/null";
        if (run_cli(cmd) != 0) {
            ok = false;
            detail = "fit invocation failed";
        }
    }
    for (const std::string tag : {"cv_t1", "cv_t4"}) {
        const std::string threads = tag == "cv_t4" ? "4" : "1";
        const std::string out = (work / tag).string();
        const std::string cmd = cli + " cv --data " + sim +
                                " --response y --learner pspline --mstop 40 --scheme bootstrap:8" +
                                " --grid 1:40 --seed 5 --threads " + threads + " --out " + out +
                                " > /dev/null";
        if (run_cli(cmd) != 0) {
            ok = false;
            detail = "cv invocation failed";
        }
    }
    if (ok) {
        const std::vector<std::pair<std::string, std::string>> pairs = {
            {"fit_t1/risk_path.tsv", "fit_t4/risk_path.tsv"},
            {"fit_t1/risk_path.tsv", "fit_t1_rerun/risk_path.tsv"},
            {"fit_t1/effects/x.tsv", "fit_t4/effects/x.tsv"},
            {"cv_t1/cv_risk.tsv", "cv_t4/cv_risk.tsv"},
            {"cv_t1/cv_mean.tsv", "cv_t4/cv_mean.tsv"},
        };
        for (const auto& [a, b] : pairs) {
            if (slurp(work / a) != slurp(work / b) || slurp(work / a).empty()) {
                ok = false;
                detail = a + " and " + b + " differ";
                break;
            }
        }
    }
    if (detail.empty()) detail = "byte-identical TSV outputs across reruns and threads 1 vs 4";
    report(11, ok, detail);
    fs::remove_all(work);
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const std::string bodyfat = argc > 2 ? argv[2] : "";

    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10(bodyfat);
    criterion_11(cli);

    std::cout << (g_failures == 0 ? "ACCEPTANCE OK" : "ACCEPTANCE FAILED") << " ("
              << 11 - g_failures - g_skips << " passed, " << g_failures << " failed, " << g_skips
              << " skipped)\n";
    return g_failures == 0 ? 0 : 1;
}
