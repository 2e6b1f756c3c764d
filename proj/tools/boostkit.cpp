// boostkit: CSV-in/table-out statistical boosting tool.
//
// Subcommands: fit, predict, cv, effects, simulate. All randomness flows
// from --seed (fixed default, never wall clock); exit codes are 2 for
// argument errors, 3 for data errors, 4 for numeric failures.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "boostkit/common.hpp"
#include "boostkit/model_io.hpp"
#include "boostkit/rng.hpp"
#include "boostkit/stopping.hpp"

namespace fs = std::filesystem;
using namespace boostkit;

namespace {

constexpr std::uint64_t kDefaultSeed = 12345;

// ---------------------------------------------------------------- helpers --

struct CommonFitArgs {
    std::string data_path;
    std::string response;
    std::string response_kind;  // "", continuous, binary
    std::string time_column, status_column;
    std::string engine = "gradient";
    std::string family = "l2";
    double huber_delta = 0.0;  // 0 = adaptive median rule
    std::string glm_family = "gaussian";
    std::string learner = "linear";
    std::vector<std::string> learner_for;
    double target_df = 4.0;
    int m_stop = 100;
    double step_length = 0.1;
    double nu = 0.0;
    double lambda = -1.0;
    bool nu_exact = false;
    std::string unpenalized_csv;
    bool standardize = false;
    bool impute_median = false;
    std::uint64_t seed = kDefaultSeed;
    int threads = 0;  // 0 = resolve from env / default 1
};

void add_common_fit_options(CLI::App* cmd, CommonFitArgs& a) {
    cmd->add_option("--data", a.data_path, "training CSV (header row required)")->required();
    cmd->add_option("--response", a.response, "response column name");
    cmd->add_option("--response-kind", a.response_kind, "continuous|binary (default inferred)");
    cmd->add_option("--time", a.time_column, "survival time column");
    cmd->add_option("--status", a.status_column, "survival status column (0/1)");
    cmd->add_option("--engine", a.engine,
                    "gradient|likelihood-glm|likelihood-cox|adaboost (default gradient)");
    cmd->add_option("--family", a.family,
                    "gradient-engine loss: l2|laplace|huber|exponential|logistic|gamma");
    cmd->add_option("--huber-delta", a.huber_delta,
                    "fixed Huber threshold (default: adaptive median rule)");
    cmd->add_option("--glm-family", a.glm_family, "gaussian|logistic|poisson for likelihood-glm");
    cmd->add_option("--learner", a.learner, "linear|pspline base-learner (gradient engine)");
    cmd->add_option("--learner-for", a.learner_for,
                    "per-column overrides, e.g. --learner-for age:pspline")
        ->delimiter(',');
    cmd->add_option("--df", a.target_df, "spline degrees of freedom (default 4)");
    cmd->add_option("--mstop", a.m_stop, "boosting iterations (default 100)");
    cmd->add_option("--sl", a.step_length, "step length (default 0.1)");
    cmd->add_option("--nu", a.nu, "likelihood-boosting step size; sets the penalty");
    cmd->add_option("--lambda", a.lambda, "explicit likelihood-boosting penalty");
    cmd->add_flag("--nu-exact", a.nu_exact,
                  "interpret --nu as an exact per-candidate step instead of a fixed penalty");
    cmd->add_option("--unpenalized", a.unpenalized_csv,
                    "comma-separated mandatory covariates (likelihood-cox)");
    cmd->add_flag("--standardize", a.standardize, "standardize predictors before fitting");
    cmd->add_flag("--impute-median", a.impute_median,
                  "impute missing cells with the column median instead of rejecting");
    cmd->add_option("--seed", a.seed, "random seed (fixed default, never wall clock)");
    cmd->add_option("--threads", a.threads, "max worker threads (env BOOSTKIT_THREADS, default 1)");
}

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("BOOSTKIT_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

std::vector<std::string> split_csv_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

ResponseSpec response_spec(const CommonFitArgs& a, EngineKind engine, Family family,
                           GlmFamily glm_family) {
    ResponseSpec spec;
    if (!a.time_column.empty() || !a.status_column.empty()) {
        if (a.time_column.empty() || a.status_column.empty())
            throw ArgError("survival responses need both --time and --status");
        spec.kind = ResponseKind::Survival;
        spec.time_column = a.time_column;
        spec.status_column = a.status_column;
        return spec;
    }
    if (engine == EngineKind::LikelihoodCox)
        throw ArgError("likelihood-cox needs --time and --status");
    if (a.response.empty()) throw ArgError("--response is required");
    spec.column = a.response;
    if (a.response_kind == "binary") {
        spec.kind = ResponseKind::Binary;
    } else if (a.response_kind == "continuous" || a.response_kind.empty()) {
        spec.kind = ResponseKind::Continuous;
        const bool wants_binary =
            engine == EngineKind::AdaBoost ||
            (engine == EngineKind::Gradient &&
             (family == Family::Exponential || family == Family::Logistic)) ||
            (engine == EngineKind::LikelihoodGlm && glm_family == GlmFamily::Logistic);
        if (a.response_kind.empty() && wants_binary) spec.kind = ResponseKind::Binary;
    } else {
        throw ArgError("unknown --response-kind '" + a.response_kind + "'");
    }
    return spec;
}

FitConfig build_config(const CommonFitArgs& a, const Dataset& d) {
    FitConfig cfg;
    cfg.engine = engine_from_id(a.engine);
    cfg.family = family_from_id(a.family);
    if (a.huber_delta > 0.0) cfg.huber_delta = a.huber_delta;
    cfg.glm_family = glm_family_from_id(a.glm_family);
    cfg.m_stop = a.m_stop;
    cfg.step_length = a.step_length;
    cfg.standardize = a.standardize;
    cfg.n_threads = resolve_threads(a.threads);

    if (a.lambda >= 0.0 && a.nu > 0.0)
        throw ArgError("--nu and --lambda are mutually exclusive");
    if (a.lambda >= 0.0) {
        cfg.penalty_choice = PenaltyChoice::ExplicitLambda;
        cfg.lambda = a.lambda;
    } else {
        cfg.nu = a.nu > 0.0 ? a.nu : 0.1;
        cfg.penalty_choice = a.nu_exact ? PenaltyChoice::NuExact : PenaltyChoice::NuFixed;
    }

    if (cfg.engine == EngineKind::Gradient) {
        auto parse_kind = [](const std::string& s) {
            if (s == "linear") return LearnerKind::Linear;
            if (s == "pspline") return LearnerKind::PSpline;
            if (s == "stump")
                throw ArgError(
                    "stump base-learners live in the adaboost engine; use --engine adaboost");
            throw ArgError("unknown learner '" + s + "' (expected linear or pspline)");
        };
        LearnerConfig base;
        base.kind = parse_kind(a.learner);
        base.target_df = a.target_df;
        if (a.learner_for.empty()) {
            cfg.learners = {base};
        } else {
            cfg.learners.assign(static_cast<std::size_t>(d.n_cols()), base);
            for (const std::string& spec : a.learner_for) {
                const auto pos = spec.find(':');
                if (pos == std::string::npos)
                    throw ArgError("--learner-for entries look like column:learner");
                const std::string name = spec.substr(0, pos);
                const int j = d.column_index(name);
                if (j < 0) throw DataError("--learner-for column '" + name + "' not in data");
                cfg.learners[static_cast<std::size_t>(j)].kind = parse_kind(spec.substr(pos + 1));
            }
        }
    }

    for (const std::string& name : split_csv_list(a.unpenalized_csv)) {
        const int j = d.column_index(name);
        if (j < 0) throw DataError("--unpenalized column '" + name + "' not in data");
        cfg.unpenalized.push_back(j);
    }
    return cfg;
}

// Invocation string for provenance. Thread flags are stripped: the thread
// count never changes results and reports must stay byte-identical across it.
std::string invocation_string(int argc, char** argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--threads") {
            ++i;
            continue;
        }
        if (!out.empty()) out += ' ';
        out += arg;
    }
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << text;
}

std::string tsv_header(const std::string& invocation, std::uint64_t seed) {
    std::string h = "# invocation: " + invocation + "\n";
    h += "# seed: " + std::to_string(seed) + "  rng: " + std::string(Rng::kAlgorithmId) + "\n";
    return h;
}

// Reorders a raw CSV matrix into the model's column order, validating that
// every needed cell is numeric.
Eigen::MatrixXd select_columns(const std::vector<std::string>& names,
                               const std::vector<std::string>& cols,
                               const Eigen::MatrixXd& matrix, const std::string& origin) {
    Eigen::MatrixXd x(matrix.rows(), static_cast<Eigen::Index>(names.size()));
    for (std::size_t j = 0; j < names.size(); ++j) {
        const auto it = std::find(cols.begin(), cols.end(), names[j]);
        if (it == cols.end())
            throw DataError(origin + " is missing column '" + names[j] + "'");
        const Eigen::VectorXd col = matrix.col(static_cast<Eigen::Index>(it - cols.begin()));
        for (Eigen::Index i = 0; i < col.size(); ++i)
            if (std::isnan(col[i]))
                throw DataError(origin + ": non-numeric or missing value in column '" + names[j] +
                                "' at row " + std::to_string(i + 1));
        x.col(static_cast<Eigen::Index>(j)) = col;
    }
    return x;
}

// ------------------------------------------------------------------- fit --

struct FitOutputs {
    AnyModel model;
    Dataset data;
    FitConfig config;
};

FitOutputs run_fit(const CommonFitArgs& args) {
    const EngineKind engine = engine_from_id(args.engine);
    const Family family = family_from_id(args.family);
    const GlmFamily glm_family = glm_family_from_id(args.glm_family);
    CsvOptions csv;
    csv.missing = args.impute_median ? MissingPolicy::ImputeMedian : MissingPolicy::Reject;
    Dataset d = load_csv(args.data_path, response_spec(args, engine, family, glm_family), csv);
    FitConfig cfg = build_config(args, d);
    AnyModel model = fit_with_config(d, cfg);
    return FitOutputs{std::move(model), std::move(d), std::move(cfg)};
}

void write_risk_path(const fs::path& out_dir, const FitOutputs& fit, const std::string& header) {
    std::string tsv = header + "m\trisk\n";
    std::vector<double> risks;
    if (std::holds_alternative<BoostModel>(fit.model)) {
        risks = std::get<BoostModel>(fit.model).training_risk;
    } else if (std::holds_alternative<LikBoostModel>(fit.model)) {
        risks = lik_risk_path(std::get<LikBoostModel>(fit.model), fit.data);
    } else {
        risks = exponential_risk_path(std::get<AdaBoostModel>(fit.model), fit.data);
    }
    for (std::size_t m = 0; m < risks.size(); ++m)
        tsv += std::to_string(m) + "\t" + format_number(risks[m]) + "\n";
    write_text(out_dir / "risk_path.tsv", tsv);
}

// Default evaluation grid for a component: equidistant over the column range.
Eigen::VectorXd column_grid(const Eigen::VectorXd& col, int points = 100) {
    return Eigen::VectorXd::LinSpaced(points, col.minCoeff(), col.maxCoeff());
}

void write_gradient_tables(const fs::path& out_dir, const FitOutputs& fit,
                           const std::string& header) {
    const BoostModel& model = std::get<BoostModel>(fit.model);
    const bool all_linear =
        std::all_of(model.path.begin(), model.path.end(), [&](const PathEntry& e) {
            return model.learners[static_cast<std::size_t>(e.component)].kind ==
                   LearnerKind::Linear;
        });
    if (all_linear) {
        const auto agg = aggregate_coefficients(model);
        std::string tsv = header + "component\tcoefficient\n";
        tsv += "(intercept)\t" + format_number(agg.intercept) + "\n";
        for (std::size_t j = 0; j < model.names.size(); ++j)
            tsv += model.names[j] + "\t" +
                   format_number(agg.coefficients[static_cast<Eigen::Index>(j)]) + "\n";
        write_text(out_dir / "coefficients.tsv", tsv);
        return;
    }
    fs::create_directories(out_dir / "effects");
    for (std::size_t j = 0; j < model.names.size(); ++j) {
        const Eigen::VectorXd grid =
            column_grid(fit.data.predictors.col(static_cast<Eigen::Index>(j)));
        const PartialEffect pe = partial_effect(model, static_cast<int>(j), grid);
        std::string tsv = header;
        tsv += "# component: " + model.names[j] + (pe.selected ? "" : " (not selected)") + "\n";
        tsv += "grid\teffect\n";
        for (Eigen::Index k = 0; k < grid.size(); ++k)
            tsv += format_number(pe.grid[k]) + "\t" + format_number(pe.effect[k]) + "\n";
        write_text(out_dir / "effects" / (model.names[j] + ".tsv"), tsv);
    }
}

void write_likelihood_tables(const fs::path& out_dir, const FitOutputs& fit,
                             const std::string& header) {
    const LikBoostModel& model = std::get<LikBoostModel>(fit.model);
    const auto [intercept, beta] = model.coefficients();
    std::string tsv = header + "component\tcoefficient\n";
    if (model.engine == LikBoostModel::Engine::Glm)
        tsv += "(intercept)\t" + format_number(intercept) + "\n";
    for (std::size_t j = 0; j < model.names.size(); ++j)
        tsv += model.names[j] + "\t" + format_number(beta[static_cast<Eigen::Index>(j)]) + "\n";
    write_text(out_dir / "coefficients.tsv", tsv);
}

void write_adaboost_tables(const fs::path& out_dir, const FitOutputs& fit,
                           const std::string& header) {
    const AdaBoostModel& model = std::get<AdaBoostModel>(fit.model);
    std::string tsv = header + "round\tcomponent\tthreshold\tpolarity\talpha\tepsilon\n";
    for (std::size_t m = 0; m < model.rounds.size(); ++m) {
        const auto& r = model.rounds[m];
        tsv += std::to_string(m + 1) + "\t" +
               model.names[static_cast<std::size_t>(r.stump.component)] + "\t" +
               format_number(r.stump.threshold) + "\t" + std::to_string(r.stump.polarity) + "\t" +
               format_number(r.alpha) + "\t" + format_number(r.epsilon) + "\n";
    }
    write_text(out_dir / "rounds.tsv", tsv);
}

void print_fit_report(const FitOutputs& fit, bool trace) {
    if (std::holds_alternative<BoostModel>(fit.model)) {
        const BoostModel& m = std::get<BoostModel>(fit.model);
        std::cout << "engine: gradient  family: " << family_id(m.family)
                  << "  mstop: " << m.m_stop() << "  sl: " << format_number(m.step_length)
                  << "\n";
        std::cout << "offset: " << format_number(m.offset)
                  << "  final training risk: " << format_number(m.training_risk.back()) << "\n";
        if (!m.non_fittable.empty()) {
            std::cout << "excluded constant columns:";
            for (const auto& n : m.non_fittable) std::cout << ' ' << n;
            std::cout << "\n";
        }
        std::map<std::string, int> counts;
        for (const auto& e : m.path) counts[m.names[static_cast<std::size_t>(e.component)]]++;
        std::cout << "selected components (times):";
        for (const auto& [name, c] : counts) std::cout << ' ' << name << '(' << c << ')';
        std::cout << "\n";
    } else if (std::holds_alternative<LikBoostModel>(fit.model)) {
        const LikBoostModel& m = std::get<LikBoostModel>(fit.model);
        const bool cox = m.engine == LikBoostModel::Engine::Cox;
        std::cout << "engine: " << (cox ? "likelihood-cox" : "likelihood-glm")
                  << (cox ? "" : "  family: " + glm_family_id(m.glm_family))
                  << "  mstop: " << m.m_stop() << "\n";
        std::cout << (cox ? "partial log-likelihood: " : "log-likelihood: ")
                  << format_number(m.loglik_path.back()) << "\n";
        const auto [intercept, beta] = m.coefficients();
        int nonzero = 0;
        for (Eigen::Index j = 0; j < beta.size(); ++j) nonzero += beta[j] != 0.0;
        std::cout << nonzero << " non-zero coefficients";
        if (!m.unpenalized.empty())
            std::cout << " (with " << m.unpenalized.size() << " being mandatory)";
        std::cout << "\n";
        if (trace && !m.path.empty()) {
            // selected component per step, eight names to a line
            for (std::size_t k = 0; k < m.path.size(); ++k) {
                std::cout << ' ' << m.names[static_cast<std::size_t>(m.path[k].component)];
                if ((k + 1) % 8 == 0) std::cout << "\n";
            }
            if (m.path.size() % 8 != 0) std::cout << "\n";
        }
    } else {
        const AdaBoostModel& m = std::get<AdaBoostModel>(fit.model);
        std::cout << "engine: adaboost  rounds: " << m.m_stop() << "\n";
        if (m.terminated_early) std::cout << "terminated early: " << m.termination_reason << "\n";
    }
}

int cmd_fit(const CommonFitArgs& args, const std::string& out_dir_s, bool trace,
            const std::string& invocation) {
    const fs::path out_dir(out_dir_s);
    fs::create_directories(out_dir);
    FitOutputs fit = run_fit(args);

    ModelMeta meta;
    meta.seed = args.seed;
    meta.rng = Rng::kAlgorithmId;
    meta.invocation = invocation;
    save_model(fit.model, (out_dir / "model.json").string(), meta);

    const std::string header = tsv_header(invocation, args.seed);
    write_risk_path(out_dir, fit, header);
    if (std::holds_alternative<BoostModel>(fit.model))
        write_gradient_tables(out_dir, fit, header);
    else if (std::holds_alternative<LikBoostModel>(fit.model))
        write_likelihood_tables(out_dir, fit, header);
    else
        write_adaboost_tables(out_dir, fit, header);

    print_fit_report(fit, trace);
    std::cout << "model written to " << (out_dir / "model.json").string() << "\n";
    return 0;
}

// --------------------------------------------------------------- predict --

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out_path, int at_m, const std::string& scale_s) {
    if (scale_s != "link" && scale_s != "response")
        throw ArgError("--scale must be link or response");
    const PredictScale scale = scale_s == "response" ? PredictScale::Response : PredictScale::Link;
    const AnyModel model = load_model(model_path);

    const std::vector<std::string>* names = nullptr;
    std::visit([&](const auto& m) { names = &m.names; }, model);
    const auto [cols, matrix] = load_matrix_csv(data_path);
    const Eigen::MatrixXd x = select_columns(*names, cols, matrix, data_path);

    const std::optional<int> m = at_m >= 0 ? std::optional<int>(at_m) : std::nullopt;
    std::string csv;
    if (std::holds_alternative<AdaBoostModel>(model)) {
        const AdaBoostModel& ada = std::get<AdaBoostModel>(model);
        const AdaBoostPrediction pred = predict_adaboost(ada, x);
        const bool have_labels = !ada.label_positive.empty();
        csv = have_labels ? "prediction,margin,label\n" : "prediction,margin\n";
        for (Eigen::Index i = 0; i < pred.labels.size(); ++i) {
            csv += format_number(pred.labels[i]) + "," + format_number(pred.margins[i]);
            if (have_labels)
                csv += "," + (pred.labels[i] > 0 ? ada.label_positive : ada.label_negative);
            csv += "\n";
        }
    } else {
        Eigen::VectorXd pred;
        if (std::holds_alternative<BoostModel>(model))
            pred = predict(std::get<BoostModel>(model), x, m, scale);
        else
            pred = predict_lik(std::get<LikBoostModel>(model), x, m, scale);
        csv = "prediction\n";
        for (Eigen::Index i = 0; i < pred.size(); ++i) csv += format_number(pred[i]) + "\n";
    }
    write_text(out_path, csv);
    std::cout << "predictions written to " << out_path << "\n";
    return 0;
}

// -------------------------------------------------------------------- cv --

std::vector<int> parse_grid(const std::string& text, int default_max) {
    if (text.empty()) {
        std::vector<int> g;
        for (int m = 1; m <= default_max; ++m) g.push_back(m);
        return g;
    }
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    try {
        if (parts.size() == 2 || parts.size() == 3) {
            const int lo = std::stoi(parts[0]);
            const int hi = std::stoi(parts[1]);
            const int stride = parts.size() == 3 ? std::stoi(parts[2]) : 1;
            if (stride >= 1 && hi >= lo) {
                std::vector<int> g;
                for (int m = lo; m <= hi; m += stride) g.push_back(m);
                return g;
            }
        }
    } catch (const std::exception&) {
    }
    throw ArgError("cannot parse --grid '" + text + "' (expected lo:hi or lo:hi:stride)");
}

int cmd_cv(const CommonFitArgs& args, const std::string& scheme_s, bool stratified,
           const std::string& grid_s, bool refit, const std::string& out_dir_s,
           const std::string& invocation) {
    const fs::path out_dir(out_dir_s);
    fs::create_directories(out_dir);

    const EngineKind engine = engine_from_id(args.engine);
    const Family family = family_from_id(args.family);
    const GlmFamily glm_family = glm_family_from_id(args.glm_family);
    CsvOptions csv;
    csv.missing = args.impute_median ? MissingPolicy::ImputeMedian : MissingPolicy::Reject;
    Dataset d = load_csv(args.data_path, response_spec(args, engine, family, glm_family), csv);
    FitConfig cfg = build_config(args, d);

    const std::vector<int> grid = parse_grid(grid_s, cfg.m_stop);
    const ResamplingScheme scheme = ResamplingScheme::parse(scheme_s, args.seed, stratified);
    const StoppingReport report = cv_risk(d, cfg, scheme, grid);

    std::string tsv = tsv_header(invocation, args.seed);
    tsv += "# scheme: " + scheme.describe() + "  criterion: " + report.criterion + "\n";
    for (const auto& w : report.warnings) tsv += "# " + w + "\n";
    tsv += "resample";
    for (int m : report.grid) tsv += "\t" + std::to_string(m);
    tsv += "\n";
    for (Eigen::Index r = 0; r < report.risk.rows(); ++r) {
        tsv += std::to_string(r + 1);
        for (Eigen::Index k = 0; k < report.risk.cols(); ++k)
            tsv += "\t" + format_number(report.risk(r, k));
        tsv += "\n";
    }
    write_text(out_dir / "cv_risk.tsv", tsv);

    std::string mean_tsv = tsv_header(invocation, args.seed) + "m\tmean_risk\n";
    for (std::size_t k = 0; k < report.grid.size(); ++k)
        mean_tsv +=
            std::to_string(report.grid[k]) + "\t" + format_number(report.mean_risk[k]) + "\n";
    write_text(out_dir / "cv_mean.tsv", mean_tsv);

    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "selected_mstop=" << report.selected << "\n";

    if (refit) {
        const AnyModel model = fit_with_config(d, cfg, report.selected);
        ModelMeta meta;
        meta.seed = args.seed;
        meta.rng = Rng::kAlgorithmId;
        meta.invocation = invocation;
        save_model(model, (out_dir / "model.json").string(), meta);
        std::cout << "refit model written to " << (out_dir / "model.json").string() << "\n";
    }
    return 0;
}

// --------------------------------------------------------------- effects --

int cmd_effects(const std::string& model_path, const std::string& data_path,
                const std::string& out_dir_s, int grid_points, int at_m,
                const std::string& invocation) {
    const fs::path out_dir(out_dir_s);
    fs::create_directories(out_dir / "effects");
    const AnyModel model = load_model(model_path);
    if (std::holds_alternative<AdaBoostModel>(model))
        throw ArgError("effects tables are defined for the regression engines, not adaboost");

    const std::string header = tsv_header(invocation, 0);
    const std::vector<std::string>* names = nullptr;
    std::visit([&](const auto& m) { names = &m.names; }, model);
    const auto [cols, matrix] = load_matrix_csv(data_path);
    const Eigen::MatrixXd x = select_columns(*names, cols, matrix, data_path);
    const std::optional<int> cut = at_m >= 0 ? std::optional<int>(at_m) : std::nullopt;

    for (std::size_t j = 0; j < names->size(); ++j) {
        const Eigen::VectorXd grid = column_grid(x.col(static_cast<Eigen::Index>(j)), grid_points);
        std::string tsv = header;
        if (std::holds_alternative<BoostModel>(model)) {
            const BoostModel& m = std::get<BoostModel>(model);
            const PartialEffect pe = partial_effect(m, static_cast<int>(j), grid, cut);
            tsv += "# component: " + (*names)[j] + (pe.selected ? "" : " (not selected)") + "\n";
            tsv += "grid\teffect\n";
            for (Eigen::Index k = 0; k < grid.size(); ++k)
                tsv += format_number(grid[k]) + "\t" + format_number(pe.effect[k]) + "\n";
        } else {
            const LikBoostModel& m = std::get<LikBoostModel>(model);
            if (m.engine == LikBoostModel::Engine::Glm && m.hat_tracked && !cut) {
                const BandTable b = confidence_bands(m, static_cast<int>(j), grid);
                tsv += "# component: " + (*names)[j] + (b.selected ? "" : " (not selected)") + "\n";
                tsv += "grid\testimate\tlower\tupper\n";
                for (Eigen::Index k = 0; k < grid.size(); ++k)
                    tsv += format_number(grid[k]) + "\t" + format_number(b.estimate[k]) + "\t" +
                           format_number(b.lower[k]) + "\t" + format_number(b.upper[k]) + "\n";
            } else {
                const auto [intercept, beta] = m.coefficients(cut);
                tsv += "# component: " + (*names)[j] + "\n";
                tsv += "grid\teffect\n";
                for (Eigen::Index k = 0; k < grid.size(); ++k)
                    tsv += format_number(grid[k]) + "\t" +
                           format_number(beta[static_cast<Eigen::Index>(j)] * grid[k]) + "\n";
            }
        }
        write_text(out_dir / "effects" / ((*names)[j] + ".tsv"), tsv);
    }
    std::cout << "effect tables written to " << (out_dir / "effects").string() << "\n";
    return 0;
}

// -------------------------------------------------------------- simulate --

int cmd_simulate(int n, std::uint64_t seed, const std::string& out_path) {
    Eigen::VectorXd truth;
    const Dataset d = simulate_appendix(n, seed, &truth);
    std::string csv = "x,y,true_f\n";
    for (Eigen::Index i = 0; i < d.n_rows(); ++i)
        csv += format_number(d.predictors(i, 0)) + "," + format_number(d.response.values[i]) +
               "," + format_number(truth[i]) + "\n";
    write_text(out_path, csv);
    std::cout << "simulated dataset written to " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"boostkit: statistical boosting for regression, classification and survival"};
    app.require_subcommand(1);
    const std::string invocation = invocation_string(argc, argv);

    CommonFitArgs fit_args;
    std::string fit_out = "boostkit_out";
    bool fit_trace = false;
    CLI::App* fit_cmd = app.add_subcommand("fit", "fit a boosting model");
    add_common_fit_options(fit_cmd, fit_args);
    fit_cmd->add_option("--out", fit_out, "output directory (default boostkit_out)");
    fit_cmd->add_flag("--trace", fit_trace, "print the selected component per step");

    std::string pr_model, pr_data, pr_out = "predictions.csv", pr_scale = "link";
    int pr_at_m = -1;
    CLI::App* pr_cmd = app.add_subcommand("predict", "predict from a saved model");
    pr_cmd->add_option("--model", pr_model, "model.json path")->required();
    pr_cmd->add_option("--data", pr_data, "CSV with the model's predictor columns")->required();
    pr_cmd->add_option("--out", pr_out, "output CSV (default predictions.csv)");
    pr_cmd->add_option("--at-m", pr_at_m, "truncate the model to m iterations");
    pr_cmd->add_option("--scale", pr_scale, "link|response (default link)");

    CommonFitArgs cv_args;
    std::string cv_scheme = "bootstrap:25", cv_grid, cv_out = "boostkit_cv";
    bool cv_stratified = false, cv_refit = false;
    CLI::App* cv_cmd = app.add_subcommand("cv", "select the stopping iteration by resampling");
    add_common_fit_options(cv_cmd, cv_args);
    cv_cmd->add_option("--scheme", cv_scheme,
                       "kfold:K | bootstrap:B | subsample:B:fraction (default bootstrap:25)");
    cv_cmd->add_flag("--stratified", cv_stratified, "stratify resampling by class/status");
    cv_cmd->add_option("--grid", cv_grid, "candidate iterations lo:hi[:stride] (default 1:mstop)");
    cv_cmd->add_flag("--refit", cv_refit, "refit on the full data at the selected m");
    cv_cmd->add_option("--out", cv_out, "output directory (default boostkit_cv)");

    std::string ef_model, ef_data, ef_out = "boostkit_out";
    int ef_points = 100, ef_at_m = -1;
    CLI::App* ef_cmd = app.add_subcommand("effects", "emit partial-effect tables");
    ef_cmd->add_option("--model", ef_model, "model.json path")->required();
    ef_cmd->add_option("--data", ef_data, "CSV supplying the evaluation ranges")->required();
    ef_cmd->add_option("--out", ef_out, "output directory");
    ef_cmd->add_option("--grid-points", ef_points, "grid resolution (default 100)");
    ef_cmd->add_option("--at-m", ef_at_m, "truncate the model to m iterations");

    int sim_n = 150;
    std::uint64_t sim_seed = kDefaultSeed;
    std::string sim_out = "simulated.csv";
    CLI::App* sim_cmd = app.add_subcommand("simulate", "generate the benchmark curve dataset");
    sim_cmd->add_option("--n", sim_n, "observations (default 150)");
    sim_cmd->add_option("--seed", sim_seed, "random seed");
    sim_cmd->add_option("--out", sim_out, "output CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return 2;
    }

    try {
        if (*fit_cmd) return cmd_fit(fit_args, fit_out, fit_trace, invocation);
        if (*pr_cmd) return cmd_predict(pr_model, pr_data, pr_out, pr_at_m, pr_scale);
        if (*cv_cmd)
            return cmd_cv(cv_args, cv_scheme, cv_stratified, cv_grid, cv_refit, cv_out, invocation);
        if (*ef_cmd) return cmd_effects(ef_model, ef_data, ef_out, ef_points, ef_at_m, invocation);
        if (*sim_cmd) return cmd_simulate(sim_n, sim_seed, sim_out);
    } catch (const ArgError& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
