#include "boostkit/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "boostkit/common.hpp"

namespace boostkit {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json vec_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Eigen::VectorXd vec_from_json(const json& arr) {
    Eigen::VectorXd v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    return v;
}

json mat_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec_to_json(m.row(i)));
    return rows;
}

Eigen::MatrixXd mat_from_json(const json& rows) {
    if (rows.empty()) return {};
    Eigen::MatrixXd m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        m.row(static_cast<Eigen::Index>(i)) = vec_from_json(rows[i]);
    return m;
}

json scaling_to_json(const Scaling& s) {
    return json{{"applied", s.applied}, {"mean", s.mean}, {"sd", s.sd}};
}

Scaling scaling_from_json(const json& j) {
    Scaling s;
    s.applied = j.at("applied").get<bool>();
    s.mean = j.at("mean").get<std::vector<double>>();
    s.sd = j.at("sd").get<std::vector<double>>();
    return s;
}

std::string kind_id(ResponseKind k) {
    switch (k) {
        case ResponseKind::Continuous: return "continuous";
        case ResponseKind::Binary: return "binary";
        case ResponseKind::Survival: return "survival";
    }
    return "?";
}

ResponseKind kind_from_id(const std::string& id) {
    if (id == "continuous") return ResponseKind::Continuous;
    if (id == "binary") return ResponseKind::Binary;
    if (id == "survival") return ResponseKind::Survival;
    throw DataError("model file: unknown response kind '" + id + "'");
}

json gradient_payload(const BoostModel& m) {
    json j;
    j["family"] = family_id(m.family);
    if (m.huber_fixed_delta) j["huber_fixed_delta"] = *m.huber_fixed_delta;
    j["step_length"] = m.step_length;
    j["offset"] = m.offset;
    j["non_fittable"] = m.non_fittable;
    json learners = json::array();
    for (const auto& cl : m.learners) {
        json lj;
        lj["kind"] = cl.kind == LearnerKind::Linear ? "linear" : "pspline";
        lj["name"] = cl.name;
        lj["fittable"] = cl.fittable;
        lj["x_mean"] = cl.x_mean;
        if (cl.kind == LearnerKind::PSpline && cl.knots.size() > 0) {
            lj["knots"] = vec_to_json(cl.knots);
            lj["lambda"] = cl.lambda;
            lj["degree"] = cl.degree;
            lj["diff_order"] = cl.diff_order;
            lj["basis_col_means"] = vec_to_json(cl.basis_col_means);
        }
        learners.push_back(std::move(lj));
    }
    j["learners"] = std::move(learners);
    json path = json::array();
    for (const auto& e : m.path) {
        json ej;
        ej["component"] = e.component;
        ej["name"] = m.names[static_cast<std::size_t>(e.component)];
        if (m.learners[static_cast<std::size_t>(e.component)].kind == LearnerKind::Linear) {
            ej["intercept"] = e.intercept;
            ej["slope"] = e.slope;
        } else {
            ej["gamma"] = vec_to_json(e.gamma);
        }
        if (m.family == Family::Huber) ej["huber_delta"] = e.huber_delta;
        path.push_back(std::move(ej));
    }
    j["path"] = std::move(path);
    j["training_risk"] = m.training_risk;
    return j;
}

BoostModel gradient_from_json(const json& j) {
    BoostModel m;
    m.family = family_from_id(j.at("family").get<std::string>());
    if (j.contains("huber_fixed_delta")) m.huber_fixed_delta = j["huber_fixed_delta"].get<double>();
    m.step_length = j.at("step_length").get<double>();
    m.offset = j.at("offset").get<double>();
    m.non_fittable = j.at("non_fittable").get<std::vector<std::string>>();
    for (const auto& lj : j.at("learners")) {
        ComponentLearner cl;
        cl.kind = lj.at("kind").get<std::string>() == "linear" ? LearnerKind::Linear
                                                               : LearnerKind::PSpline;
        cl.name = lj.at("name").get<std::string>();
        cl.fittable = lj.at("fittable").get<bool>();
        cl.x_mean = lj.at("x_mean").get<double>();
        if (lj.contains("knots")) {
            cl.knots = vec_from_json(lj["knots"]);
            cl.lambda = lj.at("lambda").get<double>();
            cl.degree = lj.at("degree").get<int>();
            cl.diff_order = lj.at("diff_order").get<int>();
            cl.basis_col_means = vec_from_json(lj.at("basis_col_means"));
        }
        m.learners.push_back(std::move(cl));
    }
    for (const auto& ej : j.at("path")) {
        PathEntry e;
        e.component = ej.at("component").get<int>();
        if (ej.contains("gamma")) e.gamma = vec_from_json(ej["gamma"]);
        else {
            e.intercept = ej.at("intercept").get<double>();
            e.slope = ej.at("slope").get<double>();
        }
        if (ej.contains("huber_delta")) e.huber_delta = ej["huber_delta"].get<double>();
        m.path.push_back(std::move(e));
    }
    m.training_risk = j.at("training_risk").get<std::vector<double>>();
    return m;
}

json likelihood_payload(const LikBoostModel& m) {
    json j;
    j["variant"] = m.engine == LikBoostModel::Engine::Glm ? "glm" : "cox";
    j["glm_family"] = glm_family_id(m.glm_family);
    j["penalty_mode"] =
        m.penalty.mode == PenaltySpec::Mode::Lambda ? "lambda" : "step_size";
    j["penalty_value"] = m.penalty.value;
    j["centers"] = vec_to_json(m.centers);
    j["intercept0"] = m.intercept0;
    j["unpenalized"] = m.unpenalized;
    j["unpen_init"] = vec_to_json(m.unpen_init);
    j["loglik_path"] = m.loglik_path;
    j["df_path"] = m.df_path;
    j["n_train"] = m.n_train;
    json path = json::array();
    for (const auto& e : m.path) {
        json ej;
        ej["component"] = e.component;
        ej["name"] = m.names[static_cast<std::size_t>(e.component)];
        ej["gamma"] = e.gamma;
        ej["intercept_delta"] = e.intercept_delta;
        if (e.unpenalized.size() > 0) ej["unpenalized"] = vec_to_json(e.unpenalized);
        path.push_back(std::move(ej));
    }
    j["path"] = std::move(path);
    if (m.hat_tracked) {
        json hat;
        hat["intercept_row"] = vec_to_json(m.intercept_row);
        hat["coefficient_rows"] = mat_to_json(m.coefficient_rows);
        hat["final_mu"] = vec_to_json(m.final_mu);
        hat["dispersion"] = m.dispersion;
        j["hat"] = std::move(hat);
    }
    return j;
}

LikBoostModel likelihood_from_json(const json& j) {
    LikBoostModel m;
    m.engine = j.at("variant").get<std::string>() == "glm" ? LikBoostModel::Engine::Glm
                                                           : LikBoostModel::Engine::Cox;
    m.glm_family = glm_family_from_id(j.at("glm_family").get<std::string>());
    m.penalty = j.at("penalty_mode").get<std::string>() == "lambda"
                    ? PenaltySpec::lambda(j.at("penalty_value").get<double>())
                    : PenaltySpec::step_size(j.at("penalty_value").get<double>());
    m.centers = vec_from_json(j.at("centers"));
    m.intercept0 = j.at("intercept0").get<double>();
    m.unpenalized = j.at("unpenalized").get<std::vector<int>>();
    m.unpen_init = vec_from_json(j.at("unpen_init"));
    m.loglik_path = j.at("loglik_path").get<std::vector<double>>();
    m.df_path = j.at("df_path").get<std::vector<double>>();
    m.n_train = j.at("n_train").get<int>();
    for (const auto& ej : j.at("path")) {
        LikPathEntry e;
        e.component = ej.at("component").get<int>();
        e.gamma = ej.at("gamma").get<double>();
        e.intercept_delta = ej.at("intercept_delta").get<double>();
        if (ej.contains("unpenalized")) e.unpenalized = vec_from_json(ej["unpenalized"]);
        m.path.push_back(std::move(e));
    }
    if (j.contains("hat")) {
        const json& hat = j["hat"];
        m.hat_tracked = true;
        m.intercept_row = vec_from_json(hat.at("intercept_row"));
        m.coefficient_rows = mat_from_json(hat.at("coefficient_rows"));
        m.final_mu = vec_from_json(hat.at("final_mu"));
        m.dispersion = hat.at("dispersion").get<double>();
    }
    return m;
}

json adaboost_payload(const AdaBoostModel& m) {
    json j;
    json rounds = json::array();
    for (const auto& r : m.rounds) {
        rounds.push_back(json{{"component", r.stump.component},
                              {"name", m.names[static_cast<std::size_t>(r.stump.component)]},
                              {"threshold", r.stump.threshold},
                              {"polarity", r.stump.polarity},
                              {"alpha", r.alpha},
                              {"epsilon", r.epsilon}});
    }
    j["rounds"] = std::move(rounds);
    j["terminated_early"] = m.terminated_early;
    j["termination_reason"] = m.termination_reason;
    return j;
}

AdaBoostModel adaboost_from_json(const json& j) {
    AdaBoostModel m;
    for (const auto& rj : j.at("rounds")) {
        AdaBoostRound r;
        r.stump.component = rj.at("component").get<int>();
        r.stump.threshold = rj.at("threshold").get<double>();
        r.stump.polarity = rj.at("polarity").get<int>();
        r.alpha = rj.at("alpha").get<double>();
        r.epsilon = rj.at("epsilon").get<double>();
        m.rounds.push_back(r);
    }
    m.terminated_early = j.at("terminated_early").get<bool>();
    m.termination_reason = j.at("termination_reason").get<std::string>();
    return m;
}

}  // namespace

void save_model(const AnyModel& model, const std::string& path, const ModelMeta& meta) {
    json j;
    j["format_version"] = kFormatVersion;
    j["seed"] = meta.seed;
    j["rng"] = meta.rng;
    j["invocation"] = meta.invocation;

    if (std::holds_alternative<BoostModel>(model)) {
        const BoostModel& m = std::get<BoostModel>(model);
        j["engine"] = "gradient";
        j["names"] = m.names;
        j["scaling"] = scaling_to_json(m.scaling);
        j["response"] = json{{"kind", kind_id(m.response_kind)},
                             {"label_negative", m.label_negative},
                             {"label_positive", m.label_positive}};
        j["payload"] = gradient_payload(m);
    } else if (std::holds_alternative<LikBoostModel>(model)) {
        const LikBoostModel& m = std::get<LikBoostModel>(model);
        j["engine"] = m.engine == LikBoostModel::Engine::Glm ? "likelihood-glm" : "likelihood-cox";
        j["names"] = m.names;
        j["scaling"] = scaling_to_json(m.scaling);
        j["response"] = json{{"kind", kind_id(m.response_kind)},
                             {"label_negative", m.label_negative},
                             {"label_positive", m.label_positive}};
        j["payload"] = likelihood_payload(m);
    } else {
        const AdaBoostModel& m = std::get<AdaBoostModel>(model);
        j["engine"] = "adaboost";
        j["names"] = m.names;
        j["scaling"] = scaling_to_json(m.scaling);
        j["response"] = json{{"kind", "binary"},
                             {"label_negative", m.label_negative},
                             {"label_positive", m.label_positive}};
        j["payload"] = adaboost_payload(m);
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file '" + path + "'");
    out << j.dump(1) << "\n";
}

AnyModel load_model(const std::string& path, ModelMeta* meta) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("model file '" + path + "' is not valid JSON: " + e.what());
    }
    if (j.at("format_version").get<int>() != kFormatVersion)
        throw DataError("unsupported model format version");
    if (meta) {
        meta->seed = j.value("seed", 0ULL);
        meta->rng = j.value("rng", "");
        meta->invocation = j.value("invocation", "");
    }

    const std::string engine = j.at("engine").get<std::string>();
    const auto names = j.at("names").get<std::vector<std::string>>();
    const Scaling scaling = scaling_from_json(j.at("scaling"));
    const json& resp = j.at("response");
    const ResponseKind kind = kind_from_id(resp.at("kind").get<std::string>());
    const std::string neg = resp.at("label_negative").get<std::string>();
    const std::string pos = resp.at("label_positive").get<std::string>();

    if (engine == "gradient") {
        BoostModel m = gradient_from_json(j.at("payload"));
        m.names = names;
        m.scaling = scaling;
        m.response_kind = kind;
        m.label_negative = neg;
        m.label_positive = pos;
        return m;
    }
    if (engine == "likelihood-glm" || engine == "likelihood-cox") {
        LikBoostModel m = likelihood_from_json(j.at("payload"));
        m.names = names;
        m.scaling = scaling;
        m.response_kind = kind;
        m.label_negative = neg;
        m.label_positive = pos;
        return m;
    }
    if (engine == "adaboost") {
        AdaBoostModel m = adaboost_from_json(j.at("payload"));
        m.names = names;
        m.scaling = scaling;
        m.label_negative = neg;
        m.label_positive = pos;
        return m;
    }
    throw DataError("model file: unknown engine '" + engine + "'");
}

}  // namespace boostkit
