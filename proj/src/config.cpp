#include "boostkit/config.hpp"

#include "boostkit/common.hpp"

namespace boostkit {

EngineKind engine_from_id(const std::string& id) {
    if (id == "gradient") return EngineKind::Gradient;
    if (id == "likelihood-glm") return EngineKind::LikelihoodGlm;
    if (id == "likelihood-cox") return EngineKind::LikelihoodCox;
    if (id == "adaboost") return EngineKind::AdaBoost;
    throw ArgError("unknown engine '" + id +
                   "' (expected gradient, likelihood-glm, likelihood-cox or adaboost)");
}

std::string engine_id(EngineKind e) {
    switch (e) {
        case EngineKind::Gradient: return "gradient";
        case EngineKind::LikelihoodGlm: return "likelihood-glm";
        case EngineKind::LikelihoodCox: return "likelihood-cox";
        case EngineKind::AdaBoost: return "adaboost";
    }
    return "?";
}

namespace {

PenaltySpec resolve_penalty(const FitConfig& cfg, const Dataset& d) {
    switch (cfg.penalty_choice) {
        case PenaltyChoice::ExplicitLambda: return PenaltySpec::lambda(cfg.lambda);
        case PenaltyChoice::NuFixed: return PenaltySpec::lambda(penalty_from_stepsize(cfg.nu, d));
        case PenaltyChoice::NuExact: return PenaltySpec::step_size(cfg.nu);
    }
    return PenaltySpec::lambda(0.0);
}

}  // namespace

AnyModel fit_with_config(const Dataset& d_in, const FitConfig& config, int m_stop_override) {
    Dataset scaled;
    Scaling scaling;
    const Dataset* d = &d_in;
    if (config.standardize) {
        auto [ds, sc] = standardize(d_in);
        scaled = std::move(ds);
        scaling = std::move(sc);
        d = &scaled;
    }
    const int m_stop = m_stop_override >= 0 ? m_stop_override : config.m_stop;

    switch (config.engine) {
        case EngineKind::Gradient: {
            LossFamily fam(config.family, config.huber_delta);
            GradBoostOptions opts;
            opts.n_threads = config.n_threads;
            BoostModel model = fit_gradboost(*d, fam, config.learners, m_stop,
                                             config.step_length, opts);
            model.scaling = scaling;
            return model;
        }
        case EngineKind::LikelihoodGlm: {
            LikBoostOptions opts;
            opts.track_hat = config.track_hat;
            opts.n_threads = config.n_threads;
            LikBoostModel model = fit_glm(*d, config.glm_family, resolve_penalty(config, *d),
                                          m_stop, opts);
            model.scaling = scaling;
            return model;
        }
        case EngineKind::LikelihoodCox: {
            LikBoostOptions opts;
            opts.track_hat = false;
            opts.n_threads = config.n_threads;
            LikBoostModel model = fit_cox(*d, resolve_penalty(config, *d), m_stop,
                                          config.unpenalized, opts);
            model.scaling = scaling;
            return model;
        }
        case EngineKind::AdaBoost: {
            AdaBoostOptions opts;
            opts.n_threads = config.n_threads;
            AdaBoostModel model = fit_adaboost(*d, m_stop, opts);
            model.scaling = scaling;
            return model;
        }
    }
    throw ArgError("unhandled engine");
}

}  // namespace boostkit
