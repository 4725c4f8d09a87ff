#include "fluctuate/io.hpp"

#include "fluctuate/errors.hpp"

#include <cmath>
#include <cstdio>

namespace fluctuate::io {

namespace {

json moment_value(double v) {
    if (std::isinf(v)) return json("inf");
    return json(v);
}

const char* version_string = "0.1.0";

std::string regime_of(const Pmf& pmf) {
    return regime_name(pmf.regime);
}

} // namespace

std::string format_double(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

json to_json(const ModelParams& p) {
    return json{{"alpha", p.alpha}, {"beta", p.beta}, {"nu", p.nu},
                {"delta", p.delta}, {"N", p.N}, {"N0", p.N0}};
}

json to_json(const LpsmParams& p) {
    return json{{"gamma", p.gamma}, {"theta", p.theta}, {"q", p.q}};
}

ModelParams model_from_json(const json& j) {
    ModelParams p;
    p.alpha = j.at("alpha").get<double>();
    p.beta = j.at("beta").get<double>();
    p.nu = j.at("nu").get<double>();
    p.delta = j.at("delta").get<double>();
    p.N = j.at("N").get<double>();
    p.N0 = j.contains("N0") ? j.at("N0").get<double>() : 1.0;
    return p;
}

LpsmParams lpsm_from_json(const json& j) {
    LpsmParams p;
    p.gamma = j.at("gamma").get<double>();
    p.theta = j.at("theta").get<double>();
    p.q = j.at("q").get<double>();
    return p;
}

bool looks_like_lpsm(const json& j) {
    return j.contains("theta") && j.contains("gamma") && !j.contains("alpha");
}

json to_json(const Pmf& pmf) {
    json params = std::visit([](const auto& p) { return to_json(p); }, pmf.params);
    json j{{"params", std::move(params)},
           {"regime", regime_of(pmf)},
           {"truncation_mass", pmf.truncation_mass},
           {"p", pmf.p}};
    j["route"] = pmf.route;
    j["underflow_flushed"] = pmf.underflow_flushed;
    return j;
}

Pmf pmf_from_json(const json& j) {
    Pmf pmf;
    const std::string regime = j.at("regime").get<std::string>();
    if (regime == "lpsm") {
        pmf.regime = Regime::Lpsm;
        pmf.params = lpsm_from_json(j.at("params"));
    } else {
        pmf.regime = (regime == "exact-neutral") ? Regime::ExactNeutral : Regime::ExactGeneral;
        pmf.params = model_from_json(j.at("params"));
    }
    pmf.truncation_mass = j.at("truncation_mass").get<double>();
    pmf.p = j.at("p").get<std::vector<double>>();
    if (j.contains("route")) pmf.route = j.at("route").get<std::string>();
    if (j.contains("underflow_flushed")) pmf.underflow_flushed = j.at("underflow_flushed").get<bool>();
    return pmf;
}

std::string pmf_to_csv(const Pmf& pmf, int digits) {
    std::string out = "n,p\n";
    for (std::size_t n = 0; n < pmf.p.size(); ++n) {
        out += std::to_string(n);
        out += ',';
        out += format_double(pmf.p[n], digits);
        out += '\n';
    }
    return out;
}

json to_json(const lpsm::ModeReport& r) {
    return json{{"mode", r.mode},
                {"p_at_mode", r.p_at_mode},
                {"p0", r.p0},
                {"ratio_p1_p0", r.ratio_p1_p0},
                {"certified", r.certified}};
}

json to_json(const limits::LimitLaw& law) {
    const char* family = law.family == limits::Family::LargeTheta ? "large-theta" : "large-n";
    std::string regime;
    switch (law.regime) {
        case limits::GammaRegime::Below1: regime = "(0,1)"; break;
        case limits::GammaRegime::EqualOne: regime = "1"; break;
        case limits::GammaRegime::Between1And2: regime = "(1,2)"; break;
        case limits::GammaRegime::EqualTwo: regime = "2"; break;
        case limits::GammaRegime::Above2: regime = "(2,inf)"; break;
    }
    return json{{"family", family},
                {"regime", regime},
                {"a", law.scale_a},
                {"b", law.shift_b},
                {"alpha", law.stable_alpha},
                {"sigma", law.stable_sigma},
                {"beta", law.stable_beta},
                {"mu", law.stable_mu},
                {"mean", moment_value(law.mean)},
                {"variance", moment_value(law.variance)}};
}

json to_json(const tail::TailExpansion& t) {
    json terms = json::array();
    for (const auto& term : t.terms) {
        terms.push_back(json{{"coefficient", term.coefficient},
                             {"power_of_n", term.power_of_n},
                             {"log_power", term.log_power}});
    }
    std::string regime;
    switch (t.regime) {
        case tail::TailRegime::LpsmGeneral: regime = "lpsm-general"; break;
        case tail::TailRegime::LpsmGamma1: regime = "lpsm-gamma1"; break;
        case tail::TailRegime::LpsmGamma1NoDeath: regime = "lpsm-gamma1-nodeath"; break;
        case tail::TailRegime::FiniteNGamma1NoDeath: regime = "finite-n-gamma1-nodeath"; break;
    }
    return json{{"regime", regime},
                {"terms", std::move(terms)},
                {"cutoff_base", t.cutoff_base},
                {"truncated_to_leading", t.truncated_to_leading}};
}

json to_json(const sim::EnsembleSummary& s) {
    json counts = json::array();
    for (std::size_t n = 0; n < s.counts.size(); ++n) {
        if (s.counts[n] != 0) counts.push_back(json::array({n, s.counts[n]}));
    }
    return json{{"counts", std::move(counts)},
                {"overflow_count", s.overflow_count},
                {"n_trajectories", s.n_trajectories},
                {"excluded", s.excluded},
                {"mean", s.mean},
                {"variance", s.variance},
                {"clone_count_mean", s.clone_count_mean}};
}

std::string ensemble_to_csv(const sim::EnsembleSummary& s) {
    std::string out = "n,count\n";
    for (std::size_t n = 0; n < s.counts.size(); ++n) {
        if (s.counts[n] == 0) continue;
        out += std::to_string(n);
        out += ',';
        out += std::to_string(s.counts[n]);
        out += '\n';
    }
    return out;
}

json envelope(const std::string& command, json parameters, json result, double wall_seconds) {
    return json{{"command", command},
                {"parameters", std::move(parameters)},
                {"result", std::move(result)},
                {"version", version_string},
                {"wall_time_s", wall_seconds}};
}

} // namespace fluctuate::io
