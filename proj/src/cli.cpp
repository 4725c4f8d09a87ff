#include "fluctuate/cli.hpp"

#include "fluctuate/errors.hpp"
#include "fluctuate/exact.hpp"
#include "fluctuate/io.hpp"
#include "fluctuate/limits.hpp"
#include "fluctuate/lpsm.hpp"
#include "fluctuate/model.hpp"
#include "fluctuate/sim.hpp"
#include "fluctuate/specfun.hpp"
#include "fluctuate/stats.hpp"
#include "fluctuate/tail.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

namespace fluctuate::cli {

namespace {

using io::json;

struct ParamFlags {
    std::optional<double> alpha, beta, nu, delta, big_n, n0;
    std::optional<double> gamma, theta, q;
    std::string json_file;

    void attach(CLI::App* cmd, bool raw, bool reduced) {
        if (raw) {
            cmd->add_option("--alpha", alpha, "mutant birth rate");
            cmd->add_option("--beta", beta, "mutant death rate");
            cmd->add_option("--nu", nu, "mutation rate per wild-type cell");
            cmd->add_option("--delta", delta, "wild-type growth rate");
            cmd->add_option("--N", big_n, "target wild-type population");
            cmd->add_option("--N0", n0, "initial wild-type population (default 1)");
        }
        if (reduced) {
            cmd->add_option("--gamma", gamma, "relative growth ratio delta/lambda");
            cmd->add_option("--theta", theta, "scaled mutation intensity N*mu");
            cmd->add_option("--q", q, "clone extinction probability beta/alpha");
        }
        cmd->add_option("--params-json", json_file, "JSON file with a parameter object");
    }

    bool any_raw() const {
        return alpha || beta || nu || delta || big_n || n0;
    }
    bool any_reduced() const {
        return gamma || theta || q;
    }

    ModelParams model() const {
        check_not_mixed();
        if (!json_file.empty()) {
            ModelParams p = io::model_from_json(load_json());
            validate(p);
            return p;
        }
        if (!any_raw()) {
            throw validation_error("raw-rate parameters required: --alpha --beta --nu --delta --N [--N0]");
        }
        ModelParams p;
        if (alpha) p.alpha = *alpha;
        if (beta) p.beta = *beta;
        if (nu) p.nu = *nu;
        if (delta) p.delta = *delta;
        if (big_n) p.N = *big_n;
        if (n0) p.N0 = *n0;
        validate(p);
        return p;
    }

    LpsmParams lpsm() const {
        check_not_mixed();
        if (!json_file.empty()) {
            LpsmParams p = io::lpsm_from_json(load_json());
            validate(p);
            return p;
        }
        if (!any_reduced()) {
            throw validation_error("reduced parameters required: --gamma --theta --q");
        }
        LpsmParams p;
        if (gamma) p.gamma = *gamma;
        if (theta) p.theta = *theta;
        if (q) p.q = *q;
        validate(p);
        return p;
    }

private:
    void check_not_mixed() const {
        int groups = 0;
        if (any_raw()) ++groups;
        if (any_reduced()) ++groups;
        if (!json_file.empty()) ++groups;
        if (groups > 1) {
            throw validation_error("supply either raw-rate parameters, reduced LPSM parameters, "
                                   "or --params-json, never a mixed set");
        }
    }

    json load_json() const {
        std::ifstream in(json_file);
        if (!in) throw validation_error("cannot open parameter file " + json_file);
        json j;
        in >> j;
        return j;
    }
};

struct OutputFlags {
    std::string format = "json";
    std::string out_path;
    int digits = 17;

    void attach(CLI::App* cmd, bool with_format = true) {
        if (with_format) cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", out_path, "output file (default: stdout)");
        cmd->add_option("--digits", digits, "significant digits for CSV output")->check(CLI::Range(1, 17));
    }

    void write(std::ostream& fallback, const std::string& payload) const {
        if (out_path.empty() || out_path == "-") {
            fallback << payload;
            if (!payload.empty() && payload.back() != '\n') fallback << '\n';
            return;
        }
        std::ofstream f(out_path);
        if (!f) throw validation_error("cannot open output file " + out_path);
        f << payload;
        if (!payload.empty() && payload.back() != '\n') f << '\n';
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json moments_json(double mean, double variance) {
    json j;
    j["mean"] = std::isinf(mean) ? json("inf") : json(mean);
    j["variance"] = std::isinf(variance) ? json("inf") : json(variance);
    return j;
}

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> grid;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) grid.push_back(std::stod(item));
    }
    if (grid.empty()) throw validation_error("empty grid specification");
    return grid;
}

bool close_abs(double a, double b, double tol) {
    return std::abs(a - b) <= tol;
}

int run_selftest(std::ostream& out) {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        out << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
        if (!ok) ++failures;
    };

    check("ln_gamma(5) = ln 24", close_abs(specfun::ln_gamma(5.0), std::log(24.0), 1e-13));
    check("2F1(1,1;2;1/2) = 2 ln 2", close_abs(specfun::hyp2f1(1, 1, 2, 0.5), 2.0 * std::log(2.0), 1e-12));
    {
        const double a = 0.7, b = 1.3, c = 2.1, z = -3.0;
        const double lhs = specfun::hyp2f1(a, b, c, z);
        const double rhs = std::pow(1.0 - z, -b) * specfun::hyp2f1(c - a, b, c, z / (z - 1.0));
        check("Pfaff transformation consistency", close_abs(lhs, rhs, 1e-11 * std::abs(lhs)));
    }
    {
        const LpsmParams p{1.0, 1.0, 0.0};
        const Pmf pmf = lpsm::pmf_V(p, 4);
        check("Lea-Coulson p0 = exp(-1)", close_abs(pmf.p[0], std::exp(-1.0), 1e-12));
        check("Lea-Coulson p1 = exp(-1)/2", close_abs(pmf.p[1], 0.5 * std::exp(-1.0), 1e-12));
    }
    {
        const LpsmParams p{1.5, 2.0, 0.3};
        const double direct = lpsm::resistance_p0(p).p0;
        const double via_q0 = std::exp(lpsm::coefficients_lpsm(p, 0).q[0]);
        check("resistance probability = exp(q0)", close_abs(direct, via_q0, 1e-14));
    }
    {
        ModelParams mp;
        mp.alpha = 2.0, mp.beta = 1.0, mp.delta = 1.5, mp.nu = 0.02, mp.N = 100.0;
        const Pmf rec = exact::pmf_from_coefficients(exact::coefficients_exact(mp, 20), 20);
        const Pmf orc = exact::pmf_oracle_cauchy(mp, 20, 96);
        double worst = 0.0;
        for (int n = 0; n <= 20; ++n) worst = std::max(worst, std::abs(rec.p[n] - orc.p[n]));
        check("recursion pmf matches Cauchy oracle (1e-8)", worst < 1e-8);
    }
    {
        ModelParams mp;
        mp.alpha = 1.0, mp.beta = 0.0, mp.delta = 2.0, mp.nu = 0.01, mp.N = 100.0;
        const Pmf pmf = exact::compute_pmf(mp, {});
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t n = 0; n < pmf.p.size(); ++n) {
            m1 += n * pmf.p[n];
            m2 += static_cast<double>(n) * n * pmf.p[n];
        }
        const bool ok_mean = close_abs(m1, exact::mean_B(mp), 1e-4 * exact::mean_B(mp));
        const bool ok_var = close_abs(m2 - m1 * m1, exact::variance_B(mp), 1e-3 * exact::variance_B(mp));
        check("pmf moments close mean/variance formulas", ok_mean && ok_var);
    }
    out << (failures == 0 ? "selftest: all checks passed\n"
                          : "selftest: " + std::to_string(failures) + " check(s) failed\n");
    return failures == 0 ? 0 : 3;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mutant-count distributions for exponentially growing populations"};
    app.name("fluctuate");
    app.require_subcommand(1);

    std::function<void()> action;
    const auto t0 = std::chrono::steady_clock::now();

    // ---- pmf ----
    auto* pmf_cmd = app.add_subcommand("pmf", "probability table of the mutant count");
    auto pmf_params = std::make_shared<ParamFlags>();
    auto pmf_out = std::make_shared<OutputFlags>();
    auto pmf_regime = std::make_shared<std::string>("exact");
    auto pmf_nmax = std::make_shared<int>(-1);
    auto pmf_eps = std::make_shared<double>(1e-8);
    pmf_cmd->add_option("--regime", *pmf_regime, "exact, neutral or lpsm")
        ->check(CLI::IsMember({"exact", "neutral", "lpsm"}));
    pmf_cmd->add_option("--nmax", *pmf_nmax, "largest tabulated n (-1: adaptive for finite N)");
    pmf_cmd->add_option("--eps", *pmf_eps, "adaptive truncation-mass target");
    pmf_params->attach(pmf_cmd, true, true);
    pmf_out->attach(pmf_cmd);
    pmf_cmd->callback([=, &out]() {
        Pmf pmf;
        json param_echo;
        if (*pmf_regime == "lpsm") {
            const LpsmParams p = pmf_params->lpsm();
            param_echo = io::to_json(p);
            const int nmax = *pmf_nmax >= 0 ? *pmf_nmax : 1024;
            pmf = lpsm::pmf_V(p, nmax);
        } else {
            const ModelParams p = pmf_params->model();
            param_echo = io::to_json(p);
            if (*pmf_regime == "neutral" && std::abs(derive(p).gamma - 1.0) >= 1e-8) {
                throw validation_error("pmf --regime neutral requires gamma = 1 within 1e-8");
            }
            exact::PmfOptions opt;
            opt.nmax = *pmf_nmax;
            opt.eps = *pmf_eps;
            pmf = exact::compute_pmf(p, opt);
        }
        param_echo["regime"] = *pmf_regime;
        param_echo["nmax"] = *pmf_nmax;
        param_echo["eps"] = *pmf_eps;
        if (pmf_out->format == "csv") {
            pmf_out->write(out, io::pmf_to_csv(pmf, pmf_out->digits));
        } else {
            pmf_out->write(out, io::envelope("pmf", param_echo, io::to_json(pmf), seconds_since(t0)).dump(2));
        }
    });

    // ---- moments ----
    auto* mom_cmd = app.add_subcommand("moments", "mean and variance of the mutant count");
    auto mom_params = std::make_shared<ParamFlags>();
    auto mom_out = std::make_shared<OutputFlags>();
    auto mom_regime = std::make_shared<std::string>("exact");
    mom_cmd->add_option("--regime", *mom_regime, "exact or lpsm")->check(CLI::IsMember({"exact", "lpsm"}));
    mom_params->attach(mom_cmd, true, true);
    mom_out->attach(mom_cmd, false);
    mom_cmd->callback([=, &out]() {
        json result, echo;
        if (*mom_regime == "lpsm") {
            const LpsmParams p = mom_params->lpsm();
            echo = io::to_json(p);
            const lpsm::MomentsV m = lpsm::moments_V(p);
            result = moments_json(m.mean, m.variance);
        } else {
            const ModelParams p = mom_params->model();
            echo = io::to_json(p);
            result = moments_json(exact::mean_B(p), exact::variance_B(p));
        }
        mom_out->write(out, io::envelope("moments", echo, result, seconds_since(t0)).dump(2));
    });

    // ---- p0 ----
    auto* p0_cmd = app.add_subcommand("p0", "resistance probability P(V>0) and contour theta");
    auto p0_params = std::make_shared<ParamFlags>();
    auto p0_out = std::make_shared<OutputFlags>();
    auto p0_target = std::make_shared<double>(std::nan(""));
    p0_cmd->add_option("--target-p0", *p0_target, "also solve theta for this P(V=0)");
    p0_params->attach(p0_cmd, false, true);
    p0_out->attach(p0_cmd, false);
    p0_cmd->callback([=, &out]() {
        const LpsmParams p = p0_params->lpsm();
        const lpsm::Resistance r = lpsm::resistance_p0(p);
        json result{{"p0", r.p0}, {"p_positive", r.p_positive}};
        if (!std::isnan(*p0_target)) {
            const lpsm::ContourTheta c = lpsm::p0_contour_theta(p.gamma, p.q, *p0_target);
            result["contour_theta"] = json{{"exact", c.exact}, {"approx", c.approx}};
        }
        p0_out->write(out, io::envelope("p0", io::to_json(p), result, seconds_since(t0)).dump(2));
    });

    // ---- mode ----
    auto* mode_cmd = app.add_subcommand("mode", "most probable mutant count of V");
    auto mode_params = std::make_shared<ParamFlags>();
    auto mode_out = std::make_shared<OutputFlags>();
    auto mode_cap = std::make_shared<int>(100000);
    mode_cmd->add_option("--nmax-cap", *mode_cap, "scan cap");
    mode_params->attach(mode_cmd, false, true);
    mode_out->attach(mode_cmd, false);
    mode_cmd->callback([=, &out]() {
        const LpsmParams p = mode_params->lpsm();
        const lpsm::ModeReport rep = lpsm::mode_V(p, *mode_cap);
        mode_out->write(out, io::envelope("mode", io::to_json(p), io::to_json(rep), seconds_since(t0)).dump(2));
    });

    // ---- boundary ----
    auto* bnd_cmd = app.add_subcommand("boundary", "p1 = p0 boundary theta*(gamma, q)");
    auto bnd_gamma = std::make_shared<double>(1.0);
    auto bnd_q = std::make_shared<double>(0.0);
    auto bnd_out = std::make_shared<OutputFlags>();
    bnd_cmd->add_option("--gamma", *bnd_gamma)->required();
    bnd_cmd->add_option("--q", *bnd_q);
    bnd_out->attach(bnd_cmd, false);
    bnd_cmd->callback([=, &out]() {
        const lpsm::BoundaryTheta b = lpsm::boundary_theta(*bnd_gamma, *bnd_q);
        json echo{{"gamma", *bnd_gamma}, {"q", *bnd_q}};
        json result{{"exact", b.exact}, {"approx", b.approx}};
        bnd_out->write(out, io::envelope("boundary", echo, result, seconds_since(t0)).dump(2));
    });

    // ---- tail ----
    auto* tail_cmd = app.add_subcommand("tail", "asymptotic tail expansion of p_n");
    auto tail_params = std::make_shared<ParamFlags>();
    auto tail_out = std::make_shared<OutputFlags>();
    auto tail_regime = std::make_shared<std::string>("general");
    auto tail_compare = std::make_shared<bool>(false);
    auto tail_nlo = std::make_shared<int>(10);
    auto tail_nhi = std::make_shared<int>(1000);
    auto tail_points = std::make_shared<int>(10);
    tail_cmd->add_option("--regime", *tail_regime, "general, gamma1 or finite-n")
        ->check(CLI::IsMember({"general", "gamma1", "finite-n"}));
    tail_cmd->add_flag("--compare-pmf", *tail_compare, "emit side-by-side exact vs asymptotic table");
    tail_cmd->add_option("--n-lo", *tail_nlo);
    tail_cmd->add_option("--n-hi", *tail_nhi);
    tail_cmd->add_option("--points", *tail_points);
    tail_params->attach(tail_cmd, true, true);
    tail_out->attach(tail_cmd);
    tail_cmd->callback([=, &out]() {
        tail::TailExpansion exp;
        json echo;
        std::function<Pmf(int)> pmf_builder;
        if (*tail_regime == "finite-n") {
            const ModelParams p = tail_params->model();
            echo = io::to_json(p);
            exp = tail::tail_finite_N_gamma1(p);
            pmf_builder = [p](int nmax) {
                exact::PmfOptions opt;
                opt.nmax = nmax;
                return exact::compute_pmf(p, opt);
            };
        } else {
            const LpsmParams p = tail_params->lpsm();
            echo = io::to_json(p);
            exp = (*tail_regime == "gamma1") ? tail::tail_lpsm_gamma1(p.theta, p.q)
                                             : tail::tail_lpsm_general(p);
            pmf_builder = [p](int nmax) { return lpsm::pmf_V(p, nmax); };
        }
        json result = io::to_json(exp);
        if (*tail_compare) {
            const Pmf pmf = pmf_builder(*tail_nhi);
            json table = json::array();
            const double ratio = std::pow(static_cast<double>(*tail_nhi) / *tail_nlo,
                                          1.0 / std::max(1, *tail_points - 1));
            double nf = *tail_nlo;
            for (int i = 0; i < *tail_points; ++i, nf *= ratio) {
                const int n = std::min<int>(*tail_nhi, static_cast<int>(std::lround(nf)));
                table.push_back(json{{"n", n},
                                     {"pmf", pmf.p[static_cast<std::size_t>(n)]},
                                     {"tail", tail::evaluate(exp, n)},
                                     {"tail_leading", tail::evaluate_leading(exp, n)}});
            }
            result["comparison"] = std::move(table);
        }
        tail_out->write(out, io::envelope("tail", echo, result, seconds_since(t0)).dump(2));
    });

    // ---- limit ----
    auto* lim_cmd = app.add_subcommand("limit", "limit laws Z (large theta) and W (large N)");
    auto lim_params = std::make_shared<ParamFlags>();
    auto lim_out = std::make_shared<OutputFlags>();
    auto lim_family = std::make_shared<std::string>("large-theta");
    auto lim_sgrid = std::make_shared<std::string>();
    lim_cmd->add_option("--family", *lim_family, "large-theta or large-n")
        ->check(CLI::IsMember({"large-theta", "large-n"}));
    lim_cmd->add_option("--s-grid", *lim_sgrid, "comma-separated s values for an exponent table");
    lim_params->attach(lim_cmd, true, true);
    lim_out->attach(lim_cmd, false);
    lim_cmd->callback([=, &out]() {
        limits::LimitLaw law;
        json echo;
        if (*lim_family == "large-theta") {
            const LpsmParams p = lim_params->lpsm();
            echo = io::to_json(p);
            law = limits::large_theta_law(p.gamma, p.q, p.theta);
        } else {
            const ModelParams p = lim_params->model();
            echo = io::to_json(p);
            law = limits::large_N_law(p);
        }
        json result = io::to_json(law);
        if (!lim_sgrid->empty()) {
            json table = json::array();
            for (const double s : parse_grid(*lim_sgrid)) {
                table.push_back(json{{"s", s}, {"exponent", law.exponent(s)}});
            }
            result["exponent_table"] = std::move(table);
        }
        lim_out->write(out, io::envelope("limit", echo, result, seconds_since(t0)).dump(2));
    });

    // ---- simulate ----
    auto* sim_cmd = app.add_subcommand("simulate", "stochastic sampling of the mutant count");
    auto sim_params = std::make_shared<ParamFlags>();
    auto sim_out = std::make_shared<OutputFlags>();
    auto sim_mode = std::make_shared<std::string>("semi");
    auto sim_traj = std::make_shared<std::uint64_t>(100000);
    auto sim_seed = std::make_shared<std::uint64_t>(0);
    auto sim_cap = std::make_shared<std::uint64_t>(20000000);
    auto sim_hist = std::make_shared<std::uint64_t>(1000000);
    auto sim_threads = std::make_shared<int>(0);
    auto sim_config = std::make_shared<std::string>();
    sim_cmd->add_option("--mode", *sim_mode, "semi or full")->check(CLI::IsMember({"semi", "full"}));
    sim_cmd->add_option("--trajectories", *sim_traj);
    sim_cmd->add_option("--seed", *sim_seed);
    sim_cmd->add_option("--max-events", *sim_cap);
    sim_cmd->add_option("--hist-cap", *sim_hist);
    sim_cmd->add_option("--threads", *sim_threads, "0: FLUCTUATE_THREADS or hardware");
    sim_cmd->add_option("--config-json", *sim_config, "full simulation config as a JSON file");
    sim_params->attach(sim_cmd, true, false);
    sim_out->attach(sim_cmd);
    sim_cmd->callback([=, &out]() {
        sim::SimConfig cfg;
        if (!sim_config->empty()) {
            if (sim_params->any_raw() || !sim_params->json_file.empty()) {
                throw validation_error("--config-json cannot be combined with parameter flags");
            }
            std::ifstream in(*sim_config);
            if (!in) throw validation_error("cannot open config file " + *sim_config);
            json j;
            in >> j;
            cfg.params = io::model_from_json(j.at("params"));
            validate(cfg.params);
            if (j.contains("trajectories")) cfg.trajectories = j.at("trajectories").get<std::uint64_t>();
            if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
            if (j.contains("mode")) {
                const std::string m = j.at("mode").get<std::string>();
                if (m != "semi" && m != "full") throw validation_error("config mode must be semi or full");
                *sim_mode = m;
            }
            if (j.contains("max_events")) cfg.max_events = j.at("max_events").get<std::uint64_t>();
            if (j.contains("histogram_cap")) cfg.histogram_cap = j.at("histogram_cap").get<std::uint64_t>();
        } else {
            cfg.params = sim_params->model();
            cfg.trajectories = *sim_traj;
            cfg.seed = *sim_seed;
            cfg.max_events = *sim_cap;
            cfg.histogram_cap = *sim_hist;
        }
        cfg.mode = (*sim_mode == "semi") ? sim::Mode::SemiDeterministic : sim::Mode::FullyStochastic;
        cfg.threads = *sim_threads;
        const sim::EnsembleSummary summary = sim::run(cfg);
        if (sim_out->format == "csv") {
            sim_out->write(out, io::ensemble_to_csv(summary));
        } else {
            json echo = io::to_json(cfg.params);
            echo["mode"] = *sim_mode;
            echo["trajectories"] = cfg.trajectories;
            echo["seed"] = cfg.seed;
            sim_out->write(out, io::envelope("simulate", echo, io::to_json(summary), seconds_since(t0)).dump(2));
        }
    });

    // ---- compare ----
    auto* cmp_cmd = app.add_subcommand("compare", "simulate and test against the reference pmf");
    auto cmp_params = std::make_shared<ParamFlags>();
    auto cmp_out = std::make_shared<OutputFlags>();
    auto cmp_mode = std::make_shared<std::string>("semi");
    auto cmp_traj = std::make_shared<std::uint64_t>(100000);
    auto cmp_seed = std::make_shared<std::uint64_t>(0);
    auto cmp_refn = std::make_shared<int>(4096);
    auto cmp_threads = std::make_shared<int>(0);
    cmp_cmd->add_option("--mode", *cmp_mode, "semi or full")->check(CLI::IsMember({"semi", "full"}));
    cmp_cmd->add_option("--trajectories", *cmp_traj);
    cmp_cmd->add_option("--seed", *cmp_seed);
    cmp_cmd->add_option("--ref-nmax", *cmp_refn, "reference pmf truncation");
    cmp_cmd->add_option("--threads", *cmp_threads);
    cmp_params->attach(cmp_cmd, true, false);
    cmp_out->attach(cmp_cmd, false);
    cmp_cmd->callback([=, &out]() {
        sim::SimConfig cfg;
        cfg.params = cmp_params->model();
        cfg.trajectories = *cmp_traj;
        cfg.seed = *cmp_seed;
        cfg.threads = *cmp_threads;
        cfg.mode = (*cmp_mode == "semi") ? sim::Mode::SemiDeterministic : sim::Mode::FullyStochastic;
        const sim::EnsembleSummary summary = sim::run(cfg);

        Pmf reference;
        if (cfg.mode == sim::Mode::SemiDeterministic) {
            exact::PmfOptions opt;
            opt.nmax = *cmp_refn;
            reference = exact::compute_pmf(cfg.params, opt);
        } else {
            const DerivedQuantities d = derive(cfg.params);
            reference = lpsm::pmf_V(LpsmParams{d.gamma, d.theta, d.q}, *cmp_refn);
        }
        const double tv = stats::tv_distance(summary, reference);
        const stats::Chi2Result chi = stats::chi_square_gof(summary, reference);
        json echo = io::to_json(cfg.params);
        echo["mode"] = *cmp_mode;
        echo["trajectories"] = *cmp_traj;
        echo["seed"] = *cmp_seed;
        json result{{"tv_distance", tv},
                    {"chi_square", json{{"statistic", chi.statistic}, {"dof", chi.dof}, {"p_value", chi.p_value}}},
                    {"reference_regime", regime_name(reference.regime)},
                    {"summary", io::to_json(summary)}};
        cmp_out->write(out, io::envelope("compare", echo, result, seconds_since(t0)).dump(2));
    });

    // ---- selftest ----
    auto* self_cmd = app.add_subcommand("selftest", "run the built-in identity and oracle checks");
    auto self_rc = std::make_shared<int>(0);
    self_cmd->callback([=, &out]() { *self_rc = run_selftest(out); });

    std::vector<const char*> argv;
    argv.push_back("fluctuate");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        err << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        err << "numeric error: " << e.what() << "\n";
        return 3;
    }
    return *self_rc;
}

} // namespace fluctuate::cli
