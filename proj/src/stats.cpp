#include "fluctuate/stats.hpp"

#include "fluctuate/errors.hpp"
#include "fluctuate/specfun.hpp"

#include <algorithm>
#include <cmath>

namespace fluctuate::stats {

namespace {

double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 10000; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - specfun::ln_gamma(a));
}

double gamma_q_contfrac(double a, double x) {
    // Lentz continued fraction for Q(a,x).
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - specfun::ln_gamma(a));
}

} // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw validation_error("gamma_p: requires a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_contfrac(a, x);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw validation_error("gamma_q: requires a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_contfrac(a, x);
}

double tv_distance(const sim::EnsembleSummary& ensemble, const Pmf& reference) {
    if (ensemble.n_trajectories == 0) throw validation_error("tv_distance: empty ensemble");
    const double total = static_cast<double>(ensemble.n_trajectories);
    const std::size_t upto = std::max(ensemble.counts.size(), reference.p.size());
    double acc = 0.0;
    double emp_tail = static_cast<double>(ensemble.overflow_count) / total;
    double ref_tail = reference.truncation_mass;
    for (std::size_t n = 0; n < upto; ++n) {
        const double emp = n < ensemble.counts.size()
                               ? static_cast<double>(ensemble.counts[n]) / total
                               : 0.0;
        if (n < reference.p.size()) {
            acc += std::abs(emp - reference.p[n]);
        } else {
            emp_tail += emp;
        }
    }
    acc += std::abs(emp_tail - ref_tail);
    return 0.5 * acc;
}

Chi2Result chi_square_gof(const sim::EnsembleSummary& ensemble, const Pmf& reference, double min_expected) {
    if (ensemble.n_trajectories == 0) throw validation_error("chi_square_gof: empty ensemble");
    const double total = static_cast<double>(ensemble.n_trajectories);

    std::vector<double> exp_bins;
    std::vector<double> obs_bins;
    double exp_acc = 0.0, obs_acc = 0.0, exp_used = 0.0;
    for (std::size_t n = 0; n < reference.p.size(); ++n) {
        exp_acc += total * reference.p[n];
        obs_acc += n < ensemble.counts.size() ? static_cast<double>(ensemble.counts[n]) : 0.0;
        if (exp_acc >= min_expected) {
            exp_bins.push_back(exp_acc);
            obs_bins.push_back(obs_acc);
            exp_used += exp_acc;
            exp_acc = 0.0;
            obs_acc = 0.0;
        }
    }
    // Everything past the reference table (plus any unflushed partial bin).
    const double exp_rest = total - exp_used;
    double obs_rest = obs_acc;
    for (std::size_t n = reference.p.size(); n < ensemble.counts.size(); ++n) {
        obs_rest += static_cast<double>(ensemble.counts[n]);
    }
    obs_rest += static_cast<double>(ensemble.overflow_count);
    if (exp_rest >= min_expected && !exp_bins.empty()) {
        exp_bins.push_back(exp_rest);
        obs_bins.push_back(obs_rest);
    } else if (!exp_bins.empty()) {
        exp_bins.back() += exp_rest;
        obs_bins.back() += obs_rest;
    }
    if (exp_bins.size() < 2) throw validation_error("chi_square_gof: fewer than two usable bins");

    double stat = 0.0;
    for (std::size_t i = 0; i < exp_bins.size(); ++i) {
        const double diff = obs_bins[i] - exp_bins[i];
        stat += diff * diff / exp_bins[i];
    }
    Chi2Result r{};
    r.statistic = stat;
    r.dof = static_cast<int>(exp_bins.size()) - 1;
    r.p_value = gamma_q(0.5 * r.dof, 0.5 * stat);
    return r;
}

} // namespace fluctuate::stats
