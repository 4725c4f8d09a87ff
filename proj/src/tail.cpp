#include "fluctuate/tail.hpp"

#include "fluctuate/errors.hpp"
#include "fluctuate/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fluctuate::tail {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008;

// 1/Gamma(x) by reflection, finite at the poles (returns 0 there).
double inv_gamma(double x) {
    if (x > 0.0) return std::exp(-specfun::ln_gamma(x));
    return specfun::sin_pi(x) * std::exp(specfun::ln_gamma(1.0 - x)) / M_PI;
}

void sort_terms(std::vector<Term>& terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
        if (a.power_of_n != b.power_of_n) return a.power_of_n > b.power_of_n;
        return a.log_power > b.log_power;
    });
}

} // namespace

TailExpansion tail_lpsm_general(const LpsmParams& p) {
    validate(p);
    if (std::abs(p.gamma - 1.0) < 1e-6) {
        throw validation_error("tail_lpsm_general: gamma within 1e-6 of 1, use tail_lpsm_gamma1");
    }
    TailExpansion t;
    t.regime = TailRegime::LpsmGeneral;
    const double g = p.gamma;
    const double omq = 1.0 - p.q;

    t.terms.push_back({p.theta * std::exp(specfun::ln_gamma(1.0 + g)) / std::pow(omq, g), -1.0 - g, 0});

    const bool integer_gamma = std::abs(g - std::round(g)) < 1e-6;
    if (integer_gamma) {
        t.truncated_to_leading = true;
        return t;
    }

    // (kappa^2 / 2) (1-q)^{-2 gamma} / Gamma(-2 gamma), kappa = theta pi / sin(pi gamma).
    const double kappa = p.theta * M_PI / specfun::sin_pi(g);
    t.terms.push_back({0.5 * kappa * kappa * inv_gamma(-2.0 * g) / std::pow(omq, 2.0 * g), -1.0 - 2.0 * g, 0});

    t.terms.push_back({-p.theta * std::exp(specfun::ln_gamma(2.0 + g)) / std::pow(omq, 1.0 + g)
                           * (p.theta / (1.0 - g) + g * (1.0 + p.q) / 2.0),
                       -2.0 - g, 0});
    sort_terms(t.terms);
    return t;
}

TailExpansion tail_lpsm_gamma1(double theta, double q) {
    validate(LpsmParams{1.0, theta, q});
    TailExpansion t;
    t.regime = (q == 0.0) ? TailRegime::LpsmGamma1NoDeath : TailRegime::LpsmGamma1;
    const double omq = 1.0 - q;
    const double big_l = -std::log1p(-q); // L(q) = log(1/(1-q))
    t.terms.push_back({theta / omq, -2.0, 0});
    t.terms.push_back({2.0 * theta * theta / (omq * omq), -3.0, 1});
    t.terms.push_back({(theta * theta * (2.0 * kEulerGamma - 3.0 - 2.0 * big_l) - theta * (1.0 + q)) / (omq * omq),
                       -3.0, 0});
    return t;
}

TailExpansion tail_finite_N_gamma1(const ModelParams& p) {
    const DerivedQuantities d = derive(p);
    if (std::abs(d.gamma - 1.0) >= 1e-6 || d.q != 0.0 || !(d.mu < 1.0)) {
        throw validation_error("tail_finite_N_gamma1: unsupported regime, requires gamma = 1, q = 0, mu < 1");
    }
    TailExpansion t;
    t.regime = TailRegime::FiniteNGamma1NoDeath;
    t.cutoff_base = 1.0 - 1.0 / p.N;
    const double mu = d.mu;
    const double theta = d.theta;
    const double inv_gamma_mu = std::exp(-specfun::ln_gamma(mu));
    const double psi_mu_m1 = specfun::digamma(mu - 1.0);
    t.terms.push_back({inv_gamma_mu, mu - 1.0, 0});
    t.terms.push_back({inv_gamma_mu * (1.0 - mu) * (theta - mu), mu - 2.0, 1});
    t.terms.push_back({-inv_gamma_mu * (1.0 - mu) * ((theta - mu) * psi_mu_m1 + mu / 2.0), mu - 2.0, 0});
    return t;
}

double evaluate(const TailExpansion& t, double n) {
    if (!(n > 1.0)) throw validation_error("tail::evaluate: n must exceed 1");
    const double ln_n = std::log(n);
    double acc = 0.0;
    for (const Term& term : t.terms) {
        double v = term.coefficient * std::pow(n, term.power_of_n);
        for (int i = 0; i < term.log_power; ++i) v *= ln_n;
        acc += v;
    }
    if (t.cutoff_base != 1.0) acc *= std::exp(n * std::log(t.cutoff_base));
    return acc;
}

double evaluate_leading(const TailExpansion& t, double n) {
    if (!(n > 1.0)) throw validation_error("tail::evaluate_leading: n must exceed 1");
    if (t.terms.empty()) throw validation_error("tail::evaluate_leading: empty expansion");
    const Term& term = t.terms.front();
    double v = term.coefficient * std::pow(n, term.power_of_n);
    for (int i = 0; i < term.log_power; ++i) v *= std::log(n);
    if (t.cutoff_base != 1.0) v *= std::exp(n * std::log(t.cutoff_base));
    return v;
}

TailFit fit_tail_exponent(const Pmf& pmf, int n_lo, int n_hi) {
    if (!(n_hi > n_lo && n_lo >= 10)) {
        throw validation_error("fit_tail_exponent: requires n_hi > n_lo >= 10");
    }
    if (static_cast<std::size_t>(n_hi) >= pmf.p.size()) {
        throw validation_error("fit_tail_exponent: range exceeds pmf length");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    long long count = 0;
    for (int n = n_lo; n <= n_hi; ++n) {
        const double pn = pmf.p[static_cast<std::size_t>(n)];
        if (!(pn > 0.0)) {
            throw validation_error("fit_tail_exponent: zero probability at n=" + std::to_string(n));
        }
        const double x = std::log(static_cast<double>(n));
        const double y = std::log(pn);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        ++count;
    }
    const double nn = static_cast<double>(count);
    const double denom = nn * sxx - sx * sx;
    TailFit fit{};
    fit.slope = (nn * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / nn;
    const double ss_tot = syy - sy * sy / nn;
    double ss_res = 0.0;
    for (int n = n_lo; n <= n_hi; ++n) {
        const double x = std::log(static_cast<double>(n));
        const double y = std::log(pmf.p[static_cast<std::size_t>(n)]);
        const double r = y - (fit.intercept + fit.slope * x);
        ss_res += r * r;
    }
    fit.r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

} // namespace fluctuate::tail
