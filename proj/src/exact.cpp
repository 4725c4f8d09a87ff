#include "fluctuate/exact.hpp"

#include "fluctuate/detail/quad.hpp"
#include "fluctuate/errors.hpp"
#include "fluctuate/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace fluctuate {

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::ExactGeneral: return "exact-general";
        case Regime::ExactNeutral: return "exact-neutral";
        case Regime::Lpsm: return "lpsm";
    }
    return "unknown";
}

} // namespace fluctuate

namespace fluctuate::exact {

namespace {

constexpr double kGammaBranchTol = 1e-8;
constexpr double kDigitLossGate = 1e6; // six decimal digits

double ln_pochhammer_ratio(double k, double gamma) {
    // (k-1)! / (gamma+1)_k = Gamma(k) Gamma(gamma+1) / Gamma(gamma+1+k)
    using specfun::ln_gamma;
    return ln_gamma(k) + ln_gamma(gamma + 1.0) - ln_gamma(gamma + 1.0 + k);
}

// log((1-xi)/(1-xi/M)) / xi, stable near xi = 0.
double neutral_log_ratio_over_xi(double xi, double M) {
    if (std::abs(xi) < 1e-5) {
        const double a1 = 1.0 - 1.0 / M;
        const double a2 = 1.0 - 1.0 / (M * M);
        const double a3 = 1.0 - 1.0 / (M * M * M);
        return -(a1 + xi * (a2 / 2.0 + xi * a3 / 3.0));
    }
    return (std::log1p(-xi) - std::log1p(-xi / M)) / xi;
}

// Shared coefficient engine for the quadrature route.
// q_hat_0 = -theta * sum_m q^m (1 - u0^(gamma+m)) / (gamma+m)
// q_hat_n = theta (1-q) * int_{u0}^1 u^gamma (1-u)^(n-1) (1-qu)^(-n-1) du
std::vector<double> log_coeffs_quadrature(double gamma, double q, double theta, double u0, int nmax) {
    std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
    if (theta == 0.0) return out;
    {
        double sum = 0.0, qm = 1.0;
        for (int m = 0; m < 100000; ++m) {
            const double term = qm * (1.0 - std::pow(u0, gamma + m)) / (gamma + m);
            sum += term;
            if (std::abs(term) <= 1e-16 * sum && m > 2) break;
            qm *= q;
            if (qm == 0.0) break;
        }
        out[0] = -theta * sum;
    }
    for (int n = 1; n <= nmax; ++n) {
        auto integrand = [gamma, q, n](double u) {
            if (u >= 1.0) return 0.0;
            const double lg = gamma * std::log(u) + (n - 1.0) * std::log1p(-u) - (n + 1.0) * std::log1p(-q * u);
            return std::exp(lg);
        };
        const double val = detail::integrate_graded_toward_lo(integrand, u0, 1.0);
        out[static_cast<std::size_t>(n)] = theta * (1.0 - q) * val;
    }
    return out;
}

struct CircleSpec {
    double gamma;
    double q;
    double theta;
    double u0; // lower integration limit, M^(-1/gamma) or 0 in the LPSM family
};

// Lambda(z) = -theta (1-z) * int_{u0}^1 u^(gamma-1) / ((1-qu) - z(1-u)) du, complex z.
std::complex<double> log_gf_by_quadrature(const CircleSpec& s, std::complex<double> z) {
    if (s.theta == 0.0) return {0.0, 0.0};
    auto integrand = [&s, z](double u) {
        const std::complex<double> den = (1.0 - s.q * u) - z * (1.0 - u);
        return std::pow(u, s.gamma - 1.0) / den;
    };
    const std::complex<double> integral = detail::integrate_graded_toward_lo(integrand, s.u0, 1.0);
    return -s.theta * (1.0 - z) * integral;
}

Pmf circle_oracle(const CircleSpec& spec, int nmax, int grid_size, Regime regime, SourceParams params) {
    if (nmax < 0) throw validation_error("pmf_oracle_cauchy: nmax must be nonnegative");
    if (grid_size < 4 * nmax) {
        throw validation_error("pmf_oracle_cauchy: grid_size must be at least 4*nmax");
    }
    const int m_grid = std::max(grid_size, 64);
    // Balance aliasing (r^M) against the r^-n roundoff amplification.
    const double r = std::clamp(std::exp(-12.5 / std::max(nmax, 10)), 0.30, 0.92);

    std::vector<std::complex<double>> g_values(static_cast<std::size_t>(m_grid));
    for (int j = 0; j < m_grid; ++j) {
        const double phi = 2.0 * M_PI * j / m_grid;
        const std::complex<double> z = std::polar(r, phi);
        g_values[static_cast<std::size_t>(j)] = std::exp(log_gf_by_quadrature(spec, z));
    }

    Pmf pmf;
    pmf.regime = regime;
    pmf.params = std::move(params);
    pmf.route = "cauchy-circle";
    pmf.p.resize(static_cast<std::size_t>(nmax) + 1, 0.0);

    double sum = 0.0;
    for (int n = 0; n <= nmax; ++n) {
        std::complex<double> acc{0.0, 0.0};
        for (int j = 0; j < m_grid; ++j) {
            const double ang = -2.0 * M_PI * n * j / m_grid;
            acc += g_values[static_cast<std::size_t>(j)] * std::polar(1.0, ang);
        }
        acc /= static_cast<double>(m_grid);
        if (std::abs(acc.imag()) > 1e-10) {
            throw numeric_error("pmf_oracle_cauchy: imaginary-part residue "
                                + std::to_string(std::abs(acc.imag())) + " exceeds 1e-10 at n=" + std::to_string(n));
        }
        double pn = acc.real() / std::pow(r, n);
        if (pn < 0.0) {
            if (pn < -1e-8) {
                throw numeric_error("pmf_oracle_cauchy: significantly negative probability at n=" + std::to_string(n));
            }
            pn = 0.0;
        }
        pmf.p[static_cast<std::size_t>(n)] = pn;
        sum += pn;
    }
    pmf.truncation_mass = std::max(0.0, 1.0 - sum);
    return pmf;
}

struct ReducedExact {
    double gamma;
    double q;
    double mu;
    double M;  // N / N0, the fold growth of one founder cell
    double n0; // multiplicity
};

ReducedExact reduce(const ModelParams& p) {
    const DerivedQuantities d = derive(p);
    return {d.gamma, d.q, d.mu, p.N / p.N0, p.N0};
}

} // namespace

double log_gf_B(const ModelParams& p, double z) {
    const ReducedExact r = reduce(p);
    if (!(z >= 0.0 && z <= 1.0)) throw validation_error("log_gf_B: z must be in [0,1]");
    if (z == 1.0 || r.mu == 0.0 || r.M == 1.0) return 0.0;
    const double xi = xi_of_z(z, r.q).xi;
    if (std::abs(r.gamma - 1.0) < kGammaBranchTol) {
        return r.n0 * r.M * r.mu * neutral_log_ratio_over_xi(xi, r.M);
    }
    const double u0 = std::pow(r.M, -1.0 / r.gamma);
    const double f_inner = specfun::hyp2f1(1.0, r.gamma, 1.0 + r.gamma, xi * u0);
    const double f_outer = specfun::hyp2f1(1.0, r.gamma, 1.0 + r.gamma, xi);
    return r.n0 * (r.M * r.mu / r.gamma) * (f_inner / r.M - f_outer);
}

double mean_B(const ModelParams& p) {
    const ReducedExact r = reduce(p);
    if (r.mu == 0.0) return 0.0;
    double per_founder;
    if (std::abs(r.gamma - 1.0) < kGammaBranchTol) {
        per_founder = r.M * r.mu / (1.0 - r.q) * std::log(r.M);
    } else {
        per_founder = r.M * r.mu / (1.0 - r.q) * (std::pow(r.M, 1.0 / r.gamma - 1.0) - 1.0) / (1.0 - r.gamma);
    }
    return r.n0 * per_founder;
}

double variance_B(const ModelParams& p) {
    const ReducedExact r = reduce(p);
    if (r.mu == 0.0) return 0.0;
    const double pre = r.M * r.mu / ((1.0 - r.q) * (1.0 - r.q));
    double bracket;
    if (std::abs(r.gamma - 1.0) < kGammaBranchTol) {
        bracket = 2.0 * (r.M - 1.0) - (1.0 + r.q) * std::log(r.M);
    } else if (std::abs(r.gamma - 2.0) < kGammaBranchTol) {
        bracket = (1.0 + r.q) * (std::pow(r.M, -0.5) - 1.0) + std::log(r.M);
    } else {
        bracket = 2.0 / (2.0 - r.gamma) * std::pow(r.M, 2.0 / r.gamma - 1.0)
                + (1.0 + r.q) / (r.gamma - 1.0) * std::pow(r.M, 1.0 / r.gamma - 1.0)
                + (r.q * (2.0 - r.gamma) + r.gamma) / ((2.0 - r.gamma) * (1.0 - r.gamma));
    }
    return r.n0 * pre * bracket;
}

CoefficientSeries coefficients_exact(const ModelParams& p, int nmax) {
    if (nmax < 0) throw validation_error("coefficients_exact: nmax must be nonnegative");
    const ReducedExact r = reduce(p);
    CoefficientSeries cs;
    cs.regime = Regime::ExactGeneral;
    cs.params = p;
    cs.q.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
    if (r.mu == 0.0) return cs;

    const double g = r.gamma;
    const double u0 = std::pow(r.M, -1.0 / g);
    const double arg_inner = u0 * r.q;

    cs.q[0] = r.n0 * (r.M * r.mu / g)
              * (specfun::hyp2f1(1.0, g, 1.0 + g, arg_inner) / r.M - specfun::hyp2f1(1.0, g, 1.0 + g, r.q));

    if (nmax == 0) return cs;

    // F_j = 2F1(1, gamma; 1+gamma+j; u0 q), shared across all k.
    std::vector<double> f_inner(static_cast<std::size_t>(nmax) + 1, 1.0);
    for (int j = 1; j <= nmax; ++j) {
        f_inner[static_cast<std::size_t>(j)] = specfun::hyp2f1(1.0, g, 1.0 + g + j, arg_inner);
    }

    const double x = (1.0 - r.q) / (r.q - std::pow(r.M, 1.0 / g)); // in (-1, 0)
    double worst_ratio = 1.0;
    for (int k = 1; k <= nmax; ++k) {
        // first addend: mu * sum_j C(k-1,j-1) x^j F_j / (j+gamma)
        double t = x; // C(k-1, j-1) x^j at j=1
        double sum = 0.0, comp = 0.0, max_term = 0.0;
        int tiny_streak = 0;
        for (int j = 1; j <= k; ++j) {
            const double term = t * f_inner[static_cast<std::size_t>(j)] / (j + g);
            max_term = std::max(max_term, std::abs(term));
            const double y = term - comp;
            const double tt = sum + y;
            comp = (tt - sum) - y;
            sum = tt;
            // Terms past the binomial peak decay geometrically; once they sink
            // below the roundoff floor of the largest term the rest is noise.
            if (std::abs(term) <= 1e-22 * max_term) {
                if (++tiny_streak >= 2) break;
            } else {
                tiny_streak = 0;
            }
            t *= x * static_cast<double>(k - j) / static_cast<double>(j);
        }
        if (k > 1 && sum != 0.0) {
            const double ratio = max_term / std::abs(sum);
            worst_ratio = std::max(worst_ratio, ratio);
            if (ratio > kDigitLossGate) {
                throw numeric_error("coefficients_exact: alternating sum lost more than six decimal digits at k="
                                    + std::to_string(k) + " (ratio " + std::to_string(ratio)
                                    + "); retry with coefficients_quadrature");
            }
        }
        const double second = r.M * r.mu * std::exp(ln_pochhammer_ratio(k, g))
                              * specfun::hyp2f1(static_cast<double>(k), g, 1.0 + g + k, r.q);
        cs.q[static_cast<std::size_t>(k)] = r.n0 * (r.mu * sum + second);
    }
    cs.worst_digit_loss = std::log10(worst_ratio);
    return cs;
}

CoefficientSeries coefficients_neutral(const ModelParams& p, int nmax) {
    if (nmax < 0) throw validation_error("coefficients_neutral: nmax must be nonnegative");
    const ReducedExact r = reduce(p);
    if (std::abs(r.gamma - 1.0) >= kGammaBranchTol) {
        throw validation_error("coefficients_neutral: requires |gamma - 1| < 1e-8");
    }
    CoefficientSeries cs;
    cs.regime = Regime::ExactNeutral;
    cs.params = p;
    cs.q.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
    if (r.mu == 0.0) return cs;

    const double theta_m = r.M * r.mu;
    const double phi_m = 1.0 - 1.0 / r.M;
    const double qv = r.q;

    if (qv < 1e-8) {
        cs.q[0] = r.n0 * (-theta_m * phi_m);
    } else {
        cs.q[0] = r.n0 * (-(theta_m / qv) * std::log1p(phi_m * qv / (1.0 - qv)));
    }

    const double arg = -phi_m * qv / (1.0 - qv);
    const double base = phi_m / (1.0 - qv * (1.0 - phi_m)); // phi / (1 - q/M)
    double powk = 1.0;
    for (int k = 1; k <= nmax; ++k) {
        powk *= base;
        const double f = (qv == 0.0) ? 1.0 : specfun::hyp2f1(1.0, 1.0, 2.0 + k, arg);
        cs.q[static_cast<std::size_t>(k)] = r.n0 * theta_m * powk * (1.0 / k - phi_m * f / (k + 1.0));
    }
    return cs;
}

CoefficientSeries coefficients_quadrature(const ModelParams& p, int nmax) {
    if (nmax < 0) throw validation_error("coefficients_quadrature: nmax must be nonnegative");
    const ReducedExact r = reduce(p);
    CoefficientSeries cs;
    cs.regime = Regime::ExactGeneral;
    cs.params = p;
    const double u0 = std::pow(r.M, -1.0 / r.gamma);
    cs.q = log_coeffs_quadrature(r.gamma, r.q, r.n0 * r.M * r.mu, u0, nmax);
    return cs;
}

CoefficientSeries coefficients_quadrature(const LpsmParams& p, int nmax) {
    if (nmax < 0) throw validation_error("coefficients_quadrature: nmax must be nonnegative");
    validate(p);
    CoefficientSeries cs;
    cs.regime = Regime::Lpsm;
    cs.params = p;
    cs.q = log_coeffs_quadrature(p.gamma, p.q, p.theta, 0.0, nmax);
    return cs;
}

Pmf pmf_from_coefficients(const CoefficientSeries& coeffs, int nmax) {
    if (nmax < 0) throw validation_error("pmf_from_coefficients: nmax must be nonnegative");
    if (coeffs.q.size() < static_cast<std::size_t>(nmax) + 1) {
        throw validation_error("pmf_from_coefficients: coefficients must cover indices 0.." + std::to_string(nmax));
    }
    Pmf pmf;
    pmf.regime = coeffs.regime;
    pmf.params = coeffs.params;
    pmf.route = (coeffs.regime == Regime::ExactNeutral) ? "recursion-neutral" : "recursion";
    pmf.p.assign(static_cast<std::size_t>(nmax) + 1, 0.0);

    pmf.p[0] = std::exp(coeffs.q[0]);
    double sum = pmf.p[0], comp = 0.0;
    for (int n = 1; n <= nmax; ++n) {
        double acc = 0.0, c = 0.0;
        for (int k = 0; k < n; ++k) {
            const double term = (n - k) * coeffs.q[static_cast<std::size_t>(n - k)] * pmf.p[static_cast<std::size_t>(k)];
            const double y = term - c;
            const double t = acc + y;
            c = (t - acc) - y;
            acc = t;
        }
        double pn = acc / n;
        if (pn < 0.0) {
            if (pn < -1e-12) {
                throw numeric_error("pmf_from_coefficients: significantly negative probability "
                                    + std::to_string(pn) + " at n=" + std::to_string(n));
            }
            pn = 0.0;
        }
        if (pn != 0.0 && pn < 1e-300) {
            pn = 0.0;
            pmf.underflow_flushed = true;
        }
        pmf.p[static_cast<std::size_t>(n)] = pn;
        const double y = pn - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    if (sum > 1.0 + 1e-10) {
        throw numeric_error("pmf_from_coefficients: probabilities sum to " + std::to_string(sum));
    }
    pmf.truncation_mass = std::max(0.0, 1.0 - sum);
    return pmf;
}

Pmf pmf_oracle_cauchy(const ModelParams& p, int nmax, int grid_size) {
    const ReducedExact r = reduce(p);
    CircleSpec spec{r.gamma, r.q, r.n0 * r.M * r.mu, std::pow(r.M, -1.0 / r.gamma)};
    const Regime regime = (std::abs(r.gamma - 1.0) < kGammaBranchTol) ? Regime::ExactNeutral : Regime::ExactGeneral;
    return circle_oracle(spec, nmax, grid_size, regime, p);
}

Pmf pmf_oracle_cauchy(const LpsmParams& p, int nmax, int grid_size) {
    validate(p);
    CircleSpec spec{p.gamma, p.q, p.theta, 0.0};
    return circle_oracle(spec, nmax, grid_size, Regime::Lpsm, p);
}

Pmf compute_pmf(const ModelParams& p, const PmfOptions& opt) {
    const ReducedExact r = reduce(p);
    const bool neutral = std::abs(r.gamma - 1.0) < kGammaBranchTol;

    auto build = [&](int nmax) -> Pmf {
        CoefficientSeries cs;
        std::string route;
        if (neutral) {
            cs = coefficients_neutral(p, nmax);
        } else {
            try {
                cs = coefficients_exact(p, nmax);
            } catch (const numeric_error&) {
                cs = coefficients_quadrature(p, nmax);
                route = "recursion-quadrature-fallback";
            }
        }
        Pmf pmf = pmf_from_coefficients(cs, nmax);
        if (!route.empty()) pmf.route = route;
        return pmf;
    };

    if (opt.nmax >= 0) return build(opt.nmax);

    int nmax = 64;
    Pmf pmf = build(nmax);
    while (pmf.truncation_mass >= opt.eps && nmax < opt.nmax_cap) {
        nmax = std::min(opt.nmax_cap, nmax * 2);
        pmf = build(nmax);
    }
    return pmf;
}

} // namespace fluctuate::exact
