#include "fluctuate/lpsm.hpp"

#include "fluctuate/errors.hpp"
#include "fluctuate/exact.hpp"
#include "fluctuate/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fluctuate::lpsm {

namespace {

double ln_pochhammer_ratio(double k, double gamma) {
    using specfun::ln_gamma;
    return ln_gamma(k) + ln_gamma(gamma + 1.0) - ln_gamma(gamma + 1.0 + k);
}

} // namespace

double log_gf_V_xi(const LpsmParams& p, double xi) {
    validate(p);
    if (p.theta == 0.0) return 0.0;
    return -(p.theta / p.gamma) * specfun::hyp2f1(1.0, p.gamma, 1.0 + p.gamma, xi);
}

double log_gf_V(const LpsmParams& p, double z) {
    validate(p);
    if (!(z >= 0.0 && z <= 1.0)) throw validation_error("log_gf_V: z must be in [0,1]");
    if (z == 1.0 || p.theta == 0.0) return 0.0;
    const XiY v = xi_of_z(z, p.q);
    const double primary = log_gf_V_xi(p, v.xi);
    // y-form cross check: the Pfaff map with exponent -a turns the xi-form into
    // -(theta/gamma)(1-y) 2F1(1,1;1+gamma;y). Skipped where y sits in the
    // near-degenerate connection corner.
    const bool near_int_gamma = std::abs(p.gamma - std::round(p.gamma)) < 1e-6;
    if (v.y >= 0.0 && (v.y <= 0.99 || !near_int_gamma) && v.y < 0.995) {
        const double alt = -(p.theta / p.gamma) * (1.0 - v.y) * specfun::hyp2f1(1.0, 1.0, 1.0 + p.gamma, v.y);
        if (std::abs(alt - primary) > 1e-10 * std::max(1.0, std::abs(primary))) {
            throw numeric_error("log_gf_V: xi-form and y-form disagree ("
                                + std::to_string(primary) + " vs " + std::to_string(alt) + ")");
        }
    }
    return primary;
}

CoefficientSeries coefficients_lpsm(const LpsmParams& p, int nmax) {
    validate(p);
    if (nmax < 0) throw validation_error("coefficients_lpsm: nmax must be nonnegative");
    CoefficientSeries cs;
    cs.regime = Regime::Lpsm;
    cs.params = p;
    cs.q.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
    if (p.theta == 0.0) return cs;
    cs.q[0] = -(p.theta / p.gamma) * specfun::hyp2f1(1.0, p.gamma, 1.0 + p.gamma, p.q);
    for (int k = 1; k <= nmax; ++k) {
        const double f = (p.q == 0.0) ? 1.0
                         : specfun::hyp2f1(static_cast<double>(k), p.gamma, 1.0 + p.gamma + k, p.q);
        cs.q[static_cast<std::size_t>(k)] = p.theta * std::exp(ln_pochhammer_ratio(k, p.gamma)) * f;
    }
    return cs;
}

Pmf pmf_V(const LpsmParams& p, int nmax) {
    Pmf pmf = exact::pmf_from_coefficients(coefficients_lpsm(p, nmax), nmax);
    pmf.route = "recursion-lpsm";
    return pmf;
}

MomentsV moments_V(const LpsmParams& p) {
    validate(p);
    const double inf = std::numeric_limits<double>::infinity();
    MomentsV m{inf, inf};
    if (p.gamma > 1.0) m.mean = p.theta / ((1.0 - p.q) * (p.gamma - 1.0));
    if (p.gamma > 2.0) {
        m.variance = p.theta / ((1.0 - p.q) * (1.0 - p.q))
                     * (p.q * (2.0 - p.gamma) + p.gamma) / ((p.gamma - 2.0) * (p.gamma - 1.0));
    }
    if (p.theta == 0.0) {
        m.mean = 0.0;
        m.variance = 0.0;
    }
    return m;
}

Resistance resistance_p0(const LpsmParams& p) {
    validate(p);
    const double p0 = (p.theta == 0.0)
        ? 1.0
        : std::exp(-(p.theta / p.gamma) * specfun::hyp2f1(1.0, p.gamma, 1.0 + p.gamma, p.q));
    return {p0, 1.0 - p0};
}

double ratio_p1_p0(const LpsmParams& p) {
    validate(p);
    if (p.theta == 0.0) return 0.0;
    return p.theta / (p.gamma + 1.0) * specfun::hyp2f1(1.0, p.gamma, 2.0 + p.gamma, p.q);
}

BoundaryTheta boundary_theta(double gamma, double q) {
    if (!(gamma > 0.0)) throw validation_error("boundary_theta: gamma must be positive");
    if (!(q >= 0.0 && q < 1.0)) throw validation_error("boundary_theta: q must be in [0,1)");
    BoundaryTheta b{};
    b.exact = (1.0 + gamma) / specfun::hyp2f1(1.0, gamma, 2.0 + gamma, q);
    b.approx = 1.0 + q + (1.0 - q) * gamma;
    return b;
}

ContourTheta p0_contour_theta(double gamma, double q, double p0_target) {
    if (!(gamma > 0.0)) throw validation_error("p0_contour_theta: gamma must be positive");
    if (!(q >= 0.0 && q < 1.0)) throw validation_error("p0_contour_theta: q must be in [0,1)");
    if (!(p0_target > 0.0 && p0_target < 1.0)) {
        throw validation_error("p0_contour_theta: p0_target must be in (0,1)");
    }
    ContourTheta c{};
    const double lp = std::log(p0_target);
    c.exact = -gamma * lp / specfun::hyp2f1(1.0, gamma, 1.0 + gamma, q);
    c.approx = -(gamma * (1.0 - q) + q) * lp;
    return c;
}

ModeReport mode_V(const LpsmParams& p, int nmax_cap) {
    validate(p);
    if (nmax_cap < 1) throw validation_error("mode_V: nmax_cap must be positive");
    ModeReport rep{};
    rep.ratio_p1_p0 = ratio_p1_p0(p);
    rep.p0 = resistance_p0(p).p0;
    if (p.theta == 0.0) {
        rep.mode = 0;
        rep.p_at_mode = 1.0;
        rep.certified = true;
        return rep;
    }

    int nmax = 128;
    while (true) {
        nmax = std::min(nmax, nmax_cap);
        const Pmf pmf = pmf_V(p, nmax);
        double best = pmf.p[0];
        long long best_n = 0;
        double cum = pmf.p[0];
        long long certified_at = -1;
        for (int n = 1; n <= nmax; ++n) {
            const double pn = pmf.p[static_cast<std::size_t>(n)];
            if (pn > best) {
                best = pn;
                best_n = n;
            }
            cum += pn;
            if (1.0 - cum < best) {
                certified_at = n;
                break;
            }
        }
        if (certified_at >= 0 || nmax == nmax_cap) {
            rep.mode = best_n;
            rep.p_at_mode = best;
            rep.certified = certified_at >= 0;
            const int scan_to = (certified_at >= 0) ? static_cast<int>(certified_at) : nmax;
            for (int n = 1; n < scan_to; ++n) {
                const double prev = pmf.p[static_cast<std::size_t>(n - 1)];
                const double cur = pmf.p[static_cast<std::size_t>(n)];
                const double nxt = pmf.p[static_cast<std::size_t>(n + 1)];
                if (cur > prev && cur > nxt) rep.local_maxima.push_back(n);
            }
            if (scan_to >= 1 && pmf.p[0] > pmf.p[1]) rep.local_maxima.insert(rep.local_maxima.begin(), 0);
            rep.multimodal = rep.local_maxima.size() > 1;
            return rep;
        }
        nmax *= 2;
    }
}

CloneSizeGf clone_size_gf(const LpsmParams& p, double z) {
    validate(p);
    if (!(z >= 0.0 && z <= 1.0)) throw validation_error("clone_size_gf: z must be in [0,1]");
    CloneSizeGf out{};
    out.poisson_intensity = p.theta / ((1.0 - p.q) * p.gamma);
    if (z == 1.0) {
        // Proper distribution: the value is pinned by normalization, the z->1
        // behaviour of the hypergeometric term is classified, never summed.
        out.value = 1.0;
        return out;
    }
    const double xi = xi_of_z(z, p.q).xi;
    out.value = 1.0 - (1.0 - p.q) * specfun::hyp2f1(1.0, p.gamma, 1.0 + p.gamma, xi);
    return out;
}

std::vector<double> clone_size_pmf(const LpsmParams& p, int nmax) {
    validate(p);
    if (nmax < 0) throw validation_error("clone_size_pmf: nmax must be nonnegative");
    // f_n = q_hat_n * (1-q) gamma / theta for n >= 1; f_0 from the gf at 0.
    LpsmParams unit = p;
    if (p.theta == 0.0) unit.theta = 1.0;
    const CoefficientSeries cs = exact::coefficients_quadrature(unit, nmax);
    std::vector<double> f(static_cast<std::size_t>(nmax) + 1, 0.0);
    f[0] = clone_size_gf(p, 0.0).value;
    const double scale = (1.0 - p.q) * p.gamma / unit.theta;
    for (int n = 1; n <= nmax; ++n) {
        f[static_cast<std::size_t>(n)] = scale * cs.q[static_cast<std::size_t>(n)];
    }
    return f;
}

} // namespace fluctuate::lpsm
