#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace fluctuate::detail {

// 24-point Gauss-Legendre rule on [-1,1], nodes found by Newton iteration.
struct GaussLegendre24 {
    std::array<double, 24> x{};
    std::array<double, 24> w{};
    GaussLegendre24() {
        constexpr int n = 24;
        for (int i = 0; i < n; ++i) {
            double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double p0 = 0.0, p1 = 0.0;
            for (int it = 0; it < 100; ++it) {
                p0 = 1.0;
                p1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
                }
                const double dp = n * (t * p0 - p1) / (t * t - 1.0);
                const double dt = p0 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-16) break;
            }
            p0 = 1.0;
            p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
            }
            const double dp = n * (t * p0 - p1) / (t * t - 1.0);
            x[static_cast<std::size_t>(i)] = t;
            w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

inline const GaussLegendre24& gl24() {
    static const GaussLegendre24 rule;
    return rule;
}

template <class F>
auto gl_panel(F&& f, double lo, double hi) -> decltype(f(lo)) {
    const auto& rule = gl24();
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    decltype(f(lo)) acc{};
    for (std::size_t i = 0; i < 24; ++i) {
        acc += rule.w[i] * f(mid + half * rule.x[i]);
    }
    return acc * half;
}

// Composite quadrature on [lo, hi] with panels geometrically graded toward lo,
// for integrands with an (integrable) endpoint feature at lo. Panels are added
// until their contribution is negligible against the running total.
template <class F>
auto integrate_graded_toward_lo(F&& f, double lo, double hi, double rel_tol = 1e-15, int max_levels = 1400) -> decltype(f(lo)) {
    using R = decltype(f(lo));
    const double len = hi - lo;
    R acc{};
    double right = 1.0;
    int quiet = 0;
    for (int j = 0; j < max_levels; ++j) {
        const double left = right * 0.5;
        const R panel = gl_panel(f, lo + len * left, lo + len * right);
        acc += panel;
        if (std::abs(panel) <= rel_tol * (std::abs(acc) + 1e-300)) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
        right = left;
        if (right < 1e-300) break;
    }
    return acc;
}

} // namespace fluctuate::detail
