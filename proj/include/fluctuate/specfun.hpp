#pragma once

#include <cstdint>

namespace fluctuate::specfun {

// Natural log of Gamma(x) for x > 0. Relative error <= 1e-14 away from the
// zeros at x = 1, 2 (absolute ~1e-15 there).
double ln_gamma(double x);

// log|Gamma(x)| and the sign of Gamma(x) for any non-pole real x.
struct LnGammaSigned {
    double log_abs;
    int sign; // +1 or -1
};
LnGammaSigned lgamma_signed(double x);

// Psi(x) for x not in {0, -1, -2, ...}; negative arguments via reflection.
double digamma(double x);

// Trigamma Psi_1(x) for x > 0.
double polygamma1(double x);

// Ascending factorial a(a+1)...(a+n-1); (a)_0 = 1.
double pochhammer(double a, long long n);

struct Hyp2F1Request {
    double a;
    double b;
    double c;
    double z;
    double rel_tol = 1e-13;
};

// Gauss 2F1(a,b;c;z) on the real branch z <= 1.
// Direct series for 0 <= z <= 0.5, Pfaff map for z < 0, the 1-z connection
// formulas (including the degenerate integer c-a-b log forms) for
// 0.5 < z < 1, Gauss's theorem at z = 1.
double hyp2f1(const Hyp2F1Request& req);
double hyp2f1(double a, double b, double c, double z, double rel_tol = 1e-13);

// Classification of the z->1 behaviour of 2F1(a,b;c;z).
struct Z1Limit {
    enum class Kind { Finite, LogDivergent, PowerDivergent };
    Kind kind;
    double value = 0.0;       // Finite: 2F1(a,b;c;1)
    double coefficient = 0.0; // divergent cases: multiplier of -log(1-z) resp. (1-z)^{c-a-b}
    double exponent = 0.0;    // PowerDivergent: c-a-b < 0
};
Z1Limit hyp2f1_z1_limit(double a, double b, double c);

// sin(pi x), cos(pi x) with exact integer/half-integer range reduction.
double sin_pi(double x);
double cos_pi(double x);

} // namespace fluctuate::specfun
