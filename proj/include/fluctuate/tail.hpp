#pragma once

#include "fluctuate/dist.hpp"
#include "fluctuate/model.hpp"

#include <vector>

namespace fluctuate::tail {

enum class TailRegime { LpsmGeneral, LpsmGamma1, LpsmGamma1NoDeath, FiniteNGamma1NoDeath };

struct Term {
    double coefficient;
    double power_of_n;
    int log_power;
};

struct TailExpansion {
    TailRegime regime;
    std::vector<Term> terms; // sorted by decreasing asymptotic magnitude
    double cutoff_base = 1.0;
    bool truncated_to_leading = false; // sub-leading dropped at an integer-gamma pole
};

// p_n ~ theta Gamma(1+gamma)/(1-q)^gamma n^{-1-gamma} + sub-leading terms.
// Requires gamma away from 1 (route to tail_lpsm_gamma1) ; integer gamma keeps
// the leading term only.
TailExpansion tail_lpsm_general(const LpsmParams& p);

// gamma = 1 with death: theta/((1-q)n^2) + 2 theta^2/(1-q)^2 log n / n^3 + ...
TailExpansion tail_lpsm_gamma1(double theta, double q);

// Finite-N cut-off expansion, gamma = 1, q = 0, mu < 1:
// p_n ~ (1-1/N)^n / Gamma(mu) { n^{mu-1} + ... }.
TailExpansion tail_finite_N_gamma1(const ModelParams& p);

double evaluate(const TailExpansion& t, double n);
double evaluate_leading(const TailExpansion& t, double n);

struct TailFit {
    double slope;
    double intercept;
    double r2;
};
// Least squares of log p_n against log n on [n_lo, n_hi]; slope estimates -(1+gamma).
TailFit fit_tail_exponent(const Pmf& pmf, int n_lo, int n_hi);

} // namespace fluctuate::tail
