#pragma once

#include "fluctuate/dist.hpp"
#include "fluctuate/model.hpp"

namespace fluctuate::exact {

// Log-generating function Lambda_B(z) of the mutant count at wild-type size N,
// evaluated through the hypergeometric closed form. Lambda_B(1) = 0 by
// continuity; Lambda_B <= 0 on [0,1].
double log_gf_B(const ModelParams& p, double z);

double mean_B(const ModelParams& p);
double variance_B(const ModelParams& p);

// Recursion coefficients from the hypergeometric closed forms (general gamma).
// Throws numeric_error when the alternating binomial sum loses more than six
// decimal digits (largest-term / result ratio above 1e6); callers may retry
// with coefficients_quadrature.
CoefficientSeries coefficients_exact(const ModelParams& p, int nmax);

// gamma = 1 specialization (requires |gamma - 1| < 1e-8).
CoefficientSeries coefficients_neutral(const ModelParams& p, int nmax);

// 2F1-free coefficient route: Gauss-Legendre quadrature of the clone-size
// integrals. Serves as the independent oracle and as the fallback when the
// alternating sum is rejected.
CoefficientSeries coefficients_quadrature(const ModelParams& p, int nmax);
CoefficientSeries coefficients_quadrature(const LpsmParams& p, int nmax);

// p_0 = exp(q_0); p_n = (1/n) sum_{k<n} (n-k) q_{n-k} p_k.
Pmf pmf_from_coefficients(const CoefficientSeries& coeffs, int nmax);

// Independent pmf oracle: discrete circle averages of G(r e^{i phi_j}) with
// Lambda evaluated by quadrature of the integral representation (no 2F1).
Pmf pmf_oracle_cauchy(const ModelParams& p, int nmax, int grid_size);
Pmf pmf_oracle_cauchy(const LpsmParams& p, int nmax, int grid_size);

struct PmfOptions {
    int nmax = -1;        // -1: adaptive (stop when truncation_mass < eps)
    double eps = 1e-8;    // adaptive truncation target
    int nmax_cap = 100000;
};

// Policy route: neutral/general recursion coefficients, falling back to the
// quadrature coefficients when the digit-loss gate rejects the alternating sum.
Pmf compute_pmf(const ModelParams& p, const PmfOptions& opt = {});

} // namespace fluctuate::exact
