#pragma once

#include "fluctuate/dist.hpp"
#include "fluctuate/model.hpp"

#include <vector>

namespace fluctuate::lpsm {

// Lambda_V(z) = -(theta/gamma) 2F1(1,gamma;1+gamma;xi(z)); Lambda_V(1) = 0 by
// normalization. The equivalent y-form -(theta/gamma)(1-y) 2F1(1,1;1+gamma;y)
// is evaluated as an internal cross-check where it is numerically safe.
double log_gf_V(const LpsmParams& p, double z);

// Same function evaluated directly at xi = (q-z)/(1-z); used where 1-z needs
// to be formed to full precision (rescaled limit checks).
double log_gf_V_xi(const LpsmParams& p, double xi);

// q_0 = -(theta/gamma) 2F1(1,gamma;1+gamma;q);
// q_k = theta (k-1)!/(gamma+1)_k 2F1(k,gamma;1+gamma+k;q).
CoefficientSeries coefficients_lpsm(const LpsmParams& p, int nmax);

Pmf pmf_V(const LpsmParams& p, int nmax);

// Mean/variance of V; infinite moments are explicit +infinity values.
struct MomentsV {
    double mean;
    double variance;
};
MomentsV moments_V(const LpsmParams& p);

struct Resistance {
    double p0;         // P(V = 0)
    double p_positive; // P(V > 0)
};
Resistance resistance_p0(const LpsmParams& p);

double ratio_p1_p0(const LpsmParams& p);

// Mode boundary theta*(gamma, q) where p_1 = p_0, and its large-gamma line.
struct BoundaryTheta {
    double exact;  // (1+gamma) / 2F1(1,gamma;2+gamma;q)
    double approx; // 1 + q + (1-q) gamma
};
BoundaryTheta boundary_theta(double gamma, double q);

// theta solving P(V=0) = p0_target, plus the large-gamma approximation.
struct ContourTheta {
    double exact;
    double approx;
};
ContourTheta p0_contour_theta(double gamma, double q, double p0_target);

struct ModeReport {
    long long mode = 0;
    double p_at_mode = 0.0;
    double p0 = 0.0;
    double ratio_p1_p0 = 0.0;
    bool certified = false;           // remaining mass provably below the max
    bool multimodal = false;          // more than one strict local maximum seen
    std::vector<long long> local_maxima;
};
ModeReport mode_V(const LpsmParams& p, int nmax_cap = 100000);

struct CloneSizeGf {
    double value;             // E[phi_X(z)] = 1 - (1-q) 2F1(1,gamma;1+gamma;xi)
    double poisson_intensity; // theta / ((1-q) gamma)
};
CloneSizeGf clone_size_gf(const LpsmParams& p, double z);

// Clone-size pmf f_0..f_nmax by the quadrature coefficient route.
std::vector<double> clone_size_pmf(const LpsmParams& p, int nmax);

} // namespace fluctuate::lpsm
