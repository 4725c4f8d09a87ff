#pragma once

#include "fluctuate/model.hpp"

#include <functional>
#include <span>
#include <vector>

namespace fluctuate::limits {

enum class Family { LargeTheta, LargeNFixedMu };
enum class GammaRegime { Below1, EqualOne, Between1And2, EqualTwo, Above2 };

GammaRegime classify_gamma(double gamma, double tol = 1e-12);

struct StableParams {
    double alpha;
    double sigma;
    double beta;
    double mu;
};
StableParams stable_params(double gamma);

struct LimitLaw {
    Family family;
    GammaRegime regime;
    double gamma;
    double q;
    double scale_a;
    double shift_b;
    double stable_alpha;
    double stable_sigma;
    double stable_beta;
    double stable_mu;
    double mean;     // +inf allowed
    double variance; // +inf allowed
    std::function<double(double)> exponent; // log-Laplace exponent in s
};

// theta -> infinity limit Z of (V/a - b). The s^gamma rows carry the sign that
// the exact generating function converges to: -pi/sin(pi gamma) s^gamma.
LimitLaw large_theta_law(double gamma, double q, double theta);

// N -> infinity at fixed mu: limit W of (B/a - b), all table columns.
LimitLaw large_N_law(const ModelParams& p);

struct ConvergenceReport {
    std::vector<double> thetas;
    std::vector<double> v_distance; // sup_s |rescaled Lambda_V - Lambda_Z| / sup_s |Lambda_Z|
    std::vector<double> w_distance; // same for the mu -> 0 W pathway at mu = 1/theta
};
ConvergenceReport verify_limit_convergence(const LpsmParams& p,
                                           std::span<const double> theta_sequence,
                                           std::span<const double> s_grid);

} // namespace fluctuate::limits
