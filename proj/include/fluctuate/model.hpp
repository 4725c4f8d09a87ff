#pragma once

#include <string>

namespace fluctuate {

// Raw-rate parameter set. Wild type grows deterministically as N0*exp(delta t);
// each clone is a supercritical linear birth-death process with rates alpha, beta.
struct ModelParams {
    double alpha = 1.0; // mutant birth rate, > 0
    double beta = 0.0;  // mutant death rate, >= 0
    double nu = 0.0;    // mutation rate per wild-type cell, >= 0
    double delta = 1.0; // wild-type growth rate, > 0
    double N = 1.0;     // target wild-type population, real >= 1
    double N0 = 1.0;    // initial wild-type population, real >= 1
};

struct DerivedQuantities {
    double lambda; // alpha - beta
    double gamma;  // delta / lambda
    double mu;     // nu / alpha
    double q;      // beta / alpha
    double theta;  // N * mu
    double phi;    // 1 - 1/N
    double tau;    // log(N) / delta
    double m;      // nu (N - N0) / delta, mean clone count
};

// Reduced three-parameter family of the large-population small-mutation limit.
struct LpsmParams {
    double gamma = 1.0; // relative growth ratio, > 0
    double theta = 1.0; // scaled mutation intensity, >= 0
    double q = 0.0;     // clone extinction probability, in [0,1)
};

// Throws validation_error listing every violated constraint.
void validate(const ModelParams& p);
void validate(const LpsmParams& p);

DerivedQuantities derive(const ModelParams& p);

struct XiY {
    double xi; // (q - z) / (1 - z)
    double y;  // (z - q) / (1 - q) = xi / (xi - 1)
};
XiY xi_of_z(double z, double q);

} // namespace fluctuate
