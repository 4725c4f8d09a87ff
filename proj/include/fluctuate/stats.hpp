#pragma once

#include "fluctuate/dist.hpp"
#include "fluctuate/sim.hpp"

#include <cstdint>
#include <vector>

namespace fluctuate::stats {

// Regularized incomplete gamma functions P(a,x), Q(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Total variation distance between an empirical ensemble and a reference pmf;
// the mass beyond both tables is compared as a single lump.
double tv_distance(const sim::EnsembleSummary& ensemble, const Pmf& reference);

struct Chi2Result {
    double statistic;
    int dof;
    double p_value;
};

// Pearson goodness of fit with bins merged so every expected count reaches
// min_expected; the remaining reference mass forms the final bin.
Chi2Result chi_square_gof(const sim::EnsembleSummary& ensemble, const Pmf& reference,
                          double min_expected = 5.0);

} // namespace fluctuate::stats
