#pragma once

#include "fluctuate/model.hpp"

#include <string>
#include <variant>
#include <vector>

namespace fluctuate {

enum class Regime { ExactGeneral, ExactNeutral, Lpsm };

std::string regime_name(Regime r);

using SourceParams = std::variant<ModelParams, LpsmParams>;

// Taylor coefficients q_0..q_nmax of a log-generating function.
// q_0 <= 0 (log of a probability), q_k >= 0 for k >= 1 up to numerical slack.
struct CoefficientSeries {
    Regime regime = Regime::ExactGeneral;
    std::vector<double> q;
    SourceParams params;
    double worst_digit_loss = 0.0; // log10 of worst max-term/result ratio seen in alternating sums
};

// Truncated probability table p_0..p_nmax.
struct Pmf {
    Regime regime = Regime::ExactGeneral;
    std::vector<double> p;
    double truncation_mass = 0.0; // 1 - sum(p)
    SourceParams params;
    bool underflow_flushed = false; // some p_n below 1e-300 were flushed to zero
    std::string route;              // which computation path produced the table
};

} // namespace fluctuate
