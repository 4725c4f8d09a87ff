#pragma once

#include "fluctuate/model.hpp"

#include <cstdint>
#include <vector>

namespace fluctuate::sim {

enum class Mode { SemiDeterministic, FullyStochastic };

struct SimConfig {
    ModelParams params;
    std::uint64_t trajectories = 100000;
    std::uint64_t seed = 0;
    Mode mode = Mode::SemiDeterministic;
    std::uint64_t max_events = 20000000;    // per-trajectory event cap (fully stochastic)
    std::uint64_t histogram_cap = 1000000;  // mutant counts above this land in the overflow bin
    int threads = 0;                        // 0: FLUCTUATE_THREADS or hardware concurrency
};

struct EnsembleSummary {
    std::vector<std::uint64_t> counts; // counts[n] = trajectories ending with n mutants
    std::uint64_t overflow_count = 0;
    std::uint64_t n_trajectories = 0;  // included trajectories
    std::uint64_t excluded = 0;        // flagged: event cap exceeded
    double mean = 0.0;
    double variance = 0.0;
    double clone_count_mean = 0.0;     // mutation events per trajectory
};

EnsembleSummary sample_semi_deterministic(const SimConfig& cfg);
EnsembleSummary sample_fully_stochastic(const SimConfig& cfg);
EnsembleSummary run(const SimConfig& cfg);

// Single-clone birth-death law at a given age: extinct with probability p0,
// otherwise geometric with success parameter 1 - eta.
struct CloneLaw {
    double p0;
    double eta;
    double log_eta; // log(eta), stable for eta near 1
};
CloneLaw clone_law_at_age(const ModelParams& p, double age);

// phi_age(z) = 1 - (1-q) / (1 - xi(z) e^{-lambda age}), the closed-form clone pgf.
double clone_gf(const ModelParams& p, double age, double z);

} // namespace fluctuate::sim
