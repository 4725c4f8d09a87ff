#include "fluctuate/sim.hpp"

#include "fluctuate/errors.hpp"
#include "fluctuate/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace fluctuate::sim {

namespace {

struct LocalTally {
    std::vector<std::uint64_t> counts;
    std::uint64_t overflow = 0;
    std::uint64_t included = 0;
    std::uint64_t excluded = 0;
    unsigned long long mutation_events = 0;

    void record(double b, std::uint64_t cap) {
        ++included;
        if (b > static_cast<double>(cap)) {
            ++overflow;
            return;
        }
        const std::size_t n = static_cast<std::size_t>(b);
        if (counts.size() <= n) counts.resize(n + 1, 0);
        ++counts[n];
    }

    void merge(const LocalTally& other) {
        if (counts.size() < other.counts.size()) counts.resize(other.counts.size(), 0);
        for (std::size_t i = 0; i < other.counts.size(); ++i) counts[i] += other.counts[i];
        overflow += other.overflow;
        included += other.included;
        excluded += other.excluded;
        mutation_events += other.mutation_events;
    }
};

std::uint64_t draw_poisson(SplitMix64& rng, double mean) {
    if (mean <= 0.0) return 0;
    std::uint64_t total = 0;
    while (mean > 30.0) {
        total += draw_poisson(rng, 30.0);
        mean -= 30.0;
    }
    const double limit = std::exp(-mean);
    double prod = 1.0;
    std::uint64_t k = 0;
    do {
        prod *= rng.next_double();
        ++k;
    } while (prod > limit);
    return total + (k - 1);
}

// Geometric with success parameter 1 - eta on {1, 2, ...}.
double draw_clone_size(SplitMix64& rng, const CloneLaw& law) {
    if (law.p0 > 0.0 && rng.next_double() < law.p0) return 0.0;
    if (law.eta <= 0.0) return 1.0;
    const double u = rng.next_double();
    return 1.0 + std::floor(std::log(u) / law.log_eta);
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FLUCTUATE_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

template <class PerTrajectory>
EnsembleSummary run_parallel(const SimConfig& cfg, PerTrajectory&& body) {
    validate(cfg.params);
    if (cfg.trajectories < 1) throw validation_error("sim: trajectories must be >= 1");
    if (cfg.max_events == 0) throw validation_error("sim: max_events must be positive");

    const int n_threads = std::min<std::uint64_t>(resolve_threads(cfg.threads), cfg.trajectories);
    std::vector<LocalTally> tallies(static_cast<std::size_t>(n_threads));

    auto worker = [&](int t) {
        LocalTally& tally = tallies[static_cast<std::size_t>(t)];
        for (std::uint64_t idx = static_cast<std::uint64_t>(t); idx < cfg.trajectories;
             idx += static_cast<std::uint64_t>(n_threads)) {
            SplitMix64 rng(cfg.seed, idx);
            body(rng, tally);
        }
    };

    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    LocalTally total;
    for (const auto& t : tallies) total.merge(t);

    EnsembleSummary out;
    out.counts = std::move(total.counts);
    out.overflow_count = total.overflow;
    out.n_trajectories = total.included;
    out.excluded = total.excluded;
    const std::uint64_t in_hist = total.included - total.overflow;
    if (in_hist > 0) {
        long double s1 = 0.0L, s2 = 0.0L;
        for (std::size_t n = 0; n < out.counts.size(); ++n) {
            const long double c = static_cast<long double>(out.counts[n]);
            s1 += c * n;
            s2 += c * static_cast<long double>(n) * static_cast<long double>(n);
        }
        const long double mean = s1 / in_hist;
        out.mean = static_cast<double>(mean);
        out.variance = static_cast<double>(s2 / in_hist - mean * mean);
    }
    if (total.included > 0) {
        out.clone_count_mean = static_cast<double>(total.mutation_events) / static_cast<double>(total.included);
    }
    return out;
}

} // namespace

CloneLaw clone_law_at_age(const ModelParams& p, double age) {
    if (!(age >= 0.0)) throw validation_error("clone_law_at_age: age must be nonnegative");
    const DerivedQuantities d = derive(p);
    const double e = std::exp(d.lambda * age);
    CloneLaw law{};
    if (age == 0.0) {
        law.p0 = 0.0;
        law.eta = 0.0;
        law.log_eta = -std::numeric_limits<double>::infinity();
        return law;
    }
    law.p0 = d.q * (e - 1.0) / (e - d.q);
    law.eta = (e - 1.0) / (e - d.q);
    law.log_eta = std::log1p(-(1.0 - d.q) / (e - d.q));
    return law;
}

double clone_gf(const ModelParams& p, double age, double z) {
    if (!(z >= 0.0 && z < 1.0)) throw validation_error("clone_gf: z must be in [0,1)");
    const DerivedQuantities d = derive(p);
    const double xi = xi_of_z(z, d.q).xi;
    return 1.0 - (1.0 - d.q) / (1.0 - xi * std::exp(-d.lambda * age));
}

EnsembleSummary sample_semi_deterministic(const SimConfig& cfg) {
    const DerivedQuantities d = derive(cfg.params);
    const double big_n = cfg.params.N;
    const double n0 = cfg.params.N0;
    const double mean_clones = d.m;
    const double inv_delta = 1.0 / cfg.params.delta;

    return run_parallel(cfg, [&](SplitMix64& rng, LocalTally& tally) {
        const std::uint64_t k = draw_poisson(rng, mean_clones);
        tally.mutation_events += k;
        double b = 0.0;
        for (std::uint64_t i = 0; i < k; ++i) {
            // Arrival position by inverse CDF of density ~ e^{delta s}:
            // wild-type size at arrival is uniform on [N0, N].
            const double w = n0 + rng.next_double() * (big_n - n0);
            const double age = inv_delta * std::log(big_n / w);
            const CloneLaw law = clone_law_at_age(cfg.params, age);
            b += draw_clone_size(rng, law);
        }
        tally.record(b, cfg.histogram_cap);
    });
}

EnsembleSummary sample_fully_stochastic(const SimConfig& cfg) {
    const ModelParams& p = cfg.params;
    validate(p);
    const std::uint64_t target = static_cast<std::uint64_t>(std::ceil(p.N));
    const std::uint64_t a_start = static_cast<std::uint64_t>(std::llround(p.N0));

    return run_parallel(cfg, [&](SplitMix64& rng, LocalTally& tally) {
        std::uint64_t a = a_start;
        std::uint64_t b = 0;
        std::uint64_t events = 0;
        unsigned long long mutations = 0;
        // First-passage state at #A = target depends only on the embedded jump
        // chain, so waiting times never need to be drawn.
        while (a < target) {
            if (++events > cfg.max_events) {
                ++tally.excluded;
                return;
            }
            const double ra_birth = p.delta * static_cast<double>(a);
            const double ra_mut = p.nu * static_cast<double>(a);
            const double rb_birth = p.alpha * static_cast<double>(b);
            const double rb_death = p.beta * static_cast<double>(b);
            const double total = ra_birth + ra_mut + rb_birth + rb_death;
            const double u = rng.next_double() * total;
            if (u < ra_birth) {
                ++a;
            } else if (u < ra_birth + ra_mut) {
                ++b;
                ++mutations;
            } else if (u < ra_birth + ra_mut + rb_birth) {
                ++b;
            } else {
                --b;
            }
        }
        tally.mutation_events += mutations;
        tally.record(static_cast<double>(b), cfg.histogram_cap);
    });
}

EnsembleSummary run(const SimConfig& cfg) {
    return cfg.mode == Mode::SemiDeterministic ? sample_semi_deterministic(cfg)
                                               : sample_fully_stochastic(cfg);
}

} // namespace fluctuate::sim
