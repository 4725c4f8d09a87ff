#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fluctuate/errors.hpp"
#include "fluctuate/exact.hpp"
#include "fluctuate/lpsm.hpp"
#include "fluctuate/rng.hpp"
#include "fluctuate/sim.hpp"
#include "fluctuate/stats.hpp"

#include <cmath>

using namespace fluctuate;

namespace {

ModelParams standard_params() {
    // gamma = 1.5, q = 0.5, N = 100, mu = 0.01
    ModelParams p;
    p.alpha = 2.0;
    p.beta = 1.0;
    p.nu = 0.02;
    p.delta = 1.5;
    p.N = 100.0;
    return p;
}

} // namespace

TEST_CASE("clone law reconstructs the closed-form pgf") {
    const ModelParams p = standard_params();
    for (double age : {0.1, 0.7, 2.0, 5.0}) {
        const sim::CloneLaw law = sim::clone_law_at_age(p, age);
        for (double z : {0.0, 0.3, 0.6, 0.9}) {
            const double mixture = law.p0 + (1.0 - law.p0) * (1.0 - law.eta) * z / (1.0 - law.eta * z);
            CHECK(std::abs(mixture - sim::clone_gf(p, age, z)) <= 1e-12);
        }
    }
    // age 0: a newborn clone has size exactly one
    const sim::CloneLaw born = sim::clone_law_at_age(p, 0.0);
    CHECK(born.p0 == 0.0);
    CHECK(born.eta == 0.0);
}

TEST_CASE("deterministic across seeds and worker counts") {
    sim::SimConfig cfg;
    cfg.params = standard_params();
    cfg.trajectories = 20000;
    cfg.seed = 123;
    cfg.threads = 1;
    const sim::EnsembleSummary a = sim::sample_semi_deterministic(cfg);
    cfg.threads = 2;
    const sim::EnsembleSummary b = sim::sample_semi_deterministic(cfg);
    CHECK(a.counts == b.counts);
    CHECK(a.mean == b.mean);
    CHECK(a.clone_count_mean == b.clone_count_mean);

    cfg.seed = 124;
    const sim::EnsembleSummary c = sim::sample_semi_deterministic(cfg);
    CHECK(a.counts != c.counts);

    cfg.mode = sim::Mode::FullyStochastic;
    cfg.threads = 1;
    const sim::EnsembleSummary d = sim::run(cfg);
    cfg.threads = 2;
    const sim::EnsembleSummary e = sim::run(cfg);
    CHECK(d.counts == e.counts);
}

TEST_CASE("nu = 0 gives no mutants in either mode") {
    sim::SimConfig cfg;
    cfg.params = standard_params();
    cfg.params.nu = 0.0;
    cfg.trajectories = 2000;
    const sim::EnsembleSummary a = sim::sample_semi_deterministic(cfg);
    REQUIRE(a.counts.size() == 1);
    CHECK(a.counts[0] == 2000);
    CHECK(a.clone_count_mean == 0.0);
    const sim::EnsembleSummary b = sim::sample_fully_stochastic(cfg);
    REQUIRE(b.counts.size() == 1);
    CHECK(b.counts[0] == 2000);
}

TEST_CASE("clone count mean matches nu (N - N0) / delta") {
    sim::SimConfig cfg;
    cfg.params.alpha = 1.0;
    cfg.params.beta = 0.0;
    cfg.params.nu = 0.01;
    cfg.params.delta = 1.0;
    cfg.params.N = 100.0;
    cfg.trajectories = 100000;
    cfg.seed = 7;
    const sim::EnsembleSummary s = sim::sample_semi_deterministic(cfg);
    const double expected = 0.99;
    const double se = std::sqrt(expected / 100000.0);
    CHECK(std::abs(s.clone_count_mean - expected) <= 3.0 * se);
    // counts bookkeeping
    std::uint64_t total = s.overflow_count;
    for (const auto c : s.counts) total += c;
    CHECK(total == s.n_trajectories);
}

TEST_CASE("semi-deterministic sampler matches the exact pmf") {
    sim::SimConfig cfg;
    cfg.params = standard_params();
    cfg.trajectories = 30000;
    cfg.seed = 42;
    const sim::EnsembleSummary s = sim::sample_semi_deterministic(cfg);

    exact::PmfOptions opt;
    opt.nmax = 2048;
    const Pmf ref = exact::compute_pmf(cfg.params, opt);
    const double tv = stats::tv_distance(s, ref);
    CHECK(tv < 0.025); // ~5x the 1e5-trajectory acceptance budget
    const stats::Chi2Result chi = stats::chi_square_gof(s, ref);
    CHECK(chi.p_value > 1e-4);
    CHECK(chi.dof >= 3);
}

TEST_CASE("clone-size sampler matches phi_t(z) within Monte Carlo error") {
    const ModelParams p = standard_params();
    const double age = 2.0;
    const sim::CloneLaw law = sim::clone_law_at_age(p, age);
    SplitMix64 rng(99, 5);
    const int n = 200000;
    for (double z : {0.3, 0.6}) {
        double acc = 0.0, acc2 = 0.0;
        for (int i = 0; i < n; ++i) {
            double size = 0.0;
            if (law.p0 == 0.0 || rng.next_double() >= law.p0) {
                size = 1.0 + std::floor(std::log(rng.next_double()) / law.log_eta);
            }
            const double zs = std::pow(z, size);
            acc += zs;
            acc2 += zs * zs;
        }
        const double mean = acc / n;
        const double sd = std::sqrt((acc2 / n - mean * mean) / n);
        CHECK(std::abs(mean - sim::clone_gf(p, age, z)) <= 3.0 * sd);
    }
}

TEST_CASE("fully stochastic process approaches the LPSM law") {
    sim::SimConfig cfg;
    cfg.params.alpha = 2.0;
    cfg.params.beta = 1.0;
    cfg.params.delta = 1.5;
    cfg.params.N = 500.0;
    cfg.params.nu = 2.0 * 1.0 / 500.0; // mu = 1/500, theta = 1
    cfg.trajectories = 20000;
    cfg.seed = 11;
    cfg.mode = sim::Mode::FullyStochastic;
    const sim::EnsembleSummary s = sim::run(cfg);
    const Pmf ref = lpsm::pmf_V(LpsmParams{1.5, 1.0, 0.5}, 2048);
    CHECK(stats::tv_distance(s, ref) < 0.08);
}

TEST_CASE("event cap flags and excludes trajectories") {
    sim::SimConfig cfg;
    cfg.params = standard_params();
    cfg.trajectories = 50;
    cfg.max_events = 10; // N = 100 needs at least 99 wild-type births
    cfg.mode = sim::Mode::FullyStochastic;
    const sim::EnsembleSummary s = sim::run(cfg);
    CHECK(s.excluded == 50);
    CHECK(s.n_trajectories == 0);
}

TEST_CASE("regularized incomplete gamma sanity") {
    // Q(1, x) = exp(-x); P + Q = 1.
    for (double x : {0.1, 1.0, 5.0}) {
        CHECK(stats::gamma_q(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-12));
        CHECK(stats::gamma_p(2.5, x) + stats::gamma_q(2.5, x) == doctest::Approx(1.0).epsilon(1e-12));
    }
    // chi-square with 2 dof: Q(1, x/2)
    CHECK(stats::gamma_q(1.0, 3.0 / 2.0) == doctest::Approx(std::exp(-1.5)).epsilon(1e-12));
}
