#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fluctuate/errors.hpp"
#include "fluctuate/exact.hpp"
#include "fluctuate/limits.hpp"
#include "fluctuate/model.hpp"

#include <array>
#include <cmath>
#include <utility>

using namespace fluctuate;
using limits::GammaRegime;

namespace {

ModelParams make_params(double gamma, double q, double N, double mu) {
    ModelParams p;
    p.alpha = 1.0;
    p.beta = q;
    p.nu = mu;
    p.delta = gamma * (1.0 - q);
    p.N = N;
    return p;
}

} // namespace

TEST_CASE("gamma regime classification with 1e-12 tolerance") {
    CHECK(limits::classify_gamma(0.7) == GammaRegime::Below1);
    CHECK(limits::classify_gamma(1.0) == GammaRegime::EqualOne);
    CHECK(limits::classify_gamma(1.0 + 1e-13) == GammaRegime::EqualOne);
    CHECK(limits::classify_gamma(1.0 + 1e-9) == GammaRegime::Between1And2);
    CHECK(limits::classify_gamma(2.0) == GammaRegime::EqualTwo);
    CHECK(limits::classify_gamma(2.5) == GammaRegime::Above2);
}

TEST_CASE("large-theta law evaluators and moments") {
    // The s^gamma rows carry the sign the exact generating function converges
    // to; at gamma = 0.5 that is -pi s^(1/2).
    const limits::LimitLaw a = limits::large_theta_law(0.5, 0.0, 100.0);
    CHECK(a.exponent(1.0) == doctest::Approx(-M_PI).epsilon(1e-13));
    CHECK(std::isinf(a.mean));
    CHECK(std::isinf(a.variance));
    CHECK(a.scale_a == doctest::Approx(1e4).epsilon(1e-12)); // theta^(1/gamma)

    const limits::LimitLaw b = limits::large_theta_law(1.0, 0.0, 100.0);
    CHECK(b.exponent(1.0) == 0.0);
    CHECK(b.exponent(M_E) == doctest::Approx(M_E).epsilon(1e-13));
    CHECK(b.scale_a == doctest::Approx(100.0));
    CHECK(b.shift_b == doctest::Approx(std::log(100.0)));

    const limits::LimitLaw c = limits::large_theta_law(3.0, 0.0, 100.0);
    CHECK(c.exponent(2.0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(c.mean == 0.0);
    CHECK(c.variance == 1.0);

    // gamma = 1.5: -pi/sin(1.5 pi) = +pi.
    const limits::LimitLaw d = limits::large_theta_law(1.5, 0.5, 100.0);
    CHECK(d.exponent(1.0) == doctest::Approx(M_PI).epsilon(1e-13));

    CHECK_THROWS_AS(limits::large_theta_law(0.0, 0.0, 100.0), validation_error);
    CHECK_THROWS_AS(limits::large_theta_law(1.5, 0.0, 1.0), validation_error);
}

TEST_CASE("stable parameterization") {
    const limits::StableParams landau = limits::stable_params(1.0);
    CHECK(landau.alpha == 1.0);
    CHECK(landau.sigma == doctest::Approx(M_PI / 2.0));
    CHECK(landau.beta == 1.0);
    CHECK(landau.mu == 0.0);

    const limits::StableParams half = limits::stable_params(0.5);
    CHECK(half.alpha == 0.5);
    CHECK(half.sigma == doctest::Approx(M_PI * M_PI / 8.0).epsilon(1e-13));
    CHECK(half.beta == 1.0);

    CHECK(limits::stable_params(5.0).alpha == 2.0);
    CHECK(limits::stable_params(5.0).beta == 0.0);
}

TEST_CASE("large-N law table rows") {
    const limits::LimitLaw g1 = limits::large_N_law(make_params(1.0, 0.0, 1000.0, 0.01));
    CHECK(g1.exponent(1.0) == doctest::Approx(0.01 * (1.0 + std::log(2.0))).epsilon(1e-13));
    CHECK(g1.mean == doctest::Approx(0.01));
    CHECK(g1.variance == doctest::Approx(0.02));
    CHECK(g1.scale_a == doctest::Approx(1000.0)); // (1-q) a = N at q = 0
    CHECK(g1.shift_b == doctest::Approx(0.01 * (1.0 + std::log(1000.0))));

    const limits::LimitLaw g3 = limits::large_N_law(make_params(3.0, 0.0, 1000.0, 0.01));
    CHECK(g3.variance == doctest::Approx(0.015).epsilon(1e-13));
    CHECK(g3.mean == 0.0);

    const limits::LimitLaw gh = limits::large_N_law(make_params(0.5, 0.0, 1000.0, 0.01));
    CHECK(gh.mean == doctest::Approx(-0.02).epsilon(1e-13));
    CHECK(gh.shift_b == 0.0);
    CHECK(gh.variance == doctest::Approx(2.0 * 0.01 / 1.5).epsilon(1e-13));

    const limits::LimitLaw g2 = limits::large_N_law(make_params(2.0, 0.3, 1000.0, 0.01));
    CHECK(g2.variance == doctest::Approx(0.01));
    CHECK(g2.exponent(2.0) == doctest::Approx(0.02).epsilon(1e-13));

    CHECK_THROWS_AS(limits::large_N_law(make_params(1.5, 0.0, 1000.0, 0.0)), validation_error);
}

TEST_CASE("Var(W) values straddle the gamma = 2 boundary consistently") {
    // Tagged per-regime values only; each row must reproduce its own formula.
    const limits::LimitLaw lo = limits::large_N_law(make_params(1.9, 0.0, 1000.0, 0.01));
    CHECK(lo.variance == doctest::Approx(2.0 * 0.01 / 0.1).epsilon(1e-12));
    const limits::LimitLaw mid = limits::large_N_law(make_params(2.0, 0.0, 1000.0, 0.01));
    CHECK(mid.variance == doctest::Approx(0.01).epsilon(1e-12));
    const limits::LimitLaw hi = limits::large_N_law(make_params(2.1, 0.0, 1000.0, 0.01));
    CHECK(hi.variance == doctest::Approx(0.01 * 2.1 / (0.1 * 1.1)).epsilon(1e-12));
}

TEST_CASE("Laplace exponents are convex in s") {
    const double h = 1e-3;
    for (double gamma : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        const limits::LimitLaw law = limits::large_theta_law(gamma, 0.3, 50.0);
        for (double s = 0.05; s < 3.0; s += 0.1) {
            const double dd = law.exponent(s + h) - 2.0 * law.exponent(s) + law.exponent(s - h);
            INFO("large-theta gamma=", gamma, " s=", s);
            CHECK(dd >= -1e-9);
        }
        const limits::LimitLaw wlaw = limits::large_N_law(make_params(gamma, 0.3, 1000.0, 0.01));
        for (double s = 0.05; s < 3.0; s += 0.1) {
            const double dd = wlaw.exponent(s + h) - 2.0 * wlaw.exponent(s) + wlaw.exponent(s - h);
            INFO("large-N gamma=", gamma, " s=", s);
            CHECK(dd >= -1e-9);
        }
    }
}

TEST_CASE("rescaled finite-N exponent converges to the W table rows") {
    // Lambda_B(e^{-s/a}) + b s -> Lambda_W(s) with the table scalings; this
    // pins every row's sign and drift convention against the exact law.
    // N stays moderate so e^{-s/a} is resolvable in double precision.
    const std::pair<double, std::array<double, 2>> grid[] = {
        {0.5, {1e4, 1e6}},
        {1.0, {1e4, 1e6}},
        {1.5, {1e4, 1e7}},
        {3.0, {1e4, 1e8}},
    };
    const double final_bound[] = {2e-4, 1e-4, 2e-2, 1e-1};
    int idx = 0;
    for (const auto& [gamma, ns] : grid) {
        double prev = 1e9;
        for (const double N : ns) {
            ModelParams p;
            p.alpha = 1.0;
            p.beta = 0.25;
            p.nu = 0.01;
            p.delta = gamma * 0.75;
            p.N = N;
            const limits::LimitLaw w = limits::large_N_law(p);
            double worst = 0.0;
            for (double s : {0.5, 1.0, 2.0}) {
                const double z = std::exp(-s / w.scale_a);
                const double resc = exact::log_gf_B(p, z) + w.shift_b * s;
                worst = std::max(worst, std::abs(resc - w.exponent(s))
                                            / std::max(1e-12, std::abs(w.exponent(s))));
            }
            INFO("gamma=", gamma, " N=", N);
            CHECK(worst < prev);
            prev = worst;
        }
        CHECK(prev <= final_bound[idx]);
        ++idx;
    }
}

TEST_CASE("rescaled exponents converge to the limit law") {
    const std::array<double, 3> thetas{1e2, 1e4, 1e6};
    std::vector<double> s_grid;
    for (double s = 0.1; s <= 2.0; s += 0.05) s_grid.push_back(s);

    for (double gamma : {0.5, 1.0, 1.5}) {
        for (double q : {0.0, 0.5}) {
            const LpsmParams p{gamma, 1.0, q};
            const limits::ConvergenceReport rep = limits::verify_limit_convergence(p, thetas, s_grid);
            INFO("gamma=", gamma, " q=", q);
            REQUIRE(rep.v_distance.size() == 3);
            // monotone decreasing within 10% noise
            CHECK(rep.v_distance[1] <= rep.v_distance[0] * 1.1);
            CHECK(rep.v_distance[2] <= rep.v_distance[1] * 1.1);
            // At theta = 1e6 the W pathway is inside 1% everywhere; the V
            // pathway is inside 1% except gamma = 1.5, whose drift residual
            // decays only like theta^(1-2/gamma) and sits near 1.5% here.
            CHECK(rep.w_distance[2] < 0.01);
            CHECK(rep.v_distance[2] < (gamma == 1.5 ? 0.02 : 0.01));
            if (gamma == 1.5) {
                // confirm the theta^(-1/3) decay rate across two decades
                CHECK(rep.v_distance[2] <= 0.3 * rep.v_distance[1]);
            }
        }
    }

    CHECK_THROWS_AS(limits::verify_limit_convergence(LpsmParams{1.0, 1.0, 0.0},
                                                     std::array<double, 2>{10.0, 5.0}, s_grid),
                    validation_error);
}
