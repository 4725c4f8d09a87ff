#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fluctuate/errors.hpp"
#include "fluctuate/io.hpp"
#include "fluctuate/model.hpp"

#include <cmath>

using namespace fluctuate;

TEST_CASE("derive computes the reduced quantities") {
    ModelParams p;
    p.alpha = 1.0, p.beta = 0.0, p.nu = 0.01, p.delta = 1.0, p.N = 100.0;
    const DerivedQuantities d = derive(p);
    CHECK(d.gamma == doctest::Approx(1.0));
    CHECK(d.mu == doctest::Approx(0.01));
    CHECK(d.q == 0.0);
    CHECK(d.theta == doctest::Approx(1.0));
    CHECK(d.phi == doctest::Approx(0.99));
    CHECK(d.tau == doctest::Approx(std::log(100.0)));
    CHECK(d.m == doctest::Approx(0.01 * 99.0));

    ModelParams p2;
    p2.alpha = 2.0, p2.beta = 1.0, p2.nu = 0.02, p2.delta = 1.5, p2.N = 1000.0;
    const DerivedQuantities d2 = derive(p2);
    CHECK(d2.lambda == doctest::Approx(1.0));
    CHECK(d2.gamma == doctest::Approx(1.5));
    CHECK(d2.mu == doctest::Approx(0.01));
    CHECK(d2.q == doctest::Approx(0.5));
    CHECK(d2.theta == doctest::Approx(10.0));
}

TEST_CASE("validation rejects boundary violations, listing all of them") {
    ModelParams p;
    p.alpha = 1.0, p.beta = 1.0, p.nu = 0.01, p.delta = 1.0, p.N = 100.0;
    CHECK_THROWS_WITH_AS(derive(p), doctest::Contains("lambda must be positive"), validation_error);

    ModelParams bad;
    bad.alpha = 1.0, bad.beta = 2.0, bad.nu = -1.0, bad.delta = 1.0, bad.N = 0.5;
    try {
        validate(bad);
        FAIL("expected validation_error");
    } catch (const validation_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("lambda") != std::string::npos);
        CHECK(msg.find("nu") != std::string::npos);
        CHECK(msg.find("N must be >= 1") != std::string::npos);
    }

    LpsmParams lp{0.0, 1.0, 1.0};
    CHECK_THROWS_AS(validate(lp), validation_error);
}

TEST_CASE("xi_of_z examples") {
    const XiY a = xi_of_z(0.0, 0.5);
    CHECK(a.xi == doctest::Approx(0.5));
    CHECK(a.y == doctest::Approx(-1.0));

    const XiY b = xi_of_z(0.25, 0.25);
    CHECK(b.xi == doctest::Approx(0.0));
    CHECK(b.y == doctest::Approx(0.0));

    const XiY c = xi_of_z(0.9, 0.0);
    CHECK(c.xi == doctest::Approx(-9.0));
    CHECK(c.y == doctest::Approx(0.9));

    CHECK_THROWS_AS(xi_of_z(1.0, 0.0), validation_error);
}

TEST_CASE("xi/y round trip across the grid") {
    for (double q : {0.0, 0.25, 0.5, 0.9}) {
        for (double z = 0.0; z < 0.95; z += 0.1) {
            const XiY v = xi_of_z(z, q);
            const double y_from_xi = v.xi / (v.xi - 1.0);
            CHECK(std::abs(y_from_xi - v.y) <= 5e-15 * std::max(1.0, std::abs(v.y)));
        }
    }
}

TEST_CASE("parameter JSON schemas use the pinned key names") {
    ModelParams p;
    p.alpha = 2.0, p.beta = 0.5, p.nu = 0.02, p.delta = 1.5, p.N = 500.0, p.N0 = 2.0;
    const io::json j = io::to_json(p);
    CHECK(j.contains("alpha"));
    CHECK(j.contains("beta"));
    CHECK(j.contains("nu"));
    CHECK(j.contains("delta"));
    CHECK(j.contains("N"));
    CHECK(j.contains("N0"));
    const ModelParams back = io::model_from_json(j);
    CHECK(back.alpha == p.alpha);
    CHECK(back.N == p.N);
    CHECK(back.N0 == p.N0);

    const LpsmParams lp{1.5, 2.0, 0.25};
    const io::json jl = io::to_json(lp);
    CHECK(jl.contains("gamma"));
    CHECK(jl.contains("theta"));
    CHECK(jl.contains("q"));
    const LpsmParams lback = io::lpsm_from_json(jl);
    CHECK(lback.gamma == lp.gamma);
    CHECK(lback.theta == lp.theta);
    CHECK(lback.q == lp.q);
}
