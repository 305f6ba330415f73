#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "circleot/common.hpp"
#include "circleot/dynamics.hpp"
#include "circleot/transport.hpp"

using namespace circleot;

TEST_CASE("model maps evaluate as multiplication mod one") {
    CHECK(ExpandingMap(2, 0.0).eval(0.3) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(ExpandingMap(3, 0.0).eval(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ExpandingMap(2, 0.3).eval(0.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("branch ends satisfy the lift equation") {
    ExpandingMap map(2, 0.3);
    REQUIRE(map.branch_ends.size() == 3);
    CHECK(map.branch_ends.front() == 0.0);
    CHECK(map.branch_ends.back() == 1.0);
    CHECK(std::fabs(map.lift(map.branch_ends[1]) - 1.0) <= 1e-12);
    CHECK(ExpandingMap(2, 0.0).branch_ends[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("derivative bounds bracket the sampled derivative") {
    ExpandingMap map(3, 0.4);
    CHECK(map.min_deriv() == doctest::Approx(2.6).epsilon(1e-15));
    CHECK(map.max_deriv() == doctest::Approx(3.4).epsilon(1e-15));
    for (int i = 0; i < 64; ++i) {
        double d = map.deriv(i / 64.0);
        CHECK(d >= map.min_deriv() - 1e-12);
        CHECK(d <= map.max_deriv() + 1e-12);
    }
}

TEST_CASE("inverse branches of the doubling map are exact halves") {
    ExpandingMap map(2, 0.0);
    std::vector<double> b0 = map.inverse_branches(0.0);
    REQUIRE(b0.size() == 2);
    CHECK(b0[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(b0[1] == doctest::Approx(0.5).epsilon(1e-15));
    std::vector<double> bh = map.inverse_branches(0.5);
    CHECK(bh[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(bh[1] == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("perturbed inverse branches satisfy the lift equation to 1e-12") {
    ExpandingMap map(2, 0.3);
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        double x = rng.uniform();
        std::vector<double> ys = map.inverse_branches(x);
        REQUIRE(ys.size() == 2);
        CHECK(ys[0] < ys[1]);
        for (int j = 0; j < 2; ++j) CHECK(std::fabs(map.lift(ys[j]) - (x + j)) <= 1e-12);
    }
}

TEST_CASE("inverse branch composed with eval is the identity") {
    ExpandingMap map(2, 0.25);
    Rng rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        double y = rng.uniform();
        double x = map.eval(y);
        std::vector<double> ys = map.inverse_branches(x);
        CHECK(circle_distance(ys[map.branch_of(y)], y) <= 1e-12);
    }
}

TEST_CASE("the model invariant density is the constant one") {
    InvariantDensity rho = invariant_density(ExpandingMap(2, 0.0));
    CHECK(rho.residual <= 1e-12);
    CHECK((rho.grid - 1.0).abs().maxCoeff() <= 1e-12);
    CHECK(rho.measure(4096).total_mass() == doctest::Approx(1.0).epsilon(1e-13));

    InvariantDensity rho3 = invariant_density(ExpandingMap(3, 0.0));
    CHECK(rho3.residual <= 1e-12);
    CHECK((rho3.grid - 1.0).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("the perturbed invariant density converges, integrates to one, and is invariant") {
    ExpandingMap map(2, 0.3);
    InvariantDensity rho = invariant_density(map, 2048, 1e-8);
    CHECK(rho.residual <= 1e-8);
    CHECK(rho.min_value() > 0.0);
    CHECK(std::fabs(rho.to_step(4096).total() - 1.0) <= 1e-12);

    for (std::size_t i = 1; i < rho.residual_history.size(); ++i)
        CHECK(rho.residual_history[i] <= rho.residual_history[i - 1] + 1e-14);

    CircleMeasure mu = rho.measure(4096);
    CircleMeasure pushed = push_forward(mu, map, 8192);
    CHECK(wasserstein(pushed, mu, 2.0, 4096).cost <= 1e-4);
}

TEST_CASE("invariant_density rejects grids that are not powers of two") {
    CHECK_THROWS_AS(invariant_density(ExpandingMap(2, 0.2), 1000), std::domain_error);
}

TEST_CASE("pushforward through the model map fixes the uniform measure") {
    CircleMeasure out = push_forward(CircleMeasure::uniform(), ExpandingMap(2, 0.0));
    CHECK(wasserstein(out, CircleMeasure::uniform(), 2.0, 1024).cost <= 1e-12);
}

TEST_CASE("pushforward maps atoms through the lift") {
    CircleMeasure out = push_forward(CircleMeasure::dirac(1.0 / 3.0), ExpandingMap(2, 0.0));
    REQUIRE(out.atomic.size() == 1);
    CHECK(std::fabs(out.atomic.pos[0] - 2.0 / 3.0) <= 1e-15);
}

TEST_CASE("pushforward conserves mass for perturbed maps") {
    CircleMeasure mu =
        convex_sum({{0.5, CircleMeasure::uniform()}, {0.5, CircleMeasure::dirac(0.2)}});
    CircleMeasure out = push_forward(mu, ExpandingMap(3, 0.4));
    CHECK(std::fabs(out.total_mass() - 1.0) <= 1e-10);
}

TEST_CASE("iterate_pushforward follows periodic orbits and fixed points") {
    ExpandingMap map(2, 0.0);
    CircleMeasure mu = CircleMeasure::dirac(1.0 / 7.0);
    CircleMeasure same = iterate_pushforward(mu, map, 0);
    CHECK(same.atomic.pos[0] == mu.atomic.pos[0]);

    CircleMeasure cycled = iterate_pushforward(mu, map, 3);
    REQUIRE(cycled.atomic.size() == 1);
    CHECK(circle_distance(cycled.atomic.pos[0], 1.0 / 7.0) <= 1e-14);

    CircleMeasure lam = iterate_pushforward(CircleMeasure::uniform(), map, 5);
    CHECK(wasserstein(lam, CircleMeasure::uniform(), 2.0, 1024).cost <= 1e-12);
}

TEST_CASE("iterated pushforwards keep the invariant measure nearly fixed") {
    ExpandingMap map(2, 0.3);
    CircleMeasure mu = invariant_density(map, 2048, 1e-8).measure(4096);
    CircleMeasure out = iterate_pushforward(mu, map, 3);
    CHECK(wasserstein(out, mu, 2.0, 4096).cost <= 3e-4);
}

TEST_CASE("expanding maps reject non-expanding parameters") {
    CHECK_THROWS_AS(ExpandingMap(2, 1.5), std::domain_error);
    CHECK_THROWS_AS(ExpandingMap(1, 0.0), std::domain_error);
}
