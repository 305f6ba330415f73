#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "circleot/common.hpp"
#include "circleot/measure.hpp"

using namespace circleot;

namespace {

CircleMeasure half_uniform_half_dirac(double x) {
    return convex_sum({{0.5, CircleMeasure::uniform()}, {0.5, CircleMeasure::dirac(x)}});
}

}  // namespace

TEST_CASE("uniform quantiles are the identity") {
    CircleMeasure lambda = CircleMeasure::uniform();
    CHECK(quantile(lambda, 0.25) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(quantile(lambda, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(quantile(lambda, 0.875) == doctest::Approx(0.875).epsilon(1e-15));
}

TEST_CASE("dirac quantiles sit on the atom") {
    CircleMeasure d = CircleMeasure::dirac(0.5);
    CHECK(quantile(d, 0.9) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(quantile(d, 0.1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("mixture quantile lands on the atom across its mass range") {
    CircleMeasure mu = half_uniform_half_dirac(0.25);
    CHECK(quantile(mu, 0.5) == doctest::Approx(0.25).epsilon(1e-15));
    // Below the atom's cumulative range the quantile tracks the density.
    CHECK(quantile(mu, 0.1) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("quantile is nondecreasing in u") {
    CircleMeasure mu = half_uniform_half_dirac(0.25);
    double prev = quantile(mu, 0.0);
    for (int i = 1; i < 200; ++i) {
        double q = quantile(mu, i / 200.0);
        CHECK(q >= prev - 1e-15);
        prev = q;
    }
}

TEST_CASE("quantile_vector matches the one-off helper at midpoints") {
    CircleMeasure mu = half_uniform_half_dirac(0.6);
    std::vector<double> qv = quantile_vector(mu, 8);
    REQUIRE(qv.size() == 8);
    for (int i = 0; i < 8; ++i)
        CHECK(qv[i] == doctest::Approx(quantile(mu, (i + 0.5) / 8.0)).epsilon(1e-14));
}

TEST_CASE("cdf from the origin is right-continuous and matches hand values") {
    CHECK(cdf(CircleMeasure::uniform(), 0.3) == doctest::Approx(0.3).epsilon(1e-15));
    CircleMeasure mu = half_uniform_half_dirac(0.25);
    CHECK(cdf(mu, 0.2) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(cdf(mu, 0.25) == doctest::Approx(0.625).epsilon(1e-14));
    CHECK_THROWS_AS(cdf(mu, 1.0), std::domain_error);
}

TEST_CASE("quantize splits the uniform measure into dyadic midpoints") {
    AtomicPart q = quantize(CircleMeasure::uniform(), 4);
    REQUIRE(q.size() == 4);
    const double expect[4] = {0.125, 0.375, 0.625, 0.875};
    for (int i = 0; i < 4; ++i) {
        CHECK(q.pos[i] == doctest::Approx(expect[i]).epsilon(1e-15));
        CHECK(q.mass[i] == doctest::Approx(0.25).epsilon(1e-15));
    }
    CHECK(q.total() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("quantize merges coincident quantiles of a dirac") {
    AtomicPart q = quantize(CircleMeasure::dirac(0.3), 3);
    REQUIRE(q.size() == 1);
    CHECK(q.pos[0] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(q.mass[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("quantize of a half-atom mixture puts mass on the atom and the median") {
    CircleMeasure mu = half_uniform_half_dirac(0.0);
    AtomicPart q = quantize(mu, 2);
    REQUIRE(q.size() == 2);
    CHECK(q.pos[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(q.pos[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(q.mass[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(q.mass[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("quantize conserves mass exactly for power-of-two N") {
    CircleMeasure mu = half_uniform_half_dirac(0.37);
    AtomicPart q = quantize(mu, 64);
    CHECK(q.total() == 1.0);
}

TEST_CASE("convex_sum with a single unit weight is the identity") {
    CircleMeasure mu = half_uniform_half_dirac(0.4);
    CircleMeasure nu = convex_sum({{1.0, mu}});
    std::vector<double> a = quantile_vector(mu, 32), b = quantile_vector(nu, 32);
    for (int i = 0; i < 32; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-13));
}

TEST_CASE("convex_sum of two diracs keeps both atoms") {
    CircleMeasure nu =
        convex_sum({{0.5, CircleMeasure::dirac(0.0)}, {0.5, CircleMeasure::dirac(0.5)}});
    REQUIRE(nu.atomic.size() == 2);
    CHECK(nu.atomic.pos[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(nu.atomic.pos[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(nu.atomic.mass[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(nu.total_mass() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("convex_sum rejects weights that do not sum to one") {
    CHECK_THROWS_AS(convex_sum({{0.7, CircleMeasure::uniform()}}), std::domain_error);
    CHECK_THROWS_AS(convex_sum({}), std::domain_error);
}

TEST_CASE("max_atom_mass stays small on the uniform measure") {
    AtomEstimate e = max_atom_mass(CircleMeasure::uniform(), 1024, 1e-9);
    CHECK(e.mass <= 2.0 / 1024);
}

TEST_CASE("max_atom_mass finds a full dirac") {
    AtomEstimate e = max_atom_mass(CircleMeasure::dirac(0.5), 1024, 1e-9);
    CHECK(e.mass == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(circle_distance(e.position, 0.5) <= 1e-9);
}

TEST_CASE("max_atom_mass reports the heaviest atom of an atom-plus-density mixture") {
    // Four atoms of mass 1/8 on top of a uniform density of total mass 1/2.
    std::vector<std::pair<double, double>> atoms;
    for (int i = 1; i <= 4; ++i) atoms.push_back({(2.0 * i - 1.0) / 8.0, 0.125});
    CircleMeasure mu;
    mu.atomic = make_atomic(std::move(atoms));
    mu.density = StepDensity::uniform(0.5);
    mu.validate();
    AtomEstimate e = max_atom_mass(mu, 4096, 1e-9);
    CHECK(std::fabs(e.mass - 0.125) <= 2.0 / 4096);
}

TEST_CASE("make_atomic merges clusters, including across the origin") {
    AtomicPart a = make_atomic({{0.5, 0.25}, {0.5 + 5e-13, 0.25}});
    REQUIRE(a.size() == 1);
    CHECK(a.mass[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::fabs(a.pos[0] - 0.5) <= 1e-12);

    AtomicPart b = make_atomic({{1.0 - 1e-13, 0.5}, {0.0, 0.5}});
    REQUIRE(b.size() == 1);
    CHECK(b.mass[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(circle_distance(b.pos[0], 0.0) <= 1e-12);
}

TEST_CASE("make_atomic drops nonpositive masses") {
    AtomicPart a = make_atomic({{0.2, 0.5}, {0.6, 0.0}, {0.8, -1e-3}, {0.4, 0.5}});
    CHECK(a.size() == 2);
}

TEST_CASE("step densities know their mass and pointwise values") {
    StepDensity u = StepDensity::uniform();
    CHECK(u.total() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(u.value_at(0.7) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(StepDensity::zero().total() == 0.0);
}

TEST_CASE("validate accepts probability measures and rejects deficient mass") {
    CHECK_NOTHROW(CircleMeasure::uniform().validate());
    CHECK_NOTHROW(half_uniform_half_dirac(0.1).validate());
    CircleMeasure bad = CircleMeasure::from_density(StepDensity::uniform(0.5));
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("atomic parts validate ordering and mass positivity") {
    AtomicPart a;
    a.pos = {0.2, 0.1};
    a.mass = {0.5, 0.5};
    CHECK_THROWS_AS(a.validate(), std::domain_error);
}
