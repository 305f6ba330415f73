#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "circleot/common.hpp"
#include "circleot/field.hpp"
#include "circleot/measure.hpp"
#include "circleot/piecewise_map.hpp"
#include "circleot/transport.hpp"

using namespace circleot;

namespace {

CircleMeasure random_equal_atoms(Rng& rng, int n) {
    std::vector<std::pair<double, double>> atoms;
    for (int i = 0; i < n; ++i) atoms.push_back({rng.uniform(), 1.0 / n});
    CircleMeasure mu = CircleMeasure::from_atomic(make_atomic(std::move(atoms)));
    mu.validate();
    return mu;
}

}  // namespace

TEST_CASE("circle distance basics") {
    CHECK(circle_distance(0.0, 0.5) == 0.5);
    CHECK(circle_distance(0.1, 0.9) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(circle_distance(0.37, 0.37) == 0.0);
}

TEST_CASE("the distance of a measure to itself is zero") {
    CircleMeasure mu =
        convex_sum({{0.5, CircleMeasure::uniform()}, {0.5, CircleMeasure::dirac(0.3)}});
    TransportResult r = wasserstein(mu, mu, 2.0, 256);
    CHECK(r.cost <= 1e-14);
    CHECK(r.shift == 0);
}

TEST_CASE("antipodal diracs are half a turn apart, ties take the smallest shift") {
    TransportResult r = wasserstein(CircleMeasure::dirac(0.0), CircleMeasure::dirac(0.5), 2.0, 16);
    CHECK(r.cost == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.shift == 0);
}

TEST_CASE("displacing the uniform measure by t cos moves it by t over sqrt two") {
    const double t = 1e-2;
    TangentField v = TangentField::from_trig(TrigPoly::cosine(1), 4096);
    CircleMeasure nu = exp_map(CircleMeasure::uniform(), v, t);
    double w = wasserstein(CircleMeasure::uniform(), nu, 2.0, 4096).cost;
    CHECK(std::fabs(w / t - 1.0 / std::sqrt(2.0)) <= 0.01 / std::sqrt(2.0));
}

TEST_CASE("the atom-plus-density sawtooth image is uniformly far from the uniform measure") {
    std::vector<std::pair<double, double>> atoms;
    for (int i = 1; i <= 4; ++i) atoms.push_back({(2.0 * i - 1.0) / 8.0, 0.125});
    CircleMeasure mu;
    mu.atomic = make_atomic(std::move(atoms));
    mu.density = StepDensity::uniform(0.5);
    mu.validate();
    CHECK(wasserstein(CircleMeasure::uniform(), mu, 2.0, 8192).cost >= 1.0 / 64.0);
}

TEST_CASE("brute force matching reproduces hand-computed costs") {
    CircleMeasure a = CircleMeasure::from_atomic(make_atomic({{0.0, 0.5}, {0.4, 0.5}}));
    CircleMeasure b = CircleMeasure::from_atomic(make_atomic({{0.1, 0.5}, {0.5, 0.5}}));
    CHECK(brute_force_wasserstein(a, a, 2.0) <= 1e-15);
    CHECK(brute_force_wasserstein(a, b, 2.0) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("quantized transport equals brute force on equal-mass atom lists") {
    Rng rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        CircleMeasure a = random_equal_atoms(rng, 6);
        CircleMeasure b = random_equal_atoms(rng, 6);
        for (double p : {1.0, 2.0, 3.0}) {
            double exact = brute_force_wasserstein(a, b, p);
            double quant = wasserstein(a, b, p, 6).cost;
            CHECK(std::fabs(quant - exact) <= 1e-9 * std::max(1.0, exact));
        }
    }
}

TEST_CASE("transport cost is symmetric") {
    Rng rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        CircleMeasure a = random_equal_atoms(rng, 5);
        CircleMeasure b = random_equal_atoms(rng, 5);
        CHECK(std::fabs(wasserstein(a, b, 2.0, 40).cost - wasserstein(b, a, 2.0, 40).cost) <=
              1e-12);
    }
}

TEST_CASE("triangle inequality holds on random atomic triples") {
    Rng rng(19);
    for (int trial = 0; trial < 10; ++trial) {
        CircleMeasure a = random_equal_atoms(rng, 8);
        CircleMeasure b = random_equal_atoms(rng, 8);
        CircleMeasure c = random_equal_atoms(rng, 8);
        double ab = brute_force_wasserstein(a, b, 2.0);
        double bc = brute_force_wasserstein(b, c, 2.0);
        double ac = brute_force_wasserstein(a, c, 2.0);
        CHECK(ac <= ab + bc + 1e-9);
    }
}

TEST_CASE("quantization error fades with resolution") {
    TangentField v = TangentField::from_trig(TrigPoly::cosine(1), 4096);
    CircleMeasure nu = exp_map(CircleMeasure::uniform(), v, 0.05);
    double coarse = wasserstein(CircleMeasure::uniform(), nu, 2.0, 256).cost;
    double fine = wasserstein(CircleMeasure::uniform(), nu, 2.0, 8192).cost;
    CHECK(std::fabs(coarse - fine) <= 1e-4);
}

TEST_CASE("optimal pairs preserve cyclic order") {
    CircleMeasure mu =
        convex_sum({{0.5, CircleMeasure::uniform()}, {0.5, CircleMeasure::dirac(0.6)}});
    TransportResult r = wasserstein(CircleMeasure::uniform(), mu, 2.0, 64, true);
    REQUIRE(r.pairs.size() == 64);
    int descents = 0;
    for (std::size_t i = 0; i + 1 < r.pairs.size(); ++i) {
        CHECK(r.pairs[i].first <= r.pairs[i + 1].first + 1e-15);
        if (r.pairs[i + 1].second < r.pairs[i].second) ++descents;
    }
    CHECK(descents <= 1);
}

TEST_CASE("displaced measures separate at the rate of the field difference") {
    const double t = 1e-3;
    TangentField v = TangentField::from_trig(TrigPoly::cosine(1), 4096);
    TangentField w = TangentField::from_trig(TrigPoly::sine(1), 4096);
    CircleMeasure a = exp_map(CircleMeasure::uniform(), v, t);
    CircleMeasure b = exp_map(CircleMeasure::uniform(), w, t);
    double dist = wasserstein(a, b, 2.0, 4096).cost;
    CHECK(std::fabs(dist / t - 1.0) <= 0.01);  // |cos - sin| has unit L2 norm
}

TEST_CASE("wasserstein rejects deficient mass and tiny N") {
    CircleMeasure bad = CircleMeasure::from_density(StepDensity::uniform(0.5));
    CHECK_THROWS_AS(wasserstein(bad, bad, 2.0, 64), std::domain_error);
    CHECK_THROWS_AS(wasserstein(CircleMeasure::uniform(), CircleMeasure::uniform(), 2.0, 1),
                    std::domain_error);
    CHECK_THROWS_AS(wasserstein(CircleMeasure::uniform(), CircleMeasure::uniform(), 0.5, 64),
                    std::domain_error);
}

TEST_CASE("brute force refuses oversized unequal problems") {
    Rng rng(5);
    CircleMeasure big = random_equal_atoms(rng, 13);
    CHECK_THROWS_AS(brute_force_wasserstein(big, big, 2.0), std::length_error);
}

TEST_CASE("bowen separation is vacuous on singletons") {
    BowenReport r = bowen_separation_check({CircleMeasure::dirac(0.1)}, ExpandingMap(2, 0.0), 2,
                                           1.0, 0.9, 16);
    CHECK(r.separated);
}

TEST_CASE("antipodal diracs are bowen separated at distance one half") {
    std::vector<CircleMeasure> S = {CircleMeasure::dirac(0.0), CircleMeasure::dirac(0.5)};
    BowenReport r = bowen_separation_check(S, ExpandingMap(2, 0.0), 0, 1.0, 0.4, 64);
    CHECK(r.separated);
    CHECK(r.min_bowen == doctest::Approx(0.5).epsilon(1e-12));

    BowenReport tight = bowen_separation_check(S, ExpandingMap(2, 0.0), 0, 1.0, 0.6, 64);
    CHECK_FALSE(tight.separated);
}

TEST_CASE("bowen separation can come from a later iterate") {
    std::vector<CircleMeasure> S = {CircleMeasure::dirac(0.2), CircleMeasure::dirac(0.45)};
    ExpandingMap map(2, 0.0);
    BowenReport now = bowen_separation_check(S, map, 0, 1.0, 0.45, 64);
    CHECK_FALSE(now.separated);  // 0.25 at step zero
    BowenReport later = bowen_separation_check(S, map, 1, 1.0, 0.45, 64);
    CHECK(later.separated);  // images 0.4 and 0.9 are half a turn apart
    CHECK(later.min_bowen == doctest::Approx(0.5).epsilon(1e-12));
}
