#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "circleot/common.hpp"
#include "circleot/field.hpp"
#include "circleot/measure.hpp"
#include "circleot/piecewise_map.hpp"

using namespace circleot;

namespace {

PiecewiseLinearMap doubling_map() {
    PiecewiseLinearMap T;
    T.cells = {{0.0, 1.0, 0.0, 2.0}};
    T.validate();
    return T;
}

double sup_cdf_gap(const CircleMeasure& a, const CircleMeasure& b, int M) {
    double worst = 0.0;
    for (int i = 0; i < M; ++i) {
        double x = (i + 0.5) / M;
        worst = std::max(worst, std::fabs(cdf(a, x) - cdf(b, x)));
    }
    return worst;
}

}  // namespace

TEST_CASE("pushing the uniform measure through the doubling map is the identity") {
    CircleMeasure out = push_forward(CircleMeasure::uniform(), doubling_map());
    CHECK(out.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(out.has_atoms());
    CHECK(sup_cdf_gap(out, CircleMeasure::uniform(), 512) <= 1e-12);
}

TEST_CASE("atoms map through the lift") {
    CircleMeasure out = push_forward(CircleMeasure::dirac(1.0 / 3.0), doubling_map());
    REQUIRE(out.atomic.size() == 1);
    CHECK(out.atomic.pos[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(out.atomic.mass[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("the doubled sawtooth displacement produces the atom-plus-density measure") {
    PiecewiseLinearField saw = sawtooth_field(4);
    CircleMeasure displaced =
        push_forward(CircleMeasure::uniform(), PiecewiseLinearMap::displacement(saw, 1.0));
    CircleMeasure mu = push_forward(displaced, doubling_map());
    REQUIRE(mu.atomic.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(std::fabs(mu.atomic.pos[i] - (2.0 * i + 1.0) / 8.0) <= 1e-12);
        CHECK(mu.atomic.mass[i] == doctest::Approx(0.125).epsilon(1e-12));
    }
    CHECK(mu.density.total() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exp_map at t = 0 returns the measure unchanged") {
    CircleMeasure mu = convex_sum({{0.5, CircleMeasure::uniform()}, {0.5, CircleMeasure::dirac(0.25)}});
    TangentField v = TangentField::from_trig(TrigPoly::cosine(1), 64);
    CircleMeasure out = exp_map(mu, v, 0.0);
    CHECK(out.atomic.size() == mu.atomic.size());
    CHECK(sup_cdf_gap(out, mu, 256) <= 1e-15);
}

TEST_CASE("a slope minus-one ramp collapses almost all mass to one atom at t = 1") {
    const int N = 256;
    std::vector<double> s(N);
    for (int i = 0; i < N; ++i) s[i] = 0.5 - static_cast<double>(i) / N;
    TangentField ramp = TangentField::from_samples(s);
    CircleMeasure out = exp_map(CircleMeasure::uniform(), ramp, 1.0);
    AtomEstimate e = max_atom_mass(out, 1024, 1e-9);
    CHECK(e.mass == doctest::Approx((N - 1.0) / N).epsilon(1e-9));
    CHECK(circle_distance(e.position, 0.5) <= 1e-9);
}

TEST_CASE("pushed_density at t = 0 is the input density") {
    TangentField v = TangentField::from_trig(TrigPoly::cosine(1), 512);
    StepDensity d = pushed_density(StepDensity::uniform(), v, 0.0);
    for (std::size_t i = 0; i < d.cells(); ++i) CHECK(d.val[i] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("pushed_density matches the first-order density formula for small t") {
    const double t = 1e-3;
    TangentField v = TangentField::from_trig(TrigPoly::cosine(1), 4096);
    StepDensity d = pushed_density(StepDensity::uniform(), v, t);
    double worst = 0.0;
    for (int i = 0; i < 8192; ++i) {
        double x = (i + 0.5) / 8192.0;
        worst = std::max(worst, std::fabs(d.value_at(x) - (1.0 + kTwoPi * t * std::sin(kTwoPi * x))));
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("pushed_density conserves mass away from the perturbative regime") {
    const double t = 0.4 / kTwoPi;
    TangentField v = TangentField::from_trig(TrigPoly::cosine(1), 4096);
    StepDensity d = pushed_density(StepDensity::uniform(), v, t);
    CHECK(std::fabs(d.total() - 1.0) <= 1e-10);
    for (std::size_t i = 0; i < d.cells(); ++i) CHECK(d.val[i] > 0.0);
}

TEST_CASE("the linearization error of the pushed density is superlinear in t") {
    TangentField v = TangentField::from_trig(TrigPoly::cosine(1), 4096);
    std::vector<std::pair<double, double>> pts;
    for (double t : {1e-2, 3e-3, 1e-3}) {
        StepDensity d = pushed_density(StepDensity::uniform(), v, t);
        double worst = 0.0;
        for (int i = 0; i < 8192; ++i) {
            double x = (i + 0.5) / 8192.0;
            worst = std::max(worst,
                             std::fabs(d.value_at(x) - (1.0 + kTwoPi * t * std::sin(kTwoPi * x))));
        }
        pts.emplace_back(t, worst);
    }
    CHECK(loglog_slope(pts) > 1.5);
}

TEST_CASE("pushed_density raises FoldError when a cell stops increasing") {
    TangentField v = TangentField::from_trig(TrigPoly::cosine(1), 4096);
    CHECK_THROWS_AS(pushed_density(StepDensity::uniform(), v, 0.2), FoldError);
}

TEST_CASE("pushed_density and push_forward tell the same CDF story") {
    const double t = 1e-2;
    TangentField v = TangentField::from_trig(TrigPoly::cosine(1), 1024);
    CircleMeasure a =
        push_forward(CircleMeasure::uniform(), PiecewiseLinearMap::displacement(v, t));
    CircleMeasure b = CircleMeasure::from_density(pushed_density(StepDensity::uniform(), v, t));
    CHECK(sup_cdf_gap(a, b, 512) <= 1e-8);
}

TEST_CASE("push_forward conserves mass for mixtures through displacements") {
    CircleMeasure mu = convex_sum({{0.5, CircleMeasure::uniform()}, {0.5, CircleMeasure::dirac(0.7)}});
    TangentField v = TangentField::from_trig(TrigPoly::sine(1), 256);
    CircleMeasure out = push_forward(mu, PiecewiseLinearMap::displacement(v, 0.3));
    CHECK(std::fabs(out.total_mass() - 1.0) <= 1e-12);
    CHECK_NOTHROW(out.validate());
}

TEST_CASE("from_lift samples an arbitrary lift onto tiled cells") {
    auto lift = [](double x) { return x + 0.05 * std::sin(kTwoPi * x); };
    PiecewiseLinearMap T = PiecewiseLinearMap::from_lift(64, 1, lift);
    CHECK_NOTHROW(T.validate());
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        double x = rng.uniform();
        CHECK(circle_distance(T.eval(x), wrap01(lift(x))) <= 1e-3);
    }
    CHECK(T.min_cell_stretch() > 0.0);
}

TEST_CASE("piecewise linear maps validate their cell structure") {
    PiecewiseLinearMap T;
    T.cells = {{0.0, 0.5, 0.0, 1.0}};  // does not cover [0, 1)
    CHECK_THROWS_AS(T.validate(), std::domain_error);
}
