// Expanding circle maps: the degree-d model family, its sinusoidal
// perturbations, inverse branches, and the absolutely continuous invariant
// density obtained by transfer-operator iteration.
#pragma once

#include <vector>

#include "circleot/field.hpp"
#include "circleot/measure.hpp"
#include "circleot/piecewise_map.hpp"

namespace circleot {

// x |-> d x + (epsilon / 2 pi) sin(2 pi x) mod 1. The map is expanding as
// long as |epsilon| <= d - 1 - 1e-6; epsilon = 0 is the exact-arithmetic
// model case (inverse branches and linearization become exact divisions).
struct ExpandingMap {
    int degree;
    double epsilon;
    // c_0 = 0 < c_1 < ... < c_d = 1 with lift(c_j) = j; branch j is [c_j, c_{j+1})
    std::vector<double> branch_ends;

    ExpandingMap(int d, double eps);

    double lift(double x) const { return degree * x + epsilon / kTwoPi * std::sin(kTwoPi * x); }
    double deriv(double x) const { return degree + epsilon * std::cos(kTwoPi * x); }
    double eval(double x) const;
    double min_deriv() const { return degree - std::fabs(epsilon); }
    double max_deriv() const { return degree + std::fabs(epsilon); }

    int branch_of(double y) const;
    // The d solutions of eval(y) = x, increasing, one per branch; each
    // satisfies |lift(y) - (x + j)| <= 1e-12 (bracketed Newton, <= 50 steps).
    std::vector<double> inverse_branches(double x) const;

    // Piecewise linear sampling of the lift on M uniform cells. Exact (one
    // cell, [0,1) -> [0,d)) in the model case.
    PiecewiseLinearMap linearize(int M) const;
};

struct InvariantDensity {
    Eigen::ArrayXd grid;        // samples at i/N, normalized to grid mean 1
    TrigPoly trig;              // band-limited interpolant of the samples
    double residual = 0.0;      // final sup-norm fixed-point defect
    int iterations = 0;
    std::vector<double> residual_history;

    int n() const { return static_cast<int>(grid.size()); }
    double eval(double x) const { return trig.eval(x); }
    double min_value() const { return grid.minCoeff(); }
    // Midpoint-sampled step density on M uniform cells (M a power of two),
    // renormalized to total mass exactly 1; exact for the model map.
    StepDensity to_step(int M) const;
    CircleMeasure measure(int M = 4096) const { return CircleMeasure::from_density(to_step(M)); }
};

// Iterates the transfer operator (Lf)(x) = sum_{y in Phi^-1 x} f(y)/Phi'(y)
// from f == 1 on the N-grid (linear interpolation at preimages) until
// sup|Lf - f| <= tol, then renormalizes to integral 1. N must be a power of
// two >= 256. Throws on non-convergence with the last residual in the message.
InvariantDensity invariant_density(const ExpandingMap& map, int N = 2048, double tol = 1e-8,
                                   int max_iter = 5000);

// Pushforward through an expanding map: atoms map exactly through the lift;
// the density part goes through linearize(refinement) (exact when epsilon=0).
CircleMeasure push_forward(const CircleMeasure& mu, const ExpandingMap& map, int refinement = 8192);

CircleMeasure iterate_pushforward(CircleMeasure mu, const ExpandingMap& map, int k,
                                  int refinement = 8192);

}  // namespace circleot
