// Piecewise linear circle maps and the exact pushforward of atom + step
// measures through them. Every map this library pushes measures through
// (displacements Id + t v, expanding-map linearizations, the sawtooth
// construction) is expressed as one of these.
#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "circleot/field.hpp"
#include "circleot/measure.hpp"

namespace circleot {

// Raised when a density evolution needs Id + t v to be orientation
// preserving and it is not (a cell has collapsed or folded).
struct FoldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A circle map given per monotonicity cell by its lift values. Cell j maps
// [a, b) linearly onto [ga, gb) of the real line (gb < ga for a decreasing
// cell, ga == gb for a collapsed one); values are taken mod 1. The cells
// partition [0, 1); jumps between consecutive cells are allowed.
struct PiecewiseLinearMap {
    struct Cell {
        double a, b;    // source interval [a, b)
        double ga, gb;  // lift values at a and at b (left limit)
    };
    std::vector<Cell> cells;

    void validate() const;
    double eval_lift(double x) const;
    double eval(double x) const { return wrap01(eval_lift(x)); }
    double min_cell_stretch() const;  // min over cells of (gb-ga)/(b-a), signed

    // Id + t v from a grid-sampled field, one cell per grid interval, with
    // cyclic linear interpolation of v between grid points.
    static PiecewiseLinearMap displacement(const TangentField& v, double t);
    // Id + t v from a piecewise linear field; exact, keeps the field's own
    // breakpoints, so deliberate collapses stay collapses.
    static PiecewiseLinearMap displacement(const PiecewiseLinearField& v, double t);
    // M cells sampling an arbitrary degree-deg lift; lift(1) is pinned to
    // lift(0) + deg so the cells tile exactly.
    static PiecewiseLinearMap from_lift(int M, int deg, const std::function<double(double)>& lift);
};

// Exact pushforward: atoms map through the lift; each constant-density piece
// maps to a constant-density interval (or to an atom when its image has zero
// width); overlapping images superpose. Total mass is conserved exactly up to
// rounding; coincident image atoms merge within 1e-12.
CircleMeasure push_forward(const CircleMeasure& mu, const PiecewiseLinearMap& T);

// (Id + t v)_# mu. t = 0 returns mu unchanged.
CircleMeasure exp_map(const CircleMeasure& mu, const TangentField& v, double t);

// First-order density evolution: the exact transformed density on the image
// grid of Id + t v, cell masses conserved exactly. Throws FoldError when some
// cell of Id + t v is not increasing.
StepDensity pushed_density(const StepDensity& rho, const TangentField& v, double t);

}  // namespace circleot
