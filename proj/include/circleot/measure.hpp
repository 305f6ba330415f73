// Probability measures on the circle: atoms plus a piecewise constant
// density, with quantile/quantization machinery and measure algebra.
#pragma once

#include <utility>
#include <vector>

#include "circleot/common.hpp"

namespace circleot {

// Finitely many atoms, positions strictly increasing in [0, 1).
struct AtomicPart {
    std::vector<double> pos;
    std::vector<double> mass;

    std::size_t size() const { return pos.size(); }
    double total() const;
    void validate() const;
};

// Canonical atomic part from unsorted (position, mass) pairs: wraps positions,
// sorts, merges clusters within merge_tol (mass-weighted position, wrapping
// across 0 included), drops nonpositive masses.
AtomicPart make_atomic(std::vector<std::pair<double, double>> atoms, double merge_tol = 1e-12);

// Piecewise constant density. Cell i is [bp[i], bp[i+1]) with the last cell
// wrapping to 1; bp[0] is always 0.
struct StepDensity {
    std::vector<double> bp;
    std::vector<double> val;

    std::size_t cells() const { return bp.size(); }
    double total() const;
    double value_at(double x) const;
    void validate() const;

    static StepDensity uniform(double height = 1.0);
    static StepDensity zero();
};

struct CircleMeasure {
    AtomicPart atomic;
    StepDensity density;

    double total_mass() const { return atomic.total() + density.total(); }
    bool has_atoms() const { return !atomic.pos.empty(); }
    // Probability-measure check: parts well formed, total mass 1 within tol.
    void validate(double tol = 1e-9) const;

    static CircleMeasure uniform();
    static CircleMeasure dirac(double x);
    static CircleMeasure from_atomic(AtomicPart a);
    static CircleMeasure from_density(StepDensity d);
};

// Inverse-CDF machinery. The CDF is taken from origin 0, right-continuous;
// quantile(u) = inf{x : F(x) >= u}, the leftmost point on flat regions.
class QuantileIndex {
  public:
    explicit QuantileIndex(const CircleMeasure& mu);
    double total() const { return total_; }
    double quantile(double u) const;                 // u in (0, total]
    std::vector<double> quantile_vector(int N) const;  // at u = (i+1/2)/N * total

  private:
    struct Item {
        double cum0, cum1;  // cumulative mass before/after this item
        double x0, x1;      // spatial extent (x0 == x1 for an atom)
        double w;           // density on a segment, 0 for an atom
        bool atom;
    };
    std::vector<Item> items_;
    double total_ = 0.0;
};

// One-off helpers built on QuantileIndex.
double quantile(const CircleMeasure& mu, double u);  // u in [0, 1)
std::vector<double> quantile_vector(const CircleMeasure& mu, int N);

// Right-continuous CDF from the origin: mu([0, x]) for x in [0, 1).
double cdf(const CircleMeasure& mu, double x);

// N atoms of mass 1/N at the midpoint quantiles, merged into canonical form
// (coincident quantiles collapse into heavier atoms).
AtomicPart quantize(const CircleMeasure& mu, int N);

// Convex combination; weights must sum to 1 within 1e-12.
CircleMeasure convex_sum(const std::vector<std::pair<double, CircleMeasure>>& terms);

struct AtomEstimate {
    double mass;      // largest candidate atom mass found
    double position;  // where it sits
};

// Empirical atom detector: the largest mass among (a) explicit atoms and
// (b) runs of consecutive quantiles (out of N, circularly) whose extent is
// within width_tol. A run of >= 3 quantiles is the detection threshold used
// by the scanning experiments.
AtomEstimate max_atom_mass(const CircleMeasure& mu, int N, double width_tol);

}  // namespace circleot
