// L^p optimal transport on the circle via equal-mass quantization: both
// measures are reduced to N midpoint quantiles and the optimum over the N
// cyclic pairings is taken exactly.
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "circleot/dynamics.hpp"
#include "circleot/measure.hpp"

namespace circleot {

struct TransportResult {
    double cost = 0.0;  // W_p estimate
    double p = 2.0;
    int shift = 0;  // optimal cyclic offset of the nu-quantiles
    int N = 0;      // quantization size
    // (x, y) matched pairs of quantile positions; filled only on request
    std::vector<std::pair<double, double>> pairs;
};

// W_p(mu, nu) for p >= 1. Both measures must have total mass 1 (tolerance
// 1e-9). Error decays like N^-2 for densities; exact for atomic measures
// whose masses are multiples of 1/N with atoms away from quantile boundaries.
// Ties between shifts resolve to the smallest shift.
TransportResult wasserstein(const CircleMeasure& mu, const CircleMeasure& nu, double p,
                            int N = 4096, bool with_pairs = false);

// Exact W_p between purely atomic measures by exhaustive matching: equal-mass
// lists of size <= 9 go through all bijections, general lists of size <= 12
// through successive-shortest-path min-cost flow. Oracle for `wasserstein`.
double brute_force_wasserstein(const CircleMeasure& a, const CircleMeasure& b, double p);

struct BowenReport {
    bool separated = false;
    std::size_t i = 0;  // indices of the closest pair
    std::size_t j = 0;
    double min_bowen = 0.0;  // min over pairs of max_{0<=k<=n} W_p(Phi^k mu, Phi^k nu)
};

// Checks that every pair in S is (n, eps)-separated in the Bowen-style
// metric max_{0<=k<=n} W_p(Phi^k# mu, Phi^k# nu).
BowenReport bowen_separation_check(const std::vector<CircleMeasure>& S, const ExpandingMap& map,
                                   int n, double p, double eps, int N = 4096);

}  // namespace circleot
