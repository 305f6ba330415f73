// Shared numeric helpers: circle arithmetic, deterministic RNG, small fits.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace circleot {

// Reduce a real number to the fundamental domain [0, 1) of R/Z.
inline double wrap01(double x) {
    double y = x - std::floor(x);
    if (y >= 1.0) y -= 1.0;  // x just below an integer can round up to 1.0
    if (y < 0.0) y = 0.0;
    return y;
}

// Geodesic distance on the unit-circumference circle, always in [0, 1/2].
inline double circle_distance(double x, double y) {
    double d = std::fabs(wrap01(x) - wrap01(y));
    return d <= 0.5 ? d : 1.0 - d;
}

inline double sqr(double x) { return x * x; }

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

// Deterministic uniform sampler. The engine is the standard 64-bit Mersenne
// twister; the float mapping is fixed here (top 53 bits) instead of relying on
// std::uniform_real_distribution, whose output is implementation defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection-free modulo is fine here: n is tiny compared to 2^64 in
        // every use (tuple subsampling, index shuffles), bias < 2^-40.
        return eng_() % n;
    }

    // Standard normal via Box-Muller on the deterministic uniforms.
    double normal() {
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

  private:
    std::mt19937_64 eng_;
};

// Least-squares slope of log(y) against log(x). Points must be positive.
inline double loglog_slope(const std::vector<std::pair<double, double>>& xy) {
    if (xy.size() < 2) throw std::domain_error("loglog_slope: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : xy) {
        if (!(x > 0.0) || !(y > 0.0))
            throw std::domain_error("loglog_slope: nonpositive sample");
        double lx = std::log(x), ly = std::log(y);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    double n = static_cast<double>(xy.size());
    double denom = n * sxx - sx * sx;
    if (std::fabs(denom) < 1e-30) throw std::domain_error("loglog_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

// Resolution floor for distances computed through N-point quantization.
// Below this scale results are rounding noise; every reported distance in the
// experiment layer carries it. Conservative: ~4 ulp per accumulated term.
inline double quantization_floor(int N) {
    return std::max(1e-13, 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(N));
}

}  // namespace circleot
