// Tangent fields on the circle: trigonometric polynomials, grid-sampled
// fields, piecewise linear fields, and the FFT used to move between them.
#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "circleot/common.hpp"

namespace circleot {

// In-place radix-2 complex FFT; size must be a power of two.
void fft_inplace(std::vector<double>& re, std::vector<double>& im, bool inverse);

// Real trigonometric polynomial a0 + sum_k (ca[k-1] cos(2 pi k x) + sb[k-1] sin(2 pi k x)).
struct TrigPoly {
    double a0 = 0.0;
    std::vector<double> ca;  // cosine coefficients, frequency k at index k-1
    std::vector<double> sb;  // sine coefficients, same indexing

    int max_freq() const { return static_cast<int>(std::max(ca.size(), sb.size())); }
    double eval(double x) const;
    double derivative_eval(double x) const;
    // L2(lambda) norm: sqrt(a0^2 + (1/2) sum (ca^2 + sb^2)).
    double l2_norm() const;
    double mean() const { return a0; }
    std::vector<double> sample(int N) const;

    TrigPoly& operator+=(const TrigPoly& o);
    TrigPoly scaled(double c) const;
    void trim(double tol);  // drop trailing coefficients below tol in magnitude

    static TrigPoly constant(double c);
    static TrigPoly cosine(int k, double amp = 1.0);
    static TrigPoly sine(int k, double amp = 1.0);
};

// Least-squares/trig-interpolation fit of N uniform samples (at x = i/N).
// Frequencies above N/2 - 1 are not represented. Coefficients smaller than
// drop_tol * max|coef| are zeroed and trailing zeros trimmed.
TrigPoly fit_trig(const std::vector<double>& samples, double drop_tol = 0.0);
TrigPoly fit_trig(const Eigen::ArrayXd& samples, double drop_tol = 0.0);

// Vector field on the circle, sampled at the uniform grid {i/N}. When the
// field came from a trigonometric polynomial the coefficients ride along so
// downstream code can evaluate it exactly off the grid.
struct TangentField {
    Eigen::ArrayXd samples;
    std::optional<TrigPoly> trig;
    double lambda_mean = 0.0;

    int n() const { return static_cast<int>(samples.size()); }
    bool is_mean_zero(double tol = 1e-10) const { return std::fabs(lambda_mean) <= tol; }
    double l2_grid_norm() const { return std::sqrt(samples.square().mean()); }
    // Checks the samples/coefficient agreement invariant (1e-10) when trig
    // coefficients are present.
    void validate() const;

    static TangentField from_trig(const TrigPoly& p, int N);
    static TangentField from_samples(Eigen::ArrayXd s);
    static TangentField from_samples(const std::vector<double>& s);
    static TangentField zero(int N);
};

// c[0] * vs[0] + c[1] * vs[1] + ...; all fields must share one grid size.
// Trig coefficients combine when every term carries them.
TangentField linear_combination(const std::vector<double>& c, const std::vector<TangentField>& vs);

// Continuous piecewise linear field given by breakpoint pieces; closed-form
// integrals keep the sawtooth construction exact.
struct PiecewiseLinearField {
    struct Piece {
        double x0, x1;   // [x0, x1) subset of [0, 1)
        double v0;       // value at x0 (right limit)
        double slope;
    };
    std::vector<Piece> pieces;  // consecutive, covering [0, 1)

    double eval(double x) const;          // right-continuous evaluation
    double l2_norm_sq() const;            // exact integral of v^2
    double mean() const;                  // exact integral of v
    TrigPoly fourier(int K) const;        // exact projection on frequencies 1..K
    TangentField to_tangent_field(int N) const;
    void validate() const;
};

// The 2k-piece sawtooth: amplitude 1/(4k), slope -1 on the first k pieces of
// width 1/(2k), slope +1 on the last k. Zero mean, no even-frequency content,
// and a closed-form pushforward under the doubling map.
PiecewiseLinearField sawtooth_field(int k);

}  // namespace circleot
