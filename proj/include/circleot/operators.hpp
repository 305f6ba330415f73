// First-order operators at the invariant measure: the Fourier-side action of
// the model transfer operator, the weighted transfer operator on grid fields,
// the centering projection, the full derivative of the pushforward, its
// adjoint, eigenfunction constructions, and the growth-rate estimate R_g.
#pragma once

#include <vector>

#include "circleot/dynamics.hpp"
#include "circleot/field.hpp"

namespace circleot {

// Action of the degree-d model transfer operator on a trig polynomial with no
// constant term: output coefficient k equals d times input coefficient dk;
// frequencies not divisible by d are annihilated. Exact coefficient shifts.
TrigPoly apply_Ld_fourier(const TrigPoly& v, int d);

// Weighted transfer operator (tilde-L v)(x) = sum_{Phi(y)=x} rho(y) v(y) / rho(x).
// v is evaluated band-limited at the preimages (its trig interpolant).
TangentField apply_tilde_L(const ExpandingMap& map, const InvariantDensity& rho,
                           const TangentField& v);

// Centering projection: v - (integral of v dlambda) / (rho(x) * integral of
// 1/rho dlambda). Output has grid mean exactly zero and induces the same
// first-order density evolution as v.
TangentField centering(const InvariantDensity& rho, const TangentField& v);

// Derivative of the pushforward at the invariant measure: centering applied
// after the weighted transfer. Requires lambda-mean-zero input (|mean| <= 1e-8).
TangentField apply_derivative(const ExpandingMap& map, const InvariantDensity& rho,
                              const TangentField& v);

// Adjoint of the derivative in L2(rho lambda): u -> Phi'(x) * u(Phi(x)).
TangentField apply_adjoint(const ExpandingMap& map, const TangentField& u);

// Inner product <f, g> in L2(rho lambda) by uniform-grid quadrature; f and g
// are samples on the same uniform grid (any size; rho is synthesized there).
double rho_inner(const InvariantDensity& rho, const Eigen::ArrayXd& f, const Eigen::ArrayXd& g);
double rho_norm(const InvariantDensity& rho, const Eigen::ArrayXd& f);

// Lacunary eigenfunction sum_{l=0}^{L} (alpha/d)^l cos(2 pi k0 d^l x) of the
// model operator, eigenvalue alpha, |alpha| < d, gcd(k0, d) = 1. The top
// frequency k0*d^L must not exceed K_max.
TrigPoly model_eigenfunction(int d, double alpha, int k0, int L, int K_max = 1 << 20);

// Minimal telescoping depth L with d^-L <= 2e-6 (residual budget for the
// constructive eigenfields below).
int eigenfield_depth(int d);

// Samples on the M-grid of the telescoped series F(x)/rho(x) where
// F = sum_{l<=L} d^-l f(Phi^l x) and f(y) = w_{branch(y)} * g(Phi y) with
// branch weights w_j = cos(2 pi j / d) (zero-sum) and seed window g:
// seed = 2*(k-1) + type, k in 1..4, type 0 -> g = sin(2 pi k u),
// type 1 -> g = 1 - cos(2 pi k u). Since the plain transfer annihilates f,
// the field v = F/rho satisfies tilde-L v = v - d^-L (f o Phi^L)/rho exactly.
Eigen::ArrayXd eigenfield_seed_samples(const ExpandingMap& map, const InvariantDensity& rho,
                                       int seed, int L, int M);

struct EigenfunctionResult {
    // Each returned field is coef_a * seed_a + coef_b * seed_b of the raw
    // telescoped seed fields (normalization folded into the coefficients),
    // which lets callers re-evaluate it exactly on any grid.
    struct Combo {
        int seed_a = 0;
        double coef_a = 1.0;
        int seed_b = -1;  // -1: single-seed field
        double coef_b = 0.0;
    };
    std::vector<TangentField> fields;   // unit L2(rho lambda) norm, grid mean ~0
    std::vector<double> residuals;      // |apply_derivative(v) - v| in L2(rho lambda)
    std::vector<Combo> combos;
    double min_pairwise_gram_det = 1.0;  // min over pairs of 1 - <vi,vj>^2 (unit fields)
    int L = 0;                           // telescoping depth used
};

// Constructive fixed fields of the derivative operator: up to `count`
// independent lambda-mean-zero fields with certified residuals (measured by
// honest operator application with exact orbit evaluation at preimages).
// Returns fewer fields when independence pruning leaves fewer candidates.
EigenfunctionResult general_eigenfunctions(const ExpandingMap& map, const InvariantDensity& rho,
                                           int N, int count);

// Dense collocation matrix of the weighted transfer operator on an even-N
// uniform grid, using the trigonometric (Dirichlet) interpolation kernel, so
// its action on band-limited fields matches the operator to spectral accuracy.
struct OperatorMatrix {
    Eigen::MatrixXd entries;
    int N = 0;
};
OperatorMatrix transfer_matrix(const ExpandingMap& map, const InvariantDensity& rho, int N);

// Growth rate of the plain preimage sum: (sup_x (P^n rho)(x)/rho(x))^(1/n)
// where (P f)(x) = sum_{Phi(y)=x} f(y), evaluated level by level on rho's grid
// with a spectral refit after each level. Equals d exactly for model maps.
double estimate_Rg(const ExpandingMap& map, const InvariantDensity& rho, int n);

}  // namespace circleot
