#include "circleot/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace circleot {

namespace {

void require_positive(const InvariantDensity& rho, const char* who) {
    if (rho.n() == 0 || !(rho.min_value() > 0.0))
        throw std::domain_error(std::string(who) + ": density must be positive");
}

double seed_window(int seed, double u) {
    const int k = seed / 2 + 1;
    return (seed % 2 == 0) ? std::sin(kTwoPi * k * u) : 1.0 - std::cos(kTwoPi * k * u);
}

}  // namespace

TrigPoly apply_Ld_fourier(const TrigPoly& v, int d) {
    if (d < 2) throw std::domain_error("apply_Ld_fourier: d must be >= 2");
    if (v.a0 != 0.0)
        throw std::domain_error("apply_Ld_fourier: input must have no constant term");
    TrigPoly out;
    const int K = v.max_freq();
    const int K_out = K / d;
    out.ca.assign(static_cast<std::size_t>(K_out), 0.0);
    out.sb.assign(static_cast<std::size_t>(K_out), 0.0);
    // ca and sb are sized independently, so missing coefficients read as zero.
    auto at = [](const std::vector<double>& c, std::size_t k) {
        return k - 1 < c.size() ? c[k - 1] : 0.0;
    };
    for (int k = 1; k <= K_out; ++k) {
        out.ca[static_cast<std::size_t>(k) - 1] = d * at(v.ca, static_cast<std::size_t>(d) * k);
        out.sb[static_cast<std::size_t>(k) - 1] = d * at(v.sb, static_cast<std::size_t>(d) * k);
    }
    return out;
}

TangentField apply_tilde_L(const ExpandingMap& map, const InvariantDensity& rho,
                           const TangentField& v) {
    require_positive(rho, "apply_tilde_L");
    const int N = v.n();
    const TrigPoly vt = v.trig ? *v.trig : fit_trig(v.samples);
    Eigen::ArrayXd out(N);
    for (int i = 0; i < N; ++i) {
        const double x = static_cast<double>(i) / N;
        const std::vector<double> ys = map.inverse_branches(x);
        double s = 0.0;
        for (double y : ys) s += rho.eval(y) * vt.eval(y);
        out[i] = s / rho.eval(x);
    }
    return TangentField::from_samples(out);
}

TangentField centering(const InvariantDensity& rho, const TangentField& v) {
    require_positive(rho, "centering");
    const int N = v.n();
    // 1/rho is averaged on v's own grid so that the correction term has grid
    // mean exactly I_v and the output mean cancels to rounding.
    Eigen::ArrayXd inv_rho(N);
    for (int i = 0; i < N; ++i) inv_rho[i] = 1.0 / rho.eval(static_cast<double>(i) / N);
    const double I_inv = inv_rho.mean();
    const double I_v = v.lambda_mean;
    Eigen::ArrayXd out = v.samples - (I_v / I_inv) * inv_rho;
    return TangentField::from_samples(out);
}

TangentField apply_derivative(const ExpandingMap& map, const InvariantDensity& rho,
                              const TangentField& v) {
    if (std::fabs(v.lambda_mean) > 1e-8)
        throw std::domain_error("apply_derivative: input field must be lambda-mean-zero");
    return centering(rho, apply_tilde_L(map, rho, v));
}

TangentField apply_adjoint(const ExpandingMap& map, const TangentField& u) {
    const int N = u.n();
    const TrigPoly ut = u.trig ? *u.trig : fit_trig(u.samples);
    Eigen::ArrayXd out(N);
    for (int i = 0; i < N; ++i) {
        const double x = static_cast<double>(i) / N;
        out[i] = map.deriv(x) * ut.eval(map.eval(x));
    }
    return TangentField::from_samples(out);
}

double rho_inner(const InvariantDensity& rho, const Eigen::ArrayXd& f, const Eigen::ArrayXd& g) {
    require_positive(rho, "rho_inner");
    if (f.size() != g.size()) throw std::domain_error("rho_inner: size mismatch");
    const int N = static_cast<int>(f.size());
    double acc = 0.0;
    if (N == rho.n()) {
        acc = (f * g * rho.grid).mean();
    } else {
        for (int i = 0; i < N; ++i)
            acc += f[i] * g[i] * rho.eval(static_cast<double>(i) / N);
        acc /= N;
    }
    return acc;
}

double rho_norm(const InvariantDensity& rho, const Eigen::ArrayXd& f) {
    return std::sqrt(std::max(0.0, rho_inner(rho, f, f)));
}

TrigPoly model_eigenfunction(int d, double alpha, int k0, int L, int K_max) {
    if (d < 2) throw std::domain_error("model_eigenfunction: d must be >= 2");
    if (k0 < 1 || std::gcd(k0, d) != 1)
        throw std::domain_error("model_eigenfunction: k0 must be positive and coprime to d");
    if (!(std::fabs(alpha) < d)) throw std::domain_error("model_eigenfunction: need |alpha| < d");
    if (L < 0) throw std::domain_error("model_eigenfunction: L must be >= 0");
    long long top = k0;
    for (int l = 0; l < L; ++l) {
        top *= d;
        if (top > K_max) throw std::domain_error("model_eigenfunction: k0*d^L exceeds K_max");
    }
    TrigPoly out;
    out.ca.assign(static_cast<std::size_t>(top), 0.0);
    out.sb.assign(static_cast<std::size_t>(top), 0.0);
    long long k = k0;
    double fac = 1.0;
    for (int l = 0; l <= L; ++l) {
        out.ca[static_cast<std::size_t>(k) - 1] += fac;
        k *= d;
        fac *= alpha / d;
    }
    // Degenerate weights (alpha = 0) kill every rung above k0; drop the
    // padding so max_freq reports the tone content, not the allocation.
    out.trim(0.0);
    return out;
}

int eigenfield_depth(int d) {
    if (d < 2) throw std::domain_error("eigenfield_depth: d must be >= 2");
    int L = 0;
    double t = 1.0;
    while (t > 2e-6) {
        t /= d;
        ++L;
    }
    return L;
}

Eigen::ArrayXd eigenfield_seed_samples(const ExpandingMap& map, const InvariantDensity& rho,
                                       int seed, int L, int M) {
    require_positive(rho, "eigenfield_seed_samples");
    if (seed < 0 || seed > 7) throw std::domain_error("eigenfield_seed_samples: seed in 0..7");
    const int d = map.degree;
    std::vector<double> w(d);
    for (int j = 0; j < d; ++j) w[j] = std::cos(kTwoPi * j / d);
    Eigen::ArrayXd out(M);
    for (int i = 0; i < M; ++i) {
        double cur = static_cast<double>(i) / M;
        double F = 0.0, fac = 1.0;
        for (int l = 0; l <= L; ++l) {
            const int b = map.branch_of(cur);
            const double nxt = map.eval(cur);
            F += fac * w[b] * seed_window(seed, nxt);
            fac /= d;
            cur = nxt;
        }
        out[i] = F / rho.eval(static_cast<double>(i) / M);
    }
    return out;
}

namespace {

// v(y) for a combo field, via exact orbit evaluation of the telescoped
// series (no band-limiting): used for honest residual measurement.
double combo_value(const ExpandingMap& map, const EigenfunctionResult::Combo& c,
                   const std::vector<double>& w, int L, double y, double rho_y) {
    double cur = y;
    double Fa = 0.0, Fb = 0.0, fac = 1.0;
    for (int l = 0; l <= L; ++l) {
        const int b = map.branch_of(cur);
        const double nxt = map.eval(cur);
        const double wb = w[b];
        Fa += fac * wb * seed_window(c.seed_a, nxt);
        if (c.seed_b >= 0) Fb += fac * wb * seed_window(c.seed_b, nxt);
        fac /= map.degree;
        cur = nxt;
    }
    return (c.coef_a * Fa + c.coef_b * Fb) / rho_y;
}

}  // namespace

EigenfunctionResult general_eigenfunctions(const ExpandingMap& map, const InvariantDensity& rho,
                                           int N, int count) {
    require_positive(rho, "general_eigenfunctions");
    if (count < 1 || count > 8)
        throw std::domain_error("general_eigenfunctions: count must be in 1..8");
    if (N < 512) throw std::domain_error("general_eigenfunctions: N must be >= 512");
    const int d = map.degree;
    const int L = eigenfield_depth(d);

    constexpr int kSeeds = 8;
    std::vector<Eigen::ArrayXd> U(kSeeds);
    std::vector<double> mean(kSeeds);
    for (int s = 0; s < kSeeds; ++s) {
        U[s] = eigenfield_seed_samples(map, rho, s, L, N);
        mean[s] = U[s].mean();
    }
    int pivot = 0;
    for (int s = 1; s < kSeeds; ++s)
        if (std::fabs(mean[s]) > std::fabs(mean[pivot])) pivot = s;
    const bool all_tiny = std::fabs(mean[pivot]) <= 1e-12;

    // Candidate mean-zero fields: seeds with tiny mean pass through; others
    // are combined with the pivot (m_p * u_s - m_s * u_p has exact zero mean).
    struct Candidate {
        Eigen::ArrayXd samples;
        EigenfunctionResult::Combo combo;
    };
    std::vector<Candidate> cand;
    for (int s = 0; s < kSeeds; ++s) {
        if (s == pivot && !all_tiny) continue;
        Candidate c;
        if (all_tiny || std::fabs(mean[s]) <= 1e-12) {
            c.samples = U[s];
            c.combo = {s, 1.0, -1, 0.0};
        } else {
            c.samples = mean[pivot] * U[s] - mean[s] * U[pivot];
            c.combo = {s, mean[pivot], pivot, -mean[s]};
        }
        const double nrm = rho_norm(rho, c.samples);
        if (!(nrm > 1e-12)) continue;
        c.samples /= nrm;
        c.combo.coef_a /= nrm;
        c.combo.coef_b /= nrm;
        cand.push_back(std::move(c));
    }

    // Greedy independence selection: keep a candidate only if every pairwise
    // 2x2 Gram determinant against the already selected fields stays safe.
    EigenfunctionResult result;
    result.L = L;
    std::vector<Eigen::ArrayXd> sel;
    for (const Candidate& c : cand) {
        if (static_cast<int>(sel.size()) >= count) break;
        double min_det = 1.0;
        for (const Eigen::ArrayXd& s : sel) {
            const double ip = rho_inner(rho, c.samples, s);
            min_det = std::min(min_det, 1.0 - ip * ip);
        }
        if (min_det < 1e-3) continue;
        sel.push_back(c.samples);
        result.combos.push_back(c.combo);
        result.min_pairwise_gram_det = std::min(result.min_pairwise_gram_det, min_det);
    }

    // Honest residual: apply the centered transfer with exact orbit
    // evaluation of v at the preimages, then measure in L2(rho lambda).
    std::vector<double> wts(d);
    for (int j = 0; j < d; ++j) wts[j] = std::cos(kTwoPi * j / d);
    Eigen::ArrayXd inv_rho(N), rho_x(N);
    for (int i = 0; i < N; ++i) {
        rho_x[i] = rho.eval(static_cast<double>(i) / N);
        inv_rho[i] = 1.0 / rho_x[i];
    }
    const double I_inv = inv_rho.mean();
    for (std::size_t fi = 0; fi < sel.size(); ++fi) {
        const EigenfunctionResult::Combo& c = result.combos[fi];
        Eigen::ArrayXd Lv(N);
        for (int i = 0; i < N; ++i) {
            const double x = static_cast<double>(i) / N;
            const std::vector<double> ys = map.inverse_branches(x);
            double s = 0.0;
            // rho(y) * v(y) = combo numerator, so the density at y cancels.
            for (double y : ys) s += combo_value(map, c, wts, L, y, 1.0);
            Lv[i] = s * inv_rho[i];
        }
        const double I_Lv = Lv.mean();
        Eigen::ArrayXd centered = Lv - (I_Lv / I_inv) * inv_rho;
        result.residuals.push_back(rho_norm(rho, centered - sel[fi]));
        result.fields.push_back(TangentField::from_samples(sel[fi]));
    }
    return result;
}

OperatorMatrix transfer_matrix(const ExpandingMap& map, const InvariantDensity& rho, int N) {
    require_positive(rho, "transfer_matrix");
    if (N < 4 || N % 2 != 0) throw std::domain_error("transfer_matrix: N must be even, >= 4");
    auto kernel = [N](double t) {
        const double s = t - std::round(t);
        if (std::fabs(s) < 1e-12) return 1.0;
        return std::sin(kPi * N * s) * std::cos(kPi * s) / (N * std::sin(kPi * s));
    };
    OperatorMatrix M;
    M.N = N;
    M.entries = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        const double x = static_cast<double>(i) / N;
        const std::vector<double> ys = map.inverse_branches(x);
        const double rx = rho.eval(x);
        for (double y : ys) {
            const double wy = rho.eval(y) / rx;
            for (int j = 0; j < N; ++j)
                M.entries(i, j) += wy * kernel(y - static_cast<double>(j) / N);
        }
    }
    return M;
}

double estimate_Rg(const ExpandingMap& map, const InvariantDensity& rho, int n) {
    require_positive(rho, "estimate_Rg");
    if (n < 1) throw std::domain_error("estimate_Rg: n must be >= 1");
    const int N = rho.n();
    if (N < 4 || (N & (N - 1)) != 0)
        throw std::domain_error("estimate_Rg: density grid must be a power of two");
    TrigPoly cur = rho.trig;
    Eigen::ArrayXd vals(N);
    for (int level = 0; level < n; ++level) {
        for (int i = 0; i < N; ++i) {
            const double x = static_cast<double>(i) / N;
            const std::vector<double> ys = map.inverse_branches(x);
            double s = 0.0;
            for (double y : ys) s += cur.eval(y);
            vals[i] = s;
        }
        if (level + 1 < n) cur = fit_trig(vals, 1e-13);
    }
    double best = 0.0;
    for (int i = 0; i < N; ++i) best = std::max(best, vals[i] / rho.grid[i]);
    return std::pow(best, 1.0 / n);
}

}  // namespace circleot
