#include "circleot/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace circleot {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

ExpandingMap::ExpandingMap(int d, double eps) : degree(d), epsilon(eps) {
    if (d < 2) throw std::domain_error("ExpandingMap: degree must be >= 2");
    if (!(std::fabs(eps) <= d - 1 - 1e-6))
        throw std::domain_error("ExpandingMap: |epsilon| must be <= degree - 1 - 1e-6");
    branch_ends.resize(d + 1);
    branch_ends[0] = 0.0;
    branch_ends[d] = 1.0;
    for (int j = 1; j < d; ++j) {
        // Solve lift(c) = j by safeguarded Newton on [0, 1].
        double lo = 0.0, hi = 1.0;
        double c = static_cast<double>(j) / d;
        const double target = j;
        for (int it = 0; it < 200; ++it) {
            const double f = lift(c) - target;
            if (f == 0.0) break;
            if (f > 0.0)
                hi = c;
            else
                lo = c;
            double step = c - f / deriv(c);
            if (!(step > lo && step < hi)) step = 0.5 * (lo + hi);
            if (step == c) break;
            c = step;
            if (hi - lo <= 4e-16 * std::max(1.0, c)) break;
        }
        branch_ends[j] = c;
    }
}

double ExpandingMap::eval(double x) const { return wrap01(lift(x) - std::floor(lift(x))); }

int ExpandingMap::branch_of(double y) const {
    if (!(y >= 0.0 && y < 1.0)) throw std::domain_error("branch_of: point outside [0,1)");
    auto it = std::upper_bound(branch_ends.begin(), branch_ends.end(), y);
    int j = static_cast<int>(it - branch_ends.begin()) - 1;
    return std::clamp(j, 0, degree - 1);
}

std::vector<double> ExpandingMap::inverse_branches(double x) const {
    if (!(x >= 0.0 && x < 1.0)) throw std::domain_error("inverse_branches: point outside [0,1)");
    std::vector<double> out(degree);
    if (epsilon == 0.0) {
        for (int j = 0; j < degree; ++j) out[j] = (x + j) / degree;
        return out;
    }
    for (int j = 0; j < degree; ++j) {
        const double target = x + j;
        double lo = branch_ends[j], hi = branch_ends[j + 1];
        double y = 0.5 * (lo + hi);
        double f = lift(y) - target;
        for (int it = 0; it < 50 && std::fabs(f) > 1e-14; ++it) {
            if (f > 0.0)
                hi = y;
            else
                lo = y;
            double step = y - f / deriv(y);
            if (!(step > lo && step < hi)) step = 0.5 * (lo + hi);
            if (step == y) break;
            y = step;
            f = lift(y) - target;
        }
        if (std::fabs(f) > 1e-12)
            throw std::runtime_error("inverse_branches: Newton failed to converge");
        out[j] = y;
    }
    return out;
}

PiecewiseLinearMap ExpandingMap::linearize(int M) const {
    if (epsilon == 0.0) {
        PiecewiseLinearMap T;
        T.cells = {{0.0, 1.0, 0.0, static_cast<double>(degree)}};
        return T;
    }
    return PiecewiseLinearMap::from_lift(M, degree, [this](double x) { return lift(x); });
}

StepDensity InvariantDensity::to_step(int M) const {
    if (!is_pow2(M)) throw std::domain_error("to_step: M must be a power of two");
    std::vector<double> v(M);
    double mean = 0.0;
    for (int i = 0; i < M; ++i) {
        v[i] = std::max(0.0, trig.eval((i + 0.5) / M));
        mean += v[i];
    }
    mean /= M;
    if (!(mean > 0.0)) throw std::runtime_error("to_step: density has nonpositive mean");
    StepDensity d;
    d.bp.resize(M);
    d.val.resize(M);
    for (int i = 0; i < M; ++i) {
        d.bp[i] = static_cast<double>(i) / M;
        d.val[i] = v[i] / mean;
    }
    return d;
}

InvariantDensity invariant_density(const ExpandingMap& map, int N, double tol, int max_iter) {
    if (!is_pow2(N) || N < 256)
        throw std::domain_error("invariant_density: N must be a power of two >= 256");
    if (!(tol > 0.0)) throw std::domain_error("invariant_density: tol must be positive");

    // Stencil: f(y) at a preimage y is read off the grid by linear
    // interpolation, so one transfer step is a fixed sparse linear map.
    struct Tap {
        int k;
        double theta;
        double w;
    };
    const int d = map.degree;
    std::vector<Tap> taps(static_cast<std::size_t>(N) * d);
    for (int i = 0; i < N; ++i) {
        const std::vector<double> ys = map.inverse_branches(static_cast<double>(i) / N);
        for (int j = 0; j < d; ++j) {
            const double y = ys[j];
            const double t = y * N;
            int k = static_cast<int>(std::floor(t));
            double theta = t - k;
            if (k >= N) {
                k = N - 1;
                theta = 1.0;
            }
            taps[static_cast<std::size_t>(i) * d + j] = {k, theta, 1.0 / map.deriv(y)};
        }
    }

    Eigen::ArrayXd f = Eigen::ArrayXd::Ones(N), g(N);
    InvariantDensity out;
    double res = 0.0;
    int it = 0;
    for (; it < max_iter; ++it) {
        res = 0.0;
        for (int i = 0; i < N; ++i) {
            double s = 0.0;
            for (int j = 0; j < d; ++j) {
                const Tap& tp = taps[static_cast<std::size_t>(i) * d + j];
                const double fk = f[tp.k];
                const double fk1 = f[(tp.k + 1 == N) ? 0 : tp.k + 1];
                s += tp.w * ((1.0 - tp.theta) * fk + tp.theta * fk1);
            }
            g[i] = s;
            res = std::max(res, std::fabs(s - f[i]));
        }
        std::swap(f, g);
        out.residual_history.push_back(res);
        if (res <= tol) {
            ++it;
            break;
        }
    }
    if (res > tol) {
        std::ostringstream msg;
        msg << "invariant_density: no convergence after " << max_iter
            << " iterations, residual " << res;
        throw std::runtime_error(msg.str());
    }
    f /= f.mean();
    out.grid = f;
    out.trig = fit_trig(f, 1e-13);
    out.residual = res;
    out.iterations = it;
    return out;
}

CircleMeasure push_forward(const CircleMeasure& mu, const ExpandingMap& map, int refinement) {
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(mu.atomic.size());
    for (std::size_t i = 0; i < mu.atomic.size(); ++i)
        atoms.emplace_back(map.eval(mu.atomic.pos[i]), mu.atomic.mass[i]);

    CircleMeasure out;
    if (mu.density.cells() > 0) {
        CircleMeasure dens_only = CircleMeasure::from_density(mu.density);
        CircleMeasure pushed = push_forward(dens_only, map.linearize(refinement));
        // An expanding map never collapses an interval, so the pushed density
        // part cannot produce atoms of its own.
        for (std::size_t i = 0; i < pushed.atomic.size(); ++i)
            atoms.emplace_back(pushed.atomic.pos[i], pushed.atomic.mass[i]);
        out.density = pushed.density;
    }
    out.atomic = make_atomic(atoms);

    const double lost = std::fabs(out.total_mass() - mu.total_mass());
    if (lost > 1e-11 * std::max(1.0, mu.total_mass()))
        throw std::logic_error("push_forward(map): mass not conserved");
    return out;
}

CircleMeasure iterate_pushforward(CircleMeasure mu, const ExpandingMap& map, int k,
                                  int refinement) {
    if (k < 0) throw std::domain_error("iterate_pushforward: k must be >= 0");
    for (int i = 0; i < k; ++i) mu = push_forward(mu, map, refinement);
    return mu;
}

}  // namespace circleot
