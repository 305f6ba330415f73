#include "circleot/piecewise_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace circleot {

namespace {

struct Seg {
    double lo, hi;  // [lo, hi) subset of the real line, hi > lo
    double dens;
};

// Chops a real-line segment into unit-interval pieces and records them as
// density events on [0, 1). Iterates over integer bases rather than advancing
// lo: near a negative base, base + (hi - base) can round back to lo and a
// cursor-style loop stalls on a sub-ulp sliver.
void emit_wrapped(std::vector<std::pair<double, double>>& events, double lo, double hi, double dens) {
    for (double base = std::floor(lo); base < hi; base += 1.0) {
        const double L = std::max(lo - base, 0.0);
        const double R = std::min(hi - base, 1.0);
        if (R > L) {
            events.emplace_back(L, dens);
            events.emplace_back(R, -dens);
        }
    }
}

// Sorts density events and assembles the resulting step density. Events at
// x = 1.0 only close cells that the period end closes anyway.
StepDensity overlay_events(std::vector<std::pair<double, double>>& events) {
    std::sort(events.begin(), events.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    StepDensity out;
    double value = 0.0;
    std::size_t i = 0;
    // opening value at 0
    while (i < events.size() && events[i].first == 0.0) value += events[i++].second;
    out.bp.push_back(0.0);
    out.val.push_back(std::max(value, 0.0));
    while (i < events.size() && events[i].first < 1.0) {
        const double x = events[i].first;
        while (i < events.size() && events[i].first == x) value += events[i++].second;
        const double v = std::max(value, 0.0);
        if (v != out.val.back()) {
            out.bp.push_back(x);
            out.val.push_back(v);
        }
    }
    return out;
}

}  // namespace

void PiecewiseLinearMap::validate() const {
    if (cells.empty()) throw std::domain_error("PiecewiseLinearMap: no cells");
    if (cells.front().a != 0.0) throw std::domain_error("PiecewiseLinearMap: must start at 0");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!(cells[i].a < cells[i].b)) throw std::domain_error("PiecewiseLinearMap: empty cell");
        if (i + 1 < cells.size() && cells[i].b != cells[i + 1].a)
            throw std::domain_error("PiecewiseLinearMap: cells must tile [0,1)");
    }
    if (cells.back().b != 1.0) throw std::domain_error("PiecewiseLinearMap: must end at 1");
}

double PiecewiseLinearMap::eval_lift(double x) const {
    x = wrap01(x);
    std::size_t lo = 0, hi = cells.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi + 1) / 2;
        if (cells[mid].a <= x)
            lo = mid;
        else
            hi = mid - 1;
    }
    const Cell& c = cells[lo];
    if (x == c.a) return c.ga;  // keep grid images exact
    return c.ga + (x - c.a) * ((c.gb - c.ga) / (c.b - c.a));
}

double PiecewiseLinearMap::min_cell_stretch() const {
    double m = std::numeric_limits<double>::infinity();
    for (const Cell& c : cells) m = std::min(m, (c.gb - c.ga) / (c.b - c.a));
    return m;
}

PiecewiseLinearMap PiecewiseLinearMap::displacement(const TangentField& v, double t) {
    const int N = v.n();
    PiecewiseLinearMap T;
    T.cells.resize(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
        Cell& c = T.cells[static_cast<std::size_t>(i)];
        c.a = static_cast<double>(i) / N;
        c.b = static_cast<double>(i + 1) / N;
        c.ga = c.a + t * v.samples[i];
        c.gb = (i + 1 < N) ? c.b + t * v.samples[i + 1] : 1.0 + t * v.samples[0];
    }
    return T;
}

PiecewiseLinearMap PiecewiseLinearMap::displacement(const PiecewiseLinearField& v, double t) {
    v.validate();
    PiecewiseLinearMap T;
    T.cells.reserve(v.pieces.size());
    for (const auto& p : v.pieces) {
        Cell c;
        c.a = p.x0;
        c.b = p.x1;
        c.ga = p.x0 + t * p.v0;
        c.gb = p.x1 + t * (p.v0 + p.slope * (p.x1 - p.x0));
        T.cells.push_back(c);
    }
    return T;
}

PiecewiseLinearMap PiecewiseLinearMap::from_lift(int M, int deg,
                                                 const std::function<double(double)>& lift) {
    if (M < 1) throw std::domain_error("PiecewiseLinearMap::from_lift: M must be >= 1");
    std::vector<double> g(static_cast<std::size_t>(M) + 1);
    for (int i = 0; i < M; ++i) g[static_cast<std::size_t>(i)] = lift(static_cast<double>(i) / M);
    g[static_cast<std::size_t>(M)] = g[0] + deg;  // exact tiling at the period end
    PiecewiseLinearMap T;
    T.cells.resize(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) {
        Cell& c = T.cells[static_cast<std::size_t>(i)];
        c.a = static_cast<double>(i) / M;
        c.b = static_cast<double>(i + 1) / M;
        c.ga = g[static_cast<std::size_t>(i)];
        c.gb = g[static_cast<std::size_t>(i) + 1];
    }
    return T;
}

CircleMeasure push_forward(const CircleMeasure& mu, const PiecewiseLinearMap& T) {
    T.validate();
    std::vector<std::pair<double, double>> atoms_out;
    atoms_out.reserve(mu.atomic.size());
    for (std::size_t i = 0; i < mu.atomic.size(); ++i)
        atoms_out.emplace_back(T.eval(mu.atomic.pos[i]), mu.atomic.mass[i]);

    std::vector<std::pair<double, double>> events;
    const StepDensity& d = mu.density;
    for (const auto& c : T.cells) {
        const double s = (c.gb - c.ga) / (c.b - c.a);
        // locate the density cell containing c.a
        std::size_t ci =
            static_cast<std::size_t>(std::upper_bound(d.bp.begin(), d.bp.end(), c.a) - d.bp.begin()) - 1;
        double u = c.a;
        while (u < c.b) {
            const double cell_hi = (ci + 1 < d.cells()) ? d.bp[ci + 1] : 1.0;
            const double v = std::min(c.b, cell_hi);
            const double w = d.val[ci];
            if (w > 0.0 && v > u) {
                const double gu = (u == c.a) ? c.ga : c.ga + (u - c.a) * s;
                const double gv = (v == c.b) ? c.gb : c.ga + (v - c.a) * s;
                if (gu == gv) {
                    atoms_out.emplace_back(wrap01(gu), w * (v - u));
                } else {
                    const double lo = std::min(gu, gv), hi = std::max(gu, gv);
                    emit_wrapped(events, lo, hi, w * (v - u) / (hi - lo));
                }
            }
            u = v;
            ++ci;
        }
    }

    CircleMeasure out;
    out.atomic = make_atomic(std::move(atoms_out));
    out.density = overlay_events(events);

    const double in_mass = mu.total_mass(), out_mass = out.total_mass();
    if (std::fabs(in_mass - out_mass) > 1e-11 * std::max(1.0, in_mass))
        throw std::logic_error("push_forward: mass conservation violated");
    return out;
}

CircleMeasure exp_map(const CircleMeasure& mu, const TangentField& v, double t) {
    if (t == 0.0) return mu;
    return push_forward(mu, PiecewiseLinearMap::displacement(v, t));
}

StepDensity pushed_density(const StepDensity& rho, const TangentField& v, double t) {
    rho.validate();
    const int N = v.n();
    std::vector<double> g(static_cast<std::size_t>(N) + 1);
    for (int i = 0; i < N; ++i)
        g[static_cast<std::size_t>(i)] = static_cast<double>(i) / N + t * v.samples[i];
    g[static_cast<std::size_t>(N)] = 1.0 + t * v.samples[0];
    for (int i = 0; i < N; ++i)
        if (!(g[static_cast<std::size_t>(i) + 1] > g[static_cast<std::size_t>(i)]))
            throw FoldError("pushed_density: Id + t v is not increasing on some cell");

    // exact rho mass over each grid cell, via the piecewise linear CDF of rho
    std::vector<double> cdf(static_cast<std::size_t>(N) + 1);
    {
        std::size_t ci = 0;
        double acc = 0.0;
        double cursor = 0.0;
        for (int i = 1; i <= N; ++i) {
            const double x = (i == N) ? 1.0 : static_cast<double>(i) / N;
            while (ci + 1 < rho.cells() && rho.bp[ci + 1] <= x) {
                acc += rho.val[ci] * (rho.bp[ci + 1] - cursor);
                cursor = rho.bp[ci + 1];
                ++ci;
            }
            cdf[static_cast<std::size_t>(i)] = acc + rho.val[ci] * (x - cursor);
        }
        // cdf[0] = 0 by construction
    }

    std::vector<std::pair<double, double>> events;
    for (int i = 0; i < N; ++i) {
        const double m = cdf[static_cast<std::size_t>(i) + 1] - cdf[static_cast<std::size_t>(i)];
        if (m <= 0.0) continue;
        const double lo = g[static_cast<std::size_t>(i)], hi = g[static_cast<std::size_t>(i) + 1];
        emit_wrapped(events, lo, hi, m / (hi - lo));
    }
    StepDensity out = overlay_events(events);
    if (std::fabs(out.total() - rho.total()) > 1e-11 * std::max(1.0, rho.total()))
        throw std::logic_error("pushed_density: mass conservation violated");
    return out;
}

}  // namespace circleot
