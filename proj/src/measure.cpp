#include "circleot/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace circleot {

double AtomicPart::total() const {
    double s = 0.0;
    for (double m : mass) s += m;
    return s;
}

void AtomicPart::validate() const {
    if (pos.size() != mass.size()) throw std::domain_error("AtomicPart: size mismatch");
    for (std::size_t i = 0; i < pos.size(); ++i) {
        if (!(pos[i] >= 0.0 && pos[i] < 1.0)) throw std::domain_error("AtomicPart: position outside [0,1)");
        if (!(mass[i] > 0.0)) throw std::domain_error("AtomicPart: nonpositive mass");
        if (i > 0 && !(pos[i] > pos[i - 1])) throw std::domain_error("AtomicPart: positions not strictly increasing");
    }
    if (total() > 1.0 + 1e-12) throw std::domain_error("AtomicPart: total mass exceeds 1");
}

AtomicPart make_atomic(std::vector<std::pair<double, double>> atoms, double merge_tol) {
    std::vector<std::pair<double, double>> kept;
    kept.reserve(atoms.size());
    for (auto& [p, m] : atoms)
        if (m > 0.0) kept.emplace_back(wrap01(p), m);
    std::sort(kept.begin(), kept.end());

    AtomicPart out;
    std::size_t i = 0;
    while (i < kept.size()) {
        double msum = kept[i].second;
        double wpos = kept[i].first * kept[i].second;
        double anchor = kept[i].first;
        std::size_t j = i + 1;
        while (j < kept.size() && kept[j].first - anchor <= merge_tol) {
            msum += kept[j].second;
            wpos += kept[j].first * kept[j].second;
            anchor = kept[j].first;
            ++j;
        }
        out.pos.push_back(wpos / msum);
        out.mass.push_back(msum);
        i = j;
    }
    // merge across the wrap point if the first and last clusters touch mod 1
    while (out.pos.size() >= 2 && (out.pos.front() + 1.0) - out.pos.back() <= merge_tol) {
        const double m0 = out.mass.front(), m1 = out.mass.back();
        const double p = wrap01(((out.pos.front() + 1.0) * m0 + out.pos.back() * m1) / (m0 + m1));
        out.pos.erase(out.pos.begin());
        out.mass.erase(out.mass.begin());
        out.pos.back() = p;
        out.mass.back() = m0 + m1;
        std::rotate(out.pos.begin(), out.pos.end() - 1, out.pos.end());
        std::rotate(out.mass.begin(), out.mass.end() - 1, out.mass.end());
        if (out.pos.size() >= 2 && !(out.pos.front() < out.pos[1])) {
            // merged position landed past the next atom; fold them together
            std::vector<std::pair<double, double>> redo;
            for (std::size_t k = 0; k < out.pos.size(); ++k) redo.emplace_back(out.pos[k], out.mass[k]);
            return make_atomic(std::move(redo), merge_tol);
        }
    }
    return out;
}

double StepDensity::total() const {
    double s = 0.0;
    for (std::size_t i = 0; i < bp.size(); ++i) {
        const double hi = (i + 1 < bp.size()) ? bp[i + 1] : 1.0;
        s += val[i] * (hi - bp[i]);
    }
    return s;
}

double StepDensity::value_at(double x) const {
    x = wrap01(x);
    auto it = std::upper_bound(bp.begin(), bp.end(), x);
    return val[static_cast<std::size_t>(it - bp.begin()) - 1];
}

void StepDensity::validate() const {
    if (bp.empty() || bp.size() != val.size()) throw std::domain_error("StepDensity: size mismatch");
    if (bp.front() != 0.0) throw std::domain_error("StepDensity: first breakpoint must be 0");
    for (std::size_t i = 0; i < bp.size(); ++i) {
        if (!(bp[i] >= 0.0 && bp[i] < 1.0)) throw std::domain_error("StepDensity: breakpoint outside [0,1)");
        if (i > 0 && !(bp[i] > bp[i - 1])) throw std::domain_error("StepDensity: breakpoints not increasing");
        if (!(val[i] >= 0.0)) throw std::domain_error("StepDensity: negative density");
    }
}

StepDensity StepDensity::uniform(double height) {
    StepDensity d;
    d.bp = {0.0};
    d.val = {height};
    return d;
}

StepDensity StepDensity::zero() { return uniform(0.0); }

void CircleMeasure::validate(double tol) const {
    atomic.validate();
    density.validate();
    if (std::fabs(total_mass() - 1.0) > tol)
        throw std::domain_error("CircleMeasure: total mass is not 1");
}

CircleMeasure CircleMeasure::uniform() { return from_density(StepDensity::uniform()); }

CircleMeasure CircleMeasure::dirac(double x) {
    CircleMeasure m;
    m.atomic.pos = {wrap01(x)};
    m.atomic.mass = {1.0};
    m.density = StepDensity::zero();
    return m;
}

CircleMeasure CircleMeasure::from_atomic(AtomicPart a) {
    CircleMeasure m;
    m.atomic = std::move(a);
    m.density = StepDensity::zero();
    return m;
}

CircleMeasure CircleMeasure::from_density(StepDensity d) {
    CircleMeasure m;
    m.density = std::move(d);
    return m;
}

QuantileIndex::QuantileIndex(const CircleMeasure& mu) {
    const AtomicPart& a = mu.atomic;
    const StepDensity& d = mu.density;
    double cum = 0.0;
    std::size_t ai = 0;

    auto push_atom = [&](std::size_t idx) {
        Item it;
        it.cum0 = cum;
        cum += a.mass[idx];
        it.cum1 = cum;
        it.x0 = it.x1 = a.pos[idx];
        it.w = 0.0;
        it.atom = true;
        items_.push_back(it);
    };
    auto push_segment = [&](double x0, double x1, double w) {
        if (!(x1 > x0) || w <= 0.0) return;  // flat CDF stretches carry no items
        Item it;
        it.cum0 = cum;
        cum += w * (x1 - x0);
        it.cum1 = cum;
        it.x0 = x0;
        it.x1 = x1;
        it.w = w;
        it.atom = false;
        items_.push_back(it);
    };

    for (std::size_t ci = 0; ci < d.cells(); ++ci) {
        const double lo = d.bp[ci];
        const double hi = (ci + 1 < d.cells()) ? d.bp[ci + 1] : 1.0;
        double cursor = lo;
        // atoms at the cell's left edge (or inside it) interleave with the cell
        while (ai < a.size() && a.pos[ai] < hi) {
            push_segment(cursor, a.pos[ai], d.val[ci]);
            cursor = a.pos[ai];
            push_atom(ai);
            ++ai;
        }
        push_segment(cursor, hi, d.val[ci]);
    }
    while (ai < a.size()) push_atom(ai++);  // defensively; positions are < 1
    total_ = cum;
    if (!(total_ > 0.0)) throw std::domain_error("QuantileIndex: zero total mass");
}

double QuantileIndex::quantile(double u) const {
    if (!(u > 0.0)) return items_.front().x0;
    if (u > total_) u = total_;
    // first item with cum1 >= u
    std::size_t lo = 0, hi = items_.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (items_[mid].cum1 >= u)
            hi = mid;
        else
            lo = mid + 1;
    }
    const Item& it = items_[lo];
    if (it.atom) return it.x0;
    const double x = it.x0 + (u - it.cum0) / it.w;
    return std::min(std::max(x, it.x0), it.x1);
}

std::vector<double> QuantileIndex::quantile_vector(int N) const {
    if (N < 1) throw std::domain_error("quantile_vector: N must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(N));
    std::size_t j = 0;
    for (int i = 0; i < N; ++i) {
        const double u = (static_cast<double>(i) + 0.5) / N * total_;
        while (j + 1 < items_.size() && items_[j].cum1 < u) ++j;
        const Item& it = items_[j];
        if (it.atom) {
            out[static_cast<std::size_t>(i)] = it.x0;
        } else {
            const double x = it.x0 + (u - it.cum0) / it.w;
            out[static_cast<std::size_t>(i)] = std::min(std::max(x, it.x0), it.x1);
        }
    }
    return out;
}

double quantile(const CircleMeasure& mu, double u) {
    if (!(u >= 0.0 && u < 1.0)) throw std::domain_error("quantile: u outside [0,1)");
    if (u == 0.0) return 0.0;  // every CDF value is >= 0, so the infimum is the origin
    return QuantileIndex(mu).quantile(u);
}

std::vector<double> quantile_vector(const CircleMeasure& mu, int N) {
    return QuantileIndex(mu).quantile_vector(N);
}

double cdf(const CircleMeasure& mu, double x) {
    if (!(x >= 0.0 && x < 1.0)) throw std::domain_error("cdf: x outside [0,1)");
    double s = 0.0;
    for (std::size_t i = 0; i < mu.atomic.size() && mu.atomic.pos[i] <= x; ++i) s += mu.atomic.mass[i];
    const StepDensity& d = mu.density;
    for (std::size_t ci = 0; ci < d.cells() && d.bp[ci] <= x; ++ci) {
        const double hi = (ci + 1 < d.cells()) ? d.bp[ci + 1] : 1.0;
        s += d.val[ci] * (std::min(hi, x) - d.bp[ci]);
    }
    return s;
}

AtomicPart quantize(const CircleMeasure& mu, int N) {
    if (N < 1) throw std::domain_error("quantize: N must be >= 1");
    const std::vector<double> q = quantile_vector(mu, N);
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(q.size());
    const double m = 1.0 / N;
    for (double x : q) atoms.emplace_back(x, m);
    return make_atomic(std::move(atoms));
}

CircleMeasure convex_sum(const std::vector<std::pair<double, CircleMeasure>>& terms) {
    if (terms.empty()) throw std::domain_error("convex_sum: no terms");
    double wsum = 0.0;
    for (const auto& [w, mu] : terms) {
        if (!(w > 0.0)) throw std::domain_error("convex_sum: weights must be positive");
        wsum += w;
    }
    if (std::fabs(wsum - 1.0) > 1e-12) throw std::domain_error("convex_sum: weights must sum to 1");

    std::vector<std::pair<double, double>> atoms;
    std::vector<double> cuts = {0.0};
    for (const auto& [w, mu] : terms) {
        for (std::size_t i = 0; i < mu.atomic.size(); ++i)
            atoms.emplace_back(mu.atomic.pos[i], w * mu.atomic.mass[i]);
        cuts.insert(cuts.end(), mu.density.bp.begin(), mu.density.bp.end());
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    StepDensity dens;
    dens.bp = cuts;
    dens.val.resize(cuts.size(), 0.0);
    for (std::size_t ci = 0; ci < cuts.size(); ++ci) {
        const double lo = cuts[ci];
        const double hi = (ci + 1 < cuts.size()) ? cuts[ci + 1] : 1.0;
        const double mid = 0.5 * (lo + hi);
        double v = 0.0;
        for (const auto& [w, mu] : terms) v += w * mu.density.value_at(mid);
        dens.val[ci] = v;
    }

    CircleMeasure out;
    out.atomic = make_atomic(std::move(atoms));
    out.density = std::move(dens);
    return out;
}

AtomEstimate max_atom_mass(const CircleMeasure& mu, int N, double width_tol) {
    if (N < 16) throw std::domain_error("max_atom_mass: N must be >= 16");
    AtomEstimate best{0.0, 0.0};
    for (std::size_t i = 0; i < mu.atomic.size(); ++i) {
        if (mu.atomic.mass[i] > best.mass) best = {mu.atomic.mass[i], mu.atomic.pos[i]};
    }
    const std::vector<double> q = quantile_vector(mu, N);
    // circular runs: duplicate the quantile list shifted by one period
    const std::size_t n = q.size();
    auto at = [&](std::size_t i) { return i < n ? q[i] : q[i - n] + 1.0; };
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (j < i) j = i;
        while (j + 1 < i + n && at(j + 1) - at(i) <= width_tol) ++j;
        const double run_mass = static_cast<double>(j - i + 1) / static_cast<double>(n);
        if (run_mass > best.mass) best = {run_mass, wrap01(at(i + (j - i) / 2))};
    }
    return best;
}

}  // namespace circleot
