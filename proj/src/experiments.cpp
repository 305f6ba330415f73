#include "circleot/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

#include <Eigen/Eigenvalues>

namespace circleot {

namespace {

// Decreasing copy of a sample grid that must span at least two decades inside
// (0, hi] with at least min_count points.
std::vector<double> checked_grid(const std::vector<double>& t_list, double hi,
                                 std::size_t min_count, const char* who) {
    if (t_list.size() < min_count)
        throw std::domain_error(std::string(who) + ": need at least " +
                                std::to_string(min_count) + " sample values");
    std::vector<double> t = t_list;
    for (double v : t)
        if (!(v > 0.0) || v > hi)
            throw std::domain_error(std::string(who) + ": sample values must lie in (0, " +
                                    std::to_string(hi) + "]");
    std::sort(t.begin(), t.end(), std::greater<double>());
    if (t.front() < 100.0 * (1.0 - 1e-12) * t.back())
        throw std::domain_error(std::string(who) + ": samples must span at least two decades");
    return t;
}

// Least-squares log-log slope over the samples whose distance clears ten
// quantization floors. Returns the number of samples that cleared.
std::size_t fit_above_floor(const std::vector<SlopeSample>& ss, double* slope) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : ss)
        if (s.distance > 10.0 * s.floor) pts.emplace_back(s.t, s.distance);
    *slope = pts.size() >= 2 ? loglog_slope(pts) : 0.0;
    return pts.size();
}

TrigPoly field_interpolant(const TangentField& f) {
    return f.trig ? *f.trig : fit_trig(f.samples, 1e-13);
}

// Band-limited eigenfields for the map x -> d x: with gcd(k0, d) = 1 the
// lacunary sum v = sum_{l=0..L} d^-l tone(k0 d^l x) satisfies
// L v = v - d^-L tone(k0 d^L x), so its relative fixed-point residual is
// d^-L / (sqrt(2) ||v||). Cosine and sine variants at distinct admissible
// base frequencies never share a tone, so the family is orthogonal. The
// explicit band limit matters downstream: drift distances are measured on a
// quantile grid, and content above that grid's resolution would alias into
// exactly the small distances the drift table compares.
struct LacunaryBasis {
    std::vector<TangentField> fields;  // unit L2 norm, lambda-mean zero
    double residual = 0.0;             // worst measured fixed-point residual
    int top_freq = 0;                  // largest frequency any field carries
};

LacunaryBasis model_lacunary_basis(int d, int n) {
    // Smallest depth whose truncation tail keeps the relative residual
    // comfortably inside the 1e-4 eigenfield budget.
    int L = 1;
    double tail = 1.0 / d;
    while (tail * 0.87 > 8e-5) {
        tail /= d;
        ++L;
    }
    std::vector<int> bases;
    for (int c = 1; static_cast<int>(bases.size()) < (n + 1) / 2; ++c)
        if (std::gcd(c, d) == 1) bases.push_back(c);

    long long top = bases.back();
    for (int l = 0; l < L; ++l) top *= d;

    LacunaryBasis out;
    out.top_freq = static_cast<int>(top);
    int field_N = 65536;
    while (field_N < 4 * out.top_freq) field_N *= 2;

    double norm_sq = 0.0;
    double w = 1.0;
    for (int l = 0; l <= L; ++l) {
        norm_sq += 0.5 * w * w;
        w /= d;
    }

    for (int i = 0; i < n; ++i) {
        TrigPoly p = model_eigenfunction(d, 1.0, bases[static_cast<std::size_t>(i) / 2], L,
                                         out.top_freq);
        if (i % 2 == 1) {
            p.sb = std::move(p.ca);
            p.ca.clear();
        }
        TrigPoly unit = p.scaled(1.0 / std::sqrt(norm_sq));
        // Measured, not assumed: run the transfer action and take the defect.
        TrigPoly defect = apply_Ld_fourier(unit, d);
        defect += unit.scaled(-1.0);
        out.residual = std::max(out.residual, defect.l2_norm());
        out.fields.push_back(TangentField::from_trig(unit, field_N));
    }
    return out;
}

}  // namespace

SlopeReport derivative_slope_check(const ExpandingMap& map, const InvariantDensity& rho,
                                   const TangentField& v, const std::vector<double>& t_list,
                                   int N, int density_M, int refinement) {
    if (!v.trig)
        throw std::domain_error("derivative_slope_check: v must carry trig coefficients");
    if (!v.is_mean_zero(1e-8))
        throw std::domain_error("derivative_slope_check: v must be lambda-mean zero");
    std::vector<double> ts = checked_grid(t_list, 0.2, 4, "derivative_slope_check");

    CircleMeasure mu = rho.measure(density_M);
    TangentField dv = apply_derivative(map, rho, v);
    const double fl = quantization_floor(N);

    SlopeReport rep;
    rep.threshold = 1.3;
    for (double t : ts) {
        CircleMeasure left = push_forward(exp_map(mu, v, t), map, refinement);
        CircleMeasure right = exp_map(mu, dv, t);
        rep.samples.push_back({t, wasserstein(left, right, 2.0, N).cost, fl});
        rep.control.push_back({t, wasserstein(left, mu, 2.0, N).cost, fl});
    }

    std::size_t cleared = fit_above_floor(rep.samples, &rep.fitted_slope);
    rep.main_at_floor = cleared == 0;
    bool main_ok = rep.main_at_floor || (cleared >= 2 && rep.fitted_slope >= rep.threshold);

    std::size_t cleared_c = fit_above_floor(rep.control, &rep.control_slope);
    bool control_ok = cleared_c >= 2 && rep.control_slope >= 0.9 && rep.control_slope <= 1.1;

    rep.pass = main_ok && control_ok;
    return rep;
}

SlopeReport convex_split_check(const InvariantDensity& rho, const std::vector<TangentField>& fields,
                               const std::vector<double>& weights,
                               const std::vector<double>& t_list, int N, int density_M) {
    if (fields.empty() || fields.size() != weights.size())
        throw std::domain_error("convex_split_check: need matching nonempty fields and weights");
    double wsum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::domain_error("convex_split_check: weights must be nonnegative");
        wsum += w;
    }
    if (std::fabs(wsum - 1.0) > 1e-12)
        throw std::domain_error("convex_split_check: weights must sum to 1");
    std::vector<double> ts = checked_grid(t_list, 0.2, 4, "convex_split_check");

    CircleMeasure mu = rho.measure(density_M);
    TangentField combo = linear_combination(weights, fields);
    const double fl = quantization_floor(N);

    SlopeReport rep;
    rep.threshold = 1.3;
    for (double t : ts) {
        CircleMeasure lhs = exp_map(mu, combo, t);
        std::vector<std::pair<double, CircleMeasure>> terms;
        for (std::size_t i = 0; i < fields.size(); ++i)
            if (weights[i] > 0.0) terms.emplace_back(weights[i], exp_map(mu, fields[i], t));
        CircleMeasure rhs = convex_sum(terms);
        rep.samples.push_back({t, wasserstein(lhs, rhs, 2.0, N).cost, fl});
    }

    std::size_t cleared = fit_above_floor(rep.samples, &rep.fitted_slope);
    rep.main_at_floor = cleared == 0;
    rep.pass = rep.main_at_floor || (cleared >= 2 && rep.fitted_slope >= rep.threshold);
    return rep;
}

CounterexampleReport non_frechet_counterexample(int k, int N) {
    if (k < 2 || k > 4096)
        throw std::domain_error("non_frechet_counterexample: k must lie in [2, 4096]");

    CounterexampleReport rep;
    rep.k = k;
    rep.norm_expected = 1.0 / (4.0 * k * std::sqrt(3.0));
    rep.lower_bound = 1.0 / (16.0 * k);

    PiecewiseLinearField saw = sawtooth_field(k);
    rep.norm_v = std::sqrt(saw.l2_norm_sq());

    // The doubling transfer operator annihilates the sawtooth: it only has
    // odd-frequency content, and the operator keeps only even frequencies.
    TrigPoly vf = saw.fourier(512);
    vf.a0 = 0.0;  // the sawtooth mean is exactly zero; non-dyadic teeth leave fp dust
    TrigPoly image = apply_Ld_fourier(vf, 2);
    double res = std::fabs(image.a0);
    for (double c : image.ca) res = std::max(res, std::fabs(c));
    for (double s : image.sb) res = std::max(res, std::fabs(s));
    rep.fourier_residual = res;

    // (Id + v)_# lambda, exactly: the slope -1 teeth collapse to atoms of
    // mass 1/(2k), the slope +1 teeth spread to density 1/2.
    CircleMeasure lambda = CircleMeasure::uniform();
    CircleMeasure mu = push_forward(lambda, PiecewiseLinearMap::displacement(saw, 1.0));

    ExpandingMap doubling(2, 0.0);
    CircleMeasure numeric = push_forward(mu, doubling, 8192);

    std::vector<std::pair<double, double>> atoms;
    for (int i = 1; i <= k; ++i)
        atoms.emplace_back((2.0 * i - 1.0) / (2.0 * k), 1.0 / (2.0 * k));
    CircleMeasure closed;
    closed.atomic = make_atomic(std::move(atoms));
    closed.density = StepDensity::uniform(0.5);
    closed.validate();

    rep.pushforward_mismatch = wasserstein(numeric, closed, 2.0, N).cost;
    rep.w_lambda_mu = wasserstein(lambda, numeric, 2.0, N).cost;
    rep.ratio = rep.w_lambda_mu / rep.norm_v;

    rep.pass = std::fabs(rep.norm_v - rep.norm_expected) <= 1e-12 &&
               rep.fourier_residual <= 1e-8 && rep.pushforward_mismatch <= 1e-6 &&
               rep.w_lambda_mu >= rep.lower_bound &&
               rep.ratio >= std::sqrt(3.0) / 4.0 * (1.0 - 1e-9);
    return rep;
}

NearlyInvariantReport nearly_invariant_family(const ExpandingMap& map, int n, double eta,
                                              const std::vector<double>& a_samples, int K,
                                              double eps_drift, int N) {
    if (n < 1 || n > 4)
        throw std::domain_error("nearly_invariant_family: n must lie in [1, 4]");
    if (!(eta > 0.0) || eta > 0.5)
        throw std::domain_error("nearly_invariant_family: eta must lie in (0, 0.5]");
    if (K < 1 || K > 8) throw std::domain_error("nearly_invariant_family: K must lie in [1, 8]");
    if (!(eps_drift > 0.0))
        throw std::domain_error("nearly_invariant_family: eps_drift must be positive");
    // a = 0 gives F(0) = rho lambda exactly; such entries become trivial
    // appendix rows and stay out of the slope fit and the drift gates.
    std::vector<double> positive;
    int zero_entries = 0;
    for (double a : a_samples) {
        if (a == 0.0)
            ++zero_entries;
        else
            positive.push_back(a);
    }
    std::vector<double> as = checked_grid(positive, 0.1, 3, "nearly_invariant_family");

    InvariantDensity rho = invariant_density(map, 2048, 1e-10);

    NearlyInvariantReport rep;
    rep.eps_drift = eps_drift;
    rep.n_fields = n;
    rep.lip = map.degree + std::fabs(map.epsilon);

    std::vector<TangentField> basis;
    int Nq = N;
    if (map.epsilon == 0.0) {
        // The model map admits exact lacunary eigenfields, so use a
        // band-limited family and raise the quantile resolution until the
        // top frequency is resolved four times over. The general
        // construction below hands back fields with frequency content far
        // above any affordable quantile grid, and the unresolved part
        // corrupts the small distances the drift table compares.
        LacunaryBasis lac = model_lacunary_basis(map.degree, n);
        basis = std::move(lac.fields);
        rep.max_residual = lac.residual;
        while (Nq < 4 * lac.top_freq) Nq *= 2;
    } else {
        EigenfunctionResult ef = general_eigenfunctions(map, rho, 65536, n);
        if (static_cast<int>(ef.fields.size()) < n)
            throw std::domain_error("nearly_invariant_family: fewer than n independent eigenfields");
        for (int i = 0; i < n; ++i)
            rep.max_residual = std::max(rep.max_residual, ef.residuals[i]);
        basis.assign(ef.fields.begin(), ef.fields.begin() + n);
    }
    if (rep.max_residual > 1e-4)
        throw std::domain_error("nearly_invariant_family: eigenfield residual exceeds 1e-4");

    CircleMeasure mu = rho.measure(8192);
    const double fl = quantization_floor(Nq);
    rep.slope.threshold = 1.2;
    for (double a : as) {
        std::vector<double> coef(static_cast<std::size_t>(n), eta * a / std::sqrt(double(n)));
        CircleMeasure F = exp_map(mu, linear_combination(coef, basis), 1.0);

        DriftRow row;
        row.a_mag = a;
        CircleMeasure cur = F;
        for (int j = 1; j <= K; ++j) {
            cur = push_forward(cur, map, 8192);
            row.drift.push_back(wasserstein(cur, F, 2.0, Nq).cost);
        }
        for (double dj : row.drift) row.max_ratio = std::max(row.max_ratio, dj / a);
        rep.slope.samples.push_back({a, row.drift.front(), fl});
        rep.rows.push_back(std::move(row));
    }

    std::size_t cleared = fit_above_floor(rep.slope.samples, &rep.slope.fitted_slope);
    rep.slope.main_at_floor = cleared == 0;
    rep.slope.pass = rep.slope.main_at_floor ||
                     (cleared >= 2 && rep.slope.fitted_slope >= rep.slope.threshold);

    double r_hi = rep.rows.front().drift.front() / rep.rows.front().a_mag;
    double r_lo = rep.rows.back().drift.front() / rep.rows.back().a_mag;
    rep.ratio_decay = r_hi / std::max(r_lo, 1e-300);
    bool decay_ok = rep.ratio_decay >= 3.0;

    // K-step drift against the geometric pushforward-Lipschitz sum: each
    // extra step can stretch the deviation by at most lip, so
    // d_j <= (lip^j - 1)/(lip - 1) * d_1, allowing 1 percent plus ten floors.
    bool drift_ok = true;
    for (const auto& row : rep.rows) {
        double d1 = row.drift.front();
        for (int j = 1; j <= K; ++j) {
            double factor = (std::pow(rep.lip, j) - 1.0) / (rep.lip - 1.0);
            if (row.drift[j - 1] > factor * d1 * 1.01 + 10.0 * fl) drift_ok = false;
        }
    }

    rep.r_star = 0.0;
    for (const auto& row : rep.rows)
        if (row.max_ratio <= eps_drift) rep.r_star = std::max(rep.r_star, row.a_mag);

    rep.pass = rep.slope.pass && decay_ok && drift_ok;

    if (zero_entries > 0) {
        DriftRow row;
        row.a_mag = 0.0;
        CircleMeasure cur = mu;
        for (int j = 1; j <= K; ++j) {
            cur = push_forward(cur, map, 8192);
            row.drift.push_back(wasserstein(cur, mu, 2.0, Nq).cost);
        }
        row.max_ratio = 0.0;  // the family does not move at a = 0
        for (int z = 0; z < zero_entries; ++z) rep.rows.push_back(row);
    }
    return rep;
}

SeparatedSetReport mdim_separated_sets(int d, int k, double alpha, double p, int n,
                                       std::uint64_t seed) {
    if (d != 2) throw std::domain_error("mdim_separated_sets: only degree 2 is supported");
    if (k < 1 || k > 4) throw std::domain_error("mdim_separated_sets: k must lie in [1, 4]");
    if (!(alpha > 0.0) || alpha > 2.0)
        throw std::domain_error("mdim_separated_sets: alpha must lie in (0, 2]");
    if (!(p >= 1.0)) throw std::domain_error("mdim_separated_sets: p must be >= 1");
    if (n < 0 || n > 2) throw std::domain_error("mdim_separated_sets: n must lie in [0, 2]");

    double ak = alpha * k;
    long total = std::lround(std::exp2(ak));
    if (std::fabs(std::exp2(ak) - static_cast<double>(total)) > 1e-9 || total < 2)
        throw std::domain_error("mdim_separated_sets: 2^(alpha k) must be an integer >= 2");

    SeparatedSetReport rep;
    rep.d = d;
    rep.k = k;
    rep.alpha = alpha;
    rep.p = p;
    rep.n = n;
    rep.eps = (1.0 / d) * std::exp2(-(k * (alpha / p + 1.0) + 1.0 / p));
    rep.branching = static_cast<int>(total / 2 + 1);

    const double tail_hi = 1.0 - std::ldexp(1.0, -k);            // 1 - 2^-k
    const double head_hi = 1.0 - d * std::ldexp(1.0, -k);        // 1 - d 2^-k
    const std::size_t cap = 10000;

    std::vector<AtomicPart> S;
    {
        AtomicPart delta0;
        delta0.pos = {0.0};
        delta0.mass = {1.0};
        S.push_back(std::move(delta0));
    }
    std::size_t full = 1;
    Rng rng(seed);

    for (int level = 1; level <= n; ++level) {
        std::vector<AtomicPart> next;
        next.reserve(S.size() * static_cast<std::size_t>(rep.branching));
        for (const AtomicPart& parent : S) {
            // Exact dyadic split: head atoms sit in [0, 1 - d 2^-k], tail
            // atoms in (1 - d 2^-k, 1 - 2^-k]; nothing lives above that for
            // members of the admissible class.
            for (long l1 = total / 2; l1 <= total; ++l1) {
                long l2 = total - l1;
                double w1 = static_cast<double>(l1) / static_cast<double>(total);
                double w2 = static_cast<double>(l2) / static_cast<double>(total);
                std::vector<std::pair<double, double>> atoms;
                atoms.reserve(2 * parent.size());
                for (std::size_t i = 0; i < parent.size(); ++i) {
                    double x = parent.pos[i], m = parent.mass[i];
                    if (x <= head_hi) {
                        if (l1 > 0) atoms.emplace_back(x / d, m * w1);
                        if (l2 > 0) atoms.emplace_back((x + 1.0) / d, m * w2);
                    } else if (x <= tail_hi) {
                        atoms.emplace_back(x / d, m);
                    } else {
                        throw std::logic_error(
                            "mdim_separated_sets: parent measure leaves the admissible class");
                    }
                }
                next.push_back(make_atomic(std::move(atoms)));
            }
        }
        full *= static_cast<std::size_t>(rep.branching);
        if (next.size() > cap) {
            rep.subsampled = true;
            for (std::size_t i = 0; i < cap; ++i) {
                std::size_t j = i + static_cast<std::size_t>(rng.below(next.size() - i));
                std::swap(next[i], next[j]);
            }
            next.resize(cap);
        }
        S = std::move(next);
    }
    rep.full_size = full;
    rep.set_size = S.size();
    rep.bound_size = 1;
    for (int level = 0; level < n; ++level) rep.bound_size *= static_cast<std::size_t>(rep.branching);

    // Admissibility of every constructed measure, checked with exact dyadic
    // arithmetic: no mass above 1 - 2^-k, at least half the mass in [0, 1/d].
    rep.a_k_membership = true;
    for (const AtomicPart& m : S) {
        double low = 0.0, high = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m.pos[i] > tail_hi) high += m.mass[i];
            if (m.pos[i] <= 1.0 / d) low += m.mass[i];
        }
        if (high != 0.0 || low < 0.5) rep.a_k_membership = false;
    }

    if (n == 0) {
        rep.quant_N = 1;
        rep.verified_count = S.size();
        rep.separated = true;
    } else {
        rep.quant_N = static_cast<int>(std::lround(std::exp2(ak * n)));
        // Pairwise verification budget: distances cost about (n+1) N^2 each.
        std::size_t m = S.size();
        double budget = 6e9;
        double per_pair = (n + 1.0) * sqr(static_cast<double>(rep.quant_N));
        std::size_t msub = m;
        while (msub > 2 && 0.5 * msub * (msub - 1.0) * per_pair > budget) --msub;
        std::vector<AtomicPart> chosen;
        if (msub < m) {
            rep.subsampled = true;
            Rng pick(seed + 1);
            std::vector<std::size_t> idx(m);
            for (std::size_t i = 0; i < m; ++i) idx[i] = i;
            for (std::size_t i = 0; i < msub; ++i) {
                std::size_t j = i + static_cast<std::size_t>(pick.below(m - i));
                std::swap(idx[i], idx[j]);
            }
            for (std::size_t i = 0; i < msub; ++i) chosen.push_back(S[idx[i]]);
        } else {
            chosen = S;
        }
        rep.verified_count = chosen.size();

        std::vector<CircleMeasure> measures;
        measures.reserve(chosen.size());
        for (AtomicPart& a : chosen) measures.push_back(CircleMeasure::from_atomic(std::move(a)));
        BowenReport br =
            bowen_separation_check(measures, ExpandingMap(d, 0.0), n, p, rep.eps, rep.quant_N);
        rep.min_pairwise_bowen = br.min_bowen;
        rep.closest_i = br.i;
        rep.closest_j = br.j;
        rep.separated = br.separated;
    }

    rep.pass = rep.separated && rep.a_k_membership && rep.full_size >= rep.bound_size;
    return rep;
}

AtomlessReport atomless_scan(const CircleMeasure& mu, const TangentField& v,
                             const std::vector<double>& t_samples, int N, double width_tol) {
    if (mu.has_atoms()) throw std::domain_error("atomless_scan: input measure must be atomless");
    if (t_samples.empty()) throw std::domain_error("atomless_scan: need at least one t value");

    AtomlessReport rep;
    rep.detect_threshold = 2.999 / static_cast<double>(N);
    std::size_t detected = 0;
    for (double t : t_samples) {
        CircleMeasure m = exp_map(mu, v, t);
        AtomEstimate est = max_atom_mass(m, N, width_tol);
        bool det = est.mass >= rep.detect_threshold;
        detected += det ? 1 : 0;
        rep.samples.push_back({t, est.mass, est.position, det});
    }
    rep.fraction = static_cast<double>(detected) / static_cast<double>(t_samples.size());
    rep.pass = rep.fraction <= 0.05 + 1e-12;
    return rep;
}

TangentField cantor_field(int depth) {
    if (depth < 1 || depth > 10)
        throw std::domain_error("cantor_field: depth must lie in [1, 10]");
    // Depth-1 squares in x-order with their bottom-edge heights; children
    // repeat the pattern scaled by 1/4 inside each square.
    const double off[4] = {0.0, 0.5, -0.25, 0.25};
    const long M = 1L << (2 * depth);

    auto bottom = [&](long g) {
        double s = 0.0, w = 1.0;
        for (int j = depth - 1; j >= 0; --j) {
            s += off[(g >> (2 * j)) & 3] * w;
            w *= 0.25;
        }
        return s;
    };

    Eigen::ArrayXd v(M);
    for (long g = 0; g < M; ++g) {
        // Grid point g/4^depth is the left edge of square chain g and the
        // right edge of chain g-1; the selection takes the lower of the two.
        double val = bottom(g);
        if (g > 0) val = std::min(val, bottom(g - 1));
        v[g] = val;
    }
    v -= v.mean();
    return TangentField::from_samples(std::move(v));
}

BilipschitzReport bilipschitz_check(const CircleMeasure& mu, const std::vector<TangentField>& fields,
                                    double eta, int pair_samples, std::uint64_t seed,
                                    int quadrature_M, int N) {
    const std::size_t nf = fields.size();
    if (nf == 0 || nf > 8)
        throw std::domain_error("bilipschitz_check: need between 1 and 8 fields");
    if (!(eta > 0.0) || eta > 0.5)
        throw std::domain_error("bilipschitz_check: eta must lie in (0, 0.5]");
    if (pair_samples < 1) throw std::domain_error("bilipschitz_check: need at least one pair");
    mu.validate();

    std::vector<TrigPoly> interp;
    interp.reserve(nf);
    for (const TangentField& f : fields) interp.push_back(field_interpolant(f));

    std::vector<double> xs = quantile_vector(mu, quadrature_M);
    Eigen::MatrixXd V(quadrature_M, static_cast<int>(nf));
    for (int s = 0; s < quadrature_M; ++s)
        for (std::size_t i = 0; i < nf; ++i)
            V(s, static_cast<int>(i)) = interp[i].eval(xs[static_cast<std::size_t>(s)]);

    BilipschitzReport rep;
    rep.gram = V.transpose() * V / static_cast<double>(quadrature_M);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rep.gram);
    rep.sigma_min = std::max(es.eigenvalues().minCoeff(), 0.0);
    rep.c_bar = 0.1 * rep.sigma_min;
    rep.C_bar = 2.0 * std::sqrt(rep.gram.trace());
    rep.pairs = static_cast<std::size_t>(pair_samples);

    Rng rng(seed);
    auto draw_ball = [&]() {
        Eigen::VectorXd a(static_cast<int>(nf));
        do {
            for (std::size_t i = 0; i < nf; ++i)
                a(static_cast<int>(i)) = rng.uniform(-eta, eta);
        } while (a.norm() >= eta);
        return a;
    };
    auto chart = [&](const Eigen::VectorXd& a) {
        std::vector<double> coef(a.data(), a.data() + a.size());
        return exp_map(mu, linear_combination(coef, fields), 1.0);
    };

    rep.c_emp = std::numeric_limits<double>::infinity();
    rep.C_emp = 0.0;
    for (int s = 0; s < pair_samples; ++s) {
        Eigen::VectorXd a = draw_ball(), b = draw_ball();
        while ((a - b).norm() < eta / 10.0) b = draw_ball();
        double w = wasserstein(chart(a), chart(b), 2.0, N).cost;
        double ratio = w / (a - b).norm();
        rep.c_emp = std::min(rep.c_emp, ratio);
        rep.C_emp = std::max(rep.C_emp, ratio);
    }
    rep.pass = rep.c_emp >= rep.c_bar && rep.C_emp <= rep.C_bar;
    return rep;
}

}  // namespace circleot
