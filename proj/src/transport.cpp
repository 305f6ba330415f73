#include "circleot/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace circleot {

namespace {

long double pow_cost(double d, double p) {
    if (p == 1.0) return d;
    if (p == 2.0) return static_cast<long double>(d) * d;
    if (p == 3.0) return static_cast<long double>(d) * d * d;
    return powl(d, static_cast<long double>(p));
}

// Optimal cyclic matching of two sorted quantile lists. The inner scan exits
// as soon as the partial sum exceeds the best shift found so far.
double wasserstein_sorted(const std::vector<double>& qa, const std::vector<double>& qb, double p,
                          int* shift_out) {
    const int N = static_cast<int>(qa.size());
    long double best = std::numeric_limits<long double>::infinity();
    int best_shift = 0;
    for (int s = 0; s < N; ++s) {
        long double acc = 0.0L;
        int i = 0;
        for (; i < N; ++i) {
            int j = i + s;
            if (j >= N) j -= N;
            acc += pow_cost(circle_distance(qa[i], qb[j]), p);
            if (acc >= best) break;
        }
        if (i == N && acc < best) {
            best = acc;
            best_shift = s;
        }
    }
    if (shift_out) *shift_out = best_shift;
    return static_cast<double>(powl(best / N, 1.0L / static_cast<long double>(p)));
}

// Min-cost flow by successive shortest paths (Bellman-Ford); sizes are tiny,
// so simplicity beats asymptotics. Masses must already be normalized.
double min_cost_matching(const std::vector<double>& ax, const std::vector<double>& am,
                         const std::vector<double>& bx, const std::vector<double>& bm, double p) {
    const int n = static_cast<int>(ax.size()), m = static_cast<int>(bx.size());
    const int S = 0, T = n + m + 1, V = n + m + 2;
    struct Edge {
        int to;
        double cap;
        long double cost;
        int rev;
    };
    std::vector<std::vector<Edge>> adj(V);
    auto add_edge = [&](int u, int v, double cap, long double cost) {
        adj[u].push_back({v, cap, cost, static_cast<int>(adj[v].size())});
        adj[v].push_back({u, 0.0, -cost, static_cast<int>(adj[u].size()) - 1});
    };
    for (int i = 0; i < n; ++i) add_edge(S, 1 + i, am[i], 0.0L);
    for (int j = 0; j < m; ++j) add_edge(1 + n + j, T, bm[j], 0.0L);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            add_edge(1 + i, 1 + n + j, std::numeric_limits<double>::infinity(),
                     pow_cost(circle_distance(ax[i], bx[j]), p));

    long double total_cost = 0.0L;
    const double flow_eps = 1e-15;
    while (true) {
        const long double inf = std::numeric_limits<long double>::infinity();
        std::vector<long double> dist(V, inf);
        std::vector<int> pv(V, -1), pe(V, -1);
        dist[S] = 0.0L;
        for (int round = 0; round < V; ++round) {
            bool changed = false;
            for (int u = 0; u < V; ++u) {
                if (dist[u] == inf) continue;
                for (int e = 0; e < static_cast<int>(adj[u].size()); ++e) {
                    const Edge& ed = adj[u][e];
                    if (ed.cap <= flow_eps) continue;
                    if (dist[u] + ed.cost < dist[ed.to] - 1e-18L) {
                        dist[ed.to] = dist[u] + ed.cost;
                        pv[ed.to] = u;
                        pe[ed.to] = e;
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }
        if (dist[T] == inf) break;
        double push = std::numeric_limits<double>::infinity();
        for (int v = T; v != S; v = pv[v]) push = std::min(push, adj[pv[v]][pe[v]].cap);
        if (push <= flow_eps) break;
        for (int v = T; v != S; v = pv[v]) {
            Edge& ed = adj[pv[v]][pe[v]];
            ed.cap -= push;
            adj[v][ed.rev].cap += push;
            total_cost += push * ed.cost;
        }
    }
    return static_cast<double>(powl(total_cost, 1.0L / static_cast<long double>(p)));
}

}  // namespace

TransportResult wasserstein(const CircleMeasure& mu, const CircleMeasure& nu, double p, int N,
                            bool with_pairs) {
    if (!(p >= 1.0)) throw std::domain_error("wasserstein: p must be >= 1");
    if (N < 2) throw std::domain_error("wasserstein: N must be >= 2");
    if (std::fabs(mu.total_mass() - 1.0) > 1e-9 || std::fabs(nu.total_mass() - 1.0) > 1e-9)
        throw std::domain_error("wasserstein: measures must be normalized");
    const std::vector<double> qa = quantile_vector(mu, N);
    const std::vector<double> qb = quantile_vector(nu, N);
    TransportResult r;
    r.p = p;
    r.N = N;
    r.cost = wasserstein_sorted(qa, qb, p, &r.shift);
    if (with_pairs) {
        r.pairs.reserve(N);
        for (int i = 0; i < N; ++i) r.pairs.emplace_back(qa[i], qb[(i + r.shift) % N]);
    }
    return r;
}

double brute_force_wasserstein(const CircleMeasure& a, const CircleMeasure& b, double p) {
    if (!(p >= 1.0)) throw std::domain_error("brute_force_wasserstein: p must be >= 1");
    // Purity means no diffuse mass; an explicit zero-density part (the
    // canonical form of purely atomic measures) is fine.
    if (a.density.total() > 0.0 || b.density.total() > 0.0)
        throw std::domain_error("brute_force_wasserstein: measures must be purely atomic");
    const double ta = a.atomic.total(), tb = b.atomic.total();
    if (std::fabs(ta - tb) > 1e-12)
        throw std::domain_error("brute_force_wasserstein: total masses differ");
    if (!(ta > 0.0)) throw std::domain_error("brute_force_wasserstein: empty measures");
    const std::size_t n = a.atomic.size(), m = b.atomic.size();

    // Equal-size lists of identical masses: scan every bijection.
    if (n == m && n <= 9) {
        bool uniform = true;
        for (std::size_t i = 0; i + 1 < n && uniform; ++i)
            uniform = std::fabs(a.atomic.mass[i] - a.atomic.mass[i + 1]) <= 1e-12 * ta;
        for (std::size_t i = 0; i < n && uniform; ++i)
            uniform = std::fabs(b.atomic.mass[i] - a.atomic.mass[0]) <= 1e-12 * ta;
        if (uniform) {
            std::vector<int> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            long double best = std::numeric_limits<long double>::infinity();
            do {
                long double acc = 0.0L;
                for (std::size_t i = 0; i < n; ++i)
                    acc += pow_cost(circle_distance(a.atomic.pos[i], b.atomic.pos[perm[i]]), p);
                best = std::min(best, acc);
            } while (std::next_permutation(perm.begin(), perm.end()));
            return static_cast<double>(powl(best / static_cast<long double>(n),
                                            1.0L / static_cast<long double>(p)));
        }
    }
    if (n > 12 || m > 12)
        throw std::length_error("brute_force_wasserstein: too many atoms for exact matching");
    std::vector<double> am(n), bm(m);
    for (std::size_t i = 0; i < n; ++i) am[i] = a.atomic.mass[i] / ta;
    for (std::size_t j = 0; j < m; ++j) bm[j] = b.atomic.mass[j] / tb;
    return min_cost_matching(a.atomic.pos, am, b.atomic.pos, bm, p);
}

BowenReport bowen_separation_check(const std::vector<CircleMeasure>& S, const ExpandingMap& map,
                                   int n, double p, double eps, int N) {
    if (n < 0) throw std::domain_error("bowen_separation_check: n must be >= 0");
    if (S.size() < 2) {
        // No distinct pairs: vacuously separated.
        BowenReport rep;
        rep.separated = true;
        rep.min_bowen = std::numeric_limits<double>::infinity();
        return rep;
    }
    // Quantile vectors of every iterate, computed once.
    std::vector<std::vector<std::vector<double>>> q(S.size());
    for (std::size_t s = 0; s < S.size(); ++s) {
        q[s].reserve(n + 1);
        CircleMeasure cur = S[s];
        for (int k = 0; k <= n; ++k) {
            q[s].push_back(quantile_vector(cur, N));
            if (k < n) cur = push_forward(cur, map);
        }
    }
    BowenReport rep;
    rep.min_bowen = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < S.size(); ++i) {
        for (std::size_t j = i + 1; j < S.size(); ++j) {
            double bowen = 0.0;
            for (int k = 0; k <= n; ++k)
                bowen = std::max(bowen, wasserstein_sorted(q[i][k], q[j][k], p, nullptr));
            if (bowen < rep.min_bowen) {
                rep.min_bowen = bowen;
                rep.i = i;
                rep.j = j;
            }
        }
    }
    rep.separated = rep.min_bowen >= eps;
    return rep;
}

}  // namespace circleot
