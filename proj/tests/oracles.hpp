// Test-only reference implementations, independent of the library's
// computation paths: pair-sum modularity, exhaustive partition enumeration,
// refinement checks and random instance generators.
#pragma once

#include <functional>
#include <random>
#include <vector>

#include <commdet/graph.hpp>
#include <commdet/partition.hpp>

namespace oracles {

using commdet::count;
using commdet::Edge;
using commdet::EdgeList;
using commdet::edgeweight;
using commdet::Graph;
using commdet::index;
using commdet::node;
using commdet::Partition;

/// Dense symmetric weight matrix with A[u][u] = 2 * loop weight.
inline std::vector<std::vector<double>> weight_matrix(const Graph &g) {
    const count n = g.node_count();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (node u = 0; u < n; ++u)
        g.for_neighbors(u, [&](node v, edgeweight w) { a[u][v] += (u == v) ? 2.0 * w : w; });
    return a;
}

/// Null-model pair sum: Q = (1/2W) sum_{u,v same comm} (A_uv - gamma k_u k_v / 2W).
inline double modularity_reference(const Graph &g, const Partition &z, double gamma = 1.0) {
    const count n = g.node_count();
    const auto a = weight_matrix(g);
    std::vector<double> k(n, 0.0);
    double two_w = 0.0;
    for (node u = 0; u < n; ++u) {
        for (node v = 0; v < n; ++v)
            k[u] += a[u][v];
        two_w += k[u];
    }
    double q = 0.0;
    for (node u = 0; u < n; ++u)
        for (node v = 0; v < n; ++v)
            if (z[u] == z[v])
                q += a[u][v] - gamma * k[u] * k[v] / two_w;
    return q / two_w;
}

inline double coverage_reference(const Graph &g, const Partition &z) {
    const auto a = weight_matrix(g);
    const count n = g.node_count();
    double intra = 0.0, total = 0.0;
    for (node u = 0; u < n; ++u)
        for (node v = 0; v < n; ++v) {
            total += a[u][v];
            if (z[u] == z[v])
                intra += a[u][v];
        }
    return total == 0.0 ? 0.0 : intra / total;
}

/// Per-edge agreement count, written directly against the adjacency.
inline double rand_index_reference(const Graph &g, const Partition &a, const Partition &b) {
    count agree = 0, edges = 0;
    for (node u = 0; u < g.node_count(); ++u)
        g.for_neighbors(u, [&](node v, edgeweight) {
            if (v < u)
                return;
            ++edges;
            if ((a[u] == a[v]) == (b[u] == b[v]))
                ++agree;
        });
    return static_cast<double>(agree) / static_cast<double>(edges);
}

/// Enumerates all set partitions of n elements (restricted growth strings).
inline void for_each_partition(count n, const std::function<void(const Partition &)> &f) {
    std::vector<index> rgs(n, 0);
    std::function<void(count, index)> rec = [&](count pos, index max_used) {
        if (pos == n) {
            Partition z;
            z.data() = rgs;
            z.set_upper_bound(max_used + 1);
            f(z);
            return;
        }
        for (index c = 0; c <= max_used + 1; ++c) {
            rgs[pos] = c;
            rec(pos + 1, std::max(max_used, c));
        }
    };
    if (n == 0)
        return;
    rgs[0] = 0;
    rec(1, 0);
}

/// Exhaustive maximum-modularity search; returns (best value, argmax).
inline std::pair<double, Partition> brute_force_max_modularity(const Graph &g, double gamma = 1.0) {
    double best = -2.0;
    Partition arg;
    for_each_partition(g.node_count(), [&](const Partition &z) {
        const double q = modularity_reference(g, z, gamma);
        if (q > best) {
            best = q;
            arg = z;
        }
    });
    return {best, arg};
}

/// a refines b: same community in a implies same community in b.
inline bool refines(const Partition &a, const Partition &b) {
    for (node u = 0; u < a.size(); ++u)
        for (node v = u + 1; v < a.size(); ++v)
            if (a[u] == a[v] && b[u] != b[v])
                return false;
    return true;
}

inline bool same_relation(const Partition &a, const Partition &b) {
    return refines(a, b) && refines(b, a);
}

// ---- instance generators -------------------------------------------------

/// 6-node barbell: triangles {0,1,2} and {3,4,5} bridged by edge {2,3}.
inline Graph barbell() {
    return Graph::from_edges(6, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {3, 4, 1}, {3, 5, 1}, {4, 5, 1}, {2, 3, 1}});
}

inline Partition barbell_triangles() {
    Partition z;
    z.data() = {0, 0, 0, 1, 1, 1};
    z.set_upper_bound(2);
    return z;
}

/// Two disjoint triangles {0,1,2} and {3,4,5}.
inline Graph two_triangles() {
    return Graph::from_edges(6, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {3, 4, 1}, {3, 5, 1}, {4, 5, 1}});
}

/// G(n, p) with random weights in [1, 5); retries until at least one edge.
inline Graph random_graph(std::mt19937_64 &rng, count n, double p, bool integer_weights = false,
                          double loop_p = 0.0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> weight(1.0, 5.0);
    std::uniform_int_distribution<int> iweight(1, 5);
    for (int attempt = 0; attempt < 100; ++attempt) {
        EdgeList edges;
        for (node u = 0; u < n; ++u) {
            for (node v = u + 1; v < n; ++v)
                if (unit(rng) < p)
                    edges.push_back({u, v, integer_weights ? static_cast<double>(iweight(rng)) : weight(rng)});
            if (loop_p > 0.0 && unit(rng) < loop_p)
                edges.push_back({u, u, integer_weights ? static_cast<double>(iweight(rng)) : weight(rng)});
        }
        if (!edges.empty())
            return Graph::from_edges(n, edges);
    }
    return Graph::from_edges(2, {{0, 1, 1}});
}

/// Random graph with no isolated nodes: a path through all nodes plus
/// random extra edges (and optional self-loops).
inline Graph random_covered_graph(std::mt19937_64 &rng, count n, double p, bool integer_weights = false,
                                  double loop_p = 0.0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> weight(1.0, 5.0);
    std::uniform_int_distribution<int> iweight(1, 5);
    auto draw = [&] { return integer_weights ? static_cast<double>(iweight(rng)) : weight(rng); };
    EdgeList edges;
    for (node u = 0; u + 1 < n; ++u)
        edges.push_back({u, u + 1, draw()});
    for (node u = 0; u < n; ++u) {
        for (node v = u + 2; v < n; ++v)
            if (unit(rng) < p)
                edges.push_back({u, v, draw()});
        if (loop_p > 0.0 && unit(rng) < loop_p)
            edges.push_back({u, u, draw()});
    }
    if (edges.empty())
        return Graph::from_edges(1, {{0, 0, 1.0}});
    return Graph::from_edges(n, edges);
}

inline Partition random_partition(std::mt19937_64 &rng, count n, count max_communities) {
    std::uniform_int_distribution<index> pick(0, max_communities - 1);
    Partition z;
    z.data().resize(n);
    for (node u = 0; u < n; ++u)
        z[u] = pick(rng);
    z.set_upper_bound(max_communities);
    return z;
}

} // namespace oracles
