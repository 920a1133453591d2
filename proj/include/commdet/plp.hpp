#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <optional>
#include <random>
#include <vector>

#include <commdet/graph.hpp>
#include <commdet/partition.hpp>
#include <commdet/report.hpp>

namespace commdet {

struct PlpConfig {
    long long theta = -1; // -1: max(1, floor(n * 1e-5))
    count max_iterations = 100;
    bool randomize_order = false;
    std::uint64_t seed = 1;
    int workers = 1;
};

inline count resolved_theta(const PlpConfig &cfg, count n) {
    if (cfg.theta >= 0)
        return static_cast<count>(cfg.theta);
    return std::max<count>(1, n / 100000);
}

/// Label of maximal incident weight among u's neighbors; ties broken by
/// smallest label id. u's own label counts only via a self-loop.
inline index dominant_label(const Graph &g, const Partition &z, node u) {
    if (g.degree(u) == 0)
        throw std::invalid_argument("dominant_label: node " + std::to_string(u) + " is isolated");
    std::vector<std::pair<index, edgeweight>> tally;
    g.for_neighbors(u, [&](node v, edgeweight w) {
        for (auto &entry : tally) {
            if (entry.first == z[v]) {
                entry.second += w;
                return;
            }
        }
        tally.emplace_back(z[v], w);
    });
    index best = tally.front().first;
    edgeweight best_w = tally.front().second;
    for (const auto &[l, w] : tally)
        if (w > best_w || (w == best_w && l < best)) {
            best = l;
            best_w = w;
        }
    return best;
}

/// True iff no node with deg > 0 would change its label under the
/// deterministic dominant-label rule.
inline bool is_stable(const Graph &g, const Partition &z) {
    for (node u = 0; u < g.node_count(); ++u)
        if (g.degree(u) > 0 && dominant_label(g, z, u) != z[u])
            return false;
    return true;
}

/// Parallel label propagation. Iterates until an iteration updates at most
/// theta labels or the iteration cap is hit. Nodes whose neighborhood did not
/// change become inactive and are skipped until a neighbor updates.
inline std::pair<Partition, RunReport> run_plp(const Graph &g, const PlpConfig &cfg,
                                               const std::optional<Partition> &initial = std::nullopt) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const count n = g.node_count();
    const count theta = resolved_theta(cfg, n);
    const int workers = resolve_workers(cfg.workers);

    Partition labels = initial ? *initial : singleton_partition(g);
    if (initial && labels.size() != n)
        throw std::invalid_argument("initial partition does not cover the graph");
    index ub = labels.upper_bound();
    for (node u = 0; u < n; ++u)
        ub = std::max(ub, labels[u] + 1);

    std::vector<node> order(n);
    for (node u = 0; u < n; ++u)
        order[u] = u;
    if (cfg.randomize_order) {
        std::mt19937_64 rng(cfg.seed);
        std::shuffle(order.begin(), order.end(), rng);
    }

    std::vector<std::uint8_t> active(n, 1);
    RunReport report;
    report.algorithm = "plp";
    report.workers = workers;
    report.seed = cfg.seed;

    count updated = n;
    count iter = 0;
    while (updated > theta && iter < cfg.max_iterations) {
        const auto it0 = clock::now();
        std::atomic<count> updates{0};
        const std::int64_t sz = static_cast<std::int64_t>(n);
#pragma omp parallel num_threads(workers)
        {
            std::vector<edgeweight> aff(ub, 0.0);
            std::vector<index> touched;
#pragma omp for schedule(guided)
            for (std::int64_t i = 0; i < sz; ++i) {
                const node u = order[i];
                if (!active[u] || g.degree(u) == 0)
                    continue;
                touched.clear();
                g.for_neighbors(u, [&](node v, edgeweight w) {
                    const index l = labels[v];
                    if (aff[l] == 0.0)
                        touched.push_back(l);
                    aff[l] += w;
                });
                index best = touched.front();
                edgeweight best_w = aff[best];
                for (index l : touched)
                    if (aff[l] > best_w || (aff[l] == best_w && l < best)) {
                        best = l;
                        best_w = aff[l];
                    }
                for (index l : touched)
                    aff[l] = 0.0;
                if (labels[u] != best) {
                    labels[u] = best;
                    updates.fetch_add(1, std::memory_order_relaxed);
                    g.for_neighbors(u, [&](node v, edgeweight) { active[v] = 1; });
                } else {
                    active[u] = 0;
                }
            }
        }
        updated = updates.load();
        ++iter;
        report.iterations.push_back(
            {updated, std::chrono::duration<double, std::milli>(clock::now() - it0).count()});
    }

    report.total_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    if (g.total_edge_weight() > 0) {
        report.modularity = modularity(g, labels.compacted());
        report.coverage = coverage(g, labels);
    }
    report.community_count = labels.community_count();
    return {std::move(labels), std::move(report)};
}

} // namespace commdet
