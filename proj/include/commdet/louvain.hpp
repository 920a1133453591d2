#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <vector>

#include <commdet/graph.hpp>
#include <commdet/partition.hpp>
#include <commdet/quality.hpp>
#include <commdet/report.hpp>

namespace commdet {

struct LouvainConfig {
    double gamma = 1.0;
    count max_move_iterations = 32; // passes per move phase
    count max_levels = 64;
    std::uint64_t seed = 1;
    int workers = 1;
    bool refine = false; // PLMR switch
};

/// Per-community volumes, kept consistent with the partition as nodes move.
using CommunityVolumes = std::vector<edgeweight>;

inline CommunityVolumes community_volumes(const Graph &g, const Partition &z) {
    CommunityVolumes vols(z.upper_bound(), 0.0);
    g.for_nodes([&](node u) { vols[z[u]] += g.volume(u); });
    return vols;
}

/// Modularity difference for moving u from its community C to D:
///   [w(u, D\{u}) - w(u, C\{u})] / w(E)
///   + gamma * [vol(C\{u}) - vol(D\{u})] * vol(u) / (2 w(E)^2)
/// D == C returns 0.
inline double delta_mod(const Graph &g, const Partition &z, const CommunityVolumes &vols, node u, index target,
                        double gamma) {
    const index c = z[u];
    if (target == c)
        return 0.0;
    edgeweight w_c = 0.0, w_d = 0.0;
    g.for_neighbors(u, [&](node v, edgeweight w) {
        if (v == u)
            return;
        if (z[v] == c)
            w_c += w;
        else if (z[v] == target)
            w_d += w;
    });
    const edgeweight total = g.total_edge_weight();
    const edgeweight vol_u = g.volume(u);
    const edgeweight vol_c = vols[c] - vol_u;
    const edgeweight vol_d = vols[target];
    return (w_d - w_c) / total + gamma * (vol_c - vol_d) * vol_u / (2.0 * total * total);
}

/// Called after each applied move: (node, source, target, predicted gain).
/// Meaningful ordering only with workers == 1.
using MoveObserver = std::function<void(node, index, index, double)>;

/// One Louvain move phase: repeated parallel passes moving each node to the
/// neighboring community of maximal positive modularity gain, until a pass
/// performs no move or the pass cap is reached. Returns whether anything moved.
inline bool move_phase(const Graph &g, Partition &z, const LouvainConfig &cfg, const MoveObserver &observer = {}) {
    const count n = g.node_count();
    if (n == 0 || g.total_edge_weight() == 0.0)
        return false;
    const int workers = resolve_workers(cfg.workers);
    const index ub = z.upper_bound();
    const edgeweight total = g.total_edge_weight();
    const double inv_total = 1.0 / total;
    const double inv_sq2 = 1.0 / (2.0 * total * total);

    CommunityVolumes vols = community_volumes(g, z);

    bool changed = false;
    for (count pass = 0; pass < cfg.max_move_iterations; ++pass) {
        bool moved = false;
        const std::int64_t sz = static_cast<std::int64_t>(n);
#pragma omp parallel num_threads(workers)
        {
            // per-worker dense scratch of neighbor-community weights,
            // cleared via touched-list after each node
            std::vector<edgeweight> aff(ub, 0.0);
            std::vector<index> touched;
            bool local_moved = false;
#pragma omp for schedule(guided) nowait
            for (std::int64_t ui = 0; ui < sz; ++ui) {
                const node u = static_cast<node>(ui);
                if (g.degree(u) == 0)
                    continue;
                const index c = z[u];
                touched.clear();
                g.for_neighbors(u, [&](node v, edgeweight w) {
                    if (v == u)
                        return;
                    const index d = z[v];
                    if (aff[d] == 0.0)
                        touched.push_back(d);
                    aff[d] += w;
                });
                const edgeweight vol_u = g.volume(u);
                const edgeweight w_c = aff[c];
                const edgeweight vol_c = vols[c] - vol_u;
                double best_delta = 0.0;
                index best = c;
                for (index d : touched) {
                    if (d == c)
                        continue;
                    const double delta =
                        (aff[d] - w_c) * inv_total + cfg.gamma * (vol_c - vols[d]) * vol_u * inv_sq2;
                    if (delta > best_delta || (delta == best_delta && best != c && d < best)) {
                        best_delta = delta;
                        best = d;
                    }
                }
                for (index d : touched)
                    aff[d] = 0.0;
                if (best != c && best_delta > 0.0) {
#pragma omp atomic
                    vols[c] -= vol_u;
#pragma omp atomic
                    vols[best] += vol_u;
                    z[u] = best;
                    local_moved = true;
                    if (observer)
                        observer(u, c, best, best_delta);
                }
            }
            if (local_moved) {
#pragma omp atomic write
                moved = true;
            }
        }
        if (!moved)
            break;
        changed = true;
    }
    return changed;
}

struct CoarseningResult {
    Graph coarse;
    std::vector<node> pi; // fine node -> coarse node
};

/// Contracts each community into one coarse node. Inter-community weights sum
/// into coarse edges, intra-community weights (each fine non-loop edge once,
/// fine self-loops once) into coarse self-loops. Requires a compacted
/// partition; w(E') = w(E). Deterministic regardless of worker count: partial
/// adjacencies are built over contiguous fine-node ranges and merged in range
/// order with neighbors sorted by coarse id.
inline CoarseningResult coarsen(const Graph &g, const Partition &z, int workers = 1) {
    check_cover(g, z);
    if (!z.is_compact())
        throw std::invalid_argument("coarsen requires a compacted partition");
    const count n = g.node_count();
    count nc = 0;
    for (node u = 0; u < n; ++u)
        nc = std::max(nc, static_cast<count>(z[u]) + 1);
    if (n == 0)
        return {Graph{}, {}};

    const int t = resolve_workers(workers);
    // Each worker scans a contiguous fine-node range and collects
    // (coarse node -> (coarse neighbor, weight)) contributions.
    std::vector<std::vector<std::vector<std::pair<node, edgeweight>>>> parts(
        t, std::vector<std::vector<std::pair<node, edgeweight>>>(nc));
#pragma omp parallel num_threads(t)
    {
        const int tid = omp_get_thread_num();
        const count lo = n * tid / t;
        const count hi = n * (tid + 1) / t;
        auto &part = parts[tid];
        for (node u = lo; u < hi; ++u) {
            const node cu = z[u];
            g.for_neighbors(u, [&](node v, edgeweight w) {
                const node cv = z[v];
                if (cu == cv) {
                    // intra: count each non-loop edge once (owner u < v), loops once
                    if (v == u || v > u)
                        part[cu].emplace_back(cu, w);
                } else {
                    part[cu].emplace_back(cv, w);
                }
            });
        }
    }

    std::vector<std::vector<std::pair<node, edgeweight>>> adj(nc);
    const std::int64_t ncs = static_cast<std::int64_t>(nc);
#pragma omp parallel num_threads(t)
    {
        std::vector<edgeweight> acc(nc, 0.0);
        std::vector<node> touched;
#pragma omp for schedule(guided)
        for (std::int64_t ci = 0; ci < ncs; ++ci) {
            const node c = static_cast<node>(ci);
            touched.clear();
            for (int w = 0; w < t; ++w)
                for (auto [nb, wt] : parts[w][c]) {
                    if (acc[nb] == 0.0)
                        touched.push_back(nb);
                    acc[nb] += wt;
                }
            std::sort(touched.begin(), touched.end());
            adj[c].reserve(touched.size());
            for (node nb : touched) {
                adj[c].emplace_back(nb, acc[nb]);
                acc[nb] = 0.0;
            }
        }
    }

    CoarseningResult result;
    result.coarse = Graph::from_adjacency(adj);
    result.pi.assign(z.data().begin(), z.data().end());
    return result;
}

/// z(v) = z_coarse(pi(v)) for every fine node v.
inline Partition prolong(const Partition &z_coarse, const std::vector<node> &pi) {
    Partition fine;
    fine.data().resize(pi.size());
    for (node v = 0; v < pi.size(); ++v) {
        if (pi[v] >= z_coarse.size())
            throw std::out_of_range("prolong: contraction map entry out of range");
        fine[v] = z_coarse[pi[v]];
    }
    fine.set_upper_bound(z_coarse.upper_bound());
    return fine;
}

namespace detail {

inline Partition plm_recurse(const Graph &g, const LouvainConfig &cfg, RunReport &report, count level) {
    using clock = std::chrono::steady_clock;
    if (report.levels.size() <= level)
        report.levels.resize(level + 1);

    Partition z = singleton_partition(g);
    auto t0 = clock::now();
    const bool changed = move_phase(g, z, cfg);
    report.levels[level].move_ms += std::chrono::duration<double, std::milli>(clock::now() - t0).count();

    if (changed && level + 1 < cfg.max_levels) {
        const Partition zc = z.compacted();
        if (zc.upper_bound() < g.node_count()) {
            t0 = clock::now();
            CoarseningResult cr = coarsen(g, zc, cfg.workers);
            report.levels[level].coarsen_ms +=
                std::chrono::duration<double, std::milli>(clock::now() - t0).count();

            const Partition z_coarse = plm_recurse(cr.coarse, cfg, report, level + 1);
            z = prolong(z_coarse, cr.pi);

            if (cfg.refine) {
                t0 = clock::now();
                move_phase(g, z, cfg);
                report.levels[level].refine_ms +=
                    std::chrono::duration<double, std::milli>(clock::now() - t0).count();
            }
        }
    }
    return z;
}

inline std::pair<Partition, RunReport> run_louvain(const Graph &g, const LouvainConfig &cfg, const char *name) {
    using clock = std::chrono::steady_clock;
    if (g.total_edge_weight() == 0.0)
        throw std::domain_error("Louvain requires positive total edge weight");
    RunReport report;
    report.algorithm = name;
    report.workers = resolve_workers(cfg.workers);
    report.seed = cfg.seed;
    const auto t0 = clock::now();
    Partition z = plm_recurse(g, cfg, report, 0).compacted();
    report.total_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    report.modularity = modularity(g, z, cfg.gamma);
    report.coverage = coverage(g, z);
    report.community_count = z.upper_bound();
    return {std::move(z), std::move(report)};
}

} // namespace detail

/// Parallel Louvain method: greedy local moves from singletons, coarsen,
/// recurse, prolong.
inline std::pair<Partition, RunReport> run_plm(const Graph &g, const LouvainConfig &cfg) {
    LouvainConfig c = cfg;
    c.refine = false;
    return detail::run_louvain(g, c, "plm");
}

/// PLM with an extra move phase on the fine graph after each prolongation.
inline std::pair<Partition, RunReport> run_plmr(const Graph &g, const LouvainConfig &cfg) {
    LouvainConfig c = cfg;
    c.refine = true;
    return detail::run_louvain(g, c, "plmr");
}

} // namespace commdet
