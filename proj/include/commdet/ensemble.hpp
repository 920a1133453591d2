#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include <commdet/graph.hpp>
#include <commdet/louvain.hpp>
#include <commdet/partition.hpp>
#include <commdet/plp.hpp>

namespace commdet {

enum class Algo { plp, plm, plmr };

struct EnsembleConfig {
    count ensemble_size = 4;
    Algo base = Algo::plp;
    Algo final_algo = Algo::plmr;
    std::uint64_t seed = 1;
    int workers = 1;
    // PLP bases shuffle their visit order so that the per-run seeds (seed+i)
    // actually diversify the base solutions.
    PlpConfig base_plp{.randomize_order = true};
    LouvainConfig final_louvain;
    /// Test hook: replaces the base algorithm when set; called as f(g, seed).
    std::function<Partition(const Graph &, std::uint64_t)> base_override;
};

inline void check_ensemble_lengths(const std::vector<Partition> &solutions) {
    if (solutions.empty())
        throw std::invalid_argument("empty ensemble");
    for (const Partition &z : solutions)
        if (z.size() != solutions.front().size())
            throw std::invalid_argument("ensemble partitions cover different node sets");
}

/// Core communities as the exact meet of the inputs: nodes share a core
/// community iff they share a community in every input. Collision-free
/// reference implementation via lexicographic grouping of id tuples.
inline Partition combine_exact(const std::vector<Partition> &solutions) {
    check_ensemble_lengths(solutions);
    const count n = solutions.front().size();
    std::vector<node> order(n);
    std::iota(order.begin(), order.end(), node{0});
    auto tuple_less = [&](node a, node b) {
        for (const Partition &z : solutions) {
            if (z[a] != z[b])
                return z[a] < z[b];
        }
        return false;
    };
    auto tuple_eq = [&](node a, node b) {
        for (const Partition &z : solutions)
            if (z[a] != z[b])
                return false;
        return true;
    };
    std::sort(order.begin(), order.end(), tuple_less);
    Partition out;
    out.data().resize(n);
    index next = 0;
    for (count i = 0; i < n; ++i) {
        if (i > 0 && !tuple_eq(order[i - 1], order[i]))
            ++next;
        out[order[i]] = next;
    }
    out.set_upper_bound(n > 0 ? next + 1 : 1);
    return out.compacted(); // renumber in node order
}

inline std::uint64_t djb2(const std::uint8_t *data, std::size_t len) {
    std::uint64_t h = 5381;
    for (std::size_t i = 0; i < len; ++i)
        h = h * 33 + data[i];
    return h;
}

/// Hash-based combination: each node's id tuple, serialized as 8-byte
/// little-endian words in ensemble order, is hashed with djb2. Equal tuples
/// always map to equal ids; distinct tuples may collide (detectable by
/// comparison with combine_exact). Result is compacted.
inline Partition combine_hashed(const std::vector<Partition> &solutions, int workers = 1) {
    check_ensemble_lengths(solutions);
    const count n = solutions.front().size();
    std::vector<index> hashes(n);
    const std::int64_t sz = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) num_threads(resolve_workers(workers))
    for (std::int64_t v = 0; v < sz; ++v) {
        std::uint64_t h = 5381;
        for (const Partition &z : solutions) {
            std::uint64_t id = z[v];
            for (int byte = 0; byte < 8; ++byte) {
                h = h * 33 + static_cast<std::uint8_t>(id & 0xff);
                id >>= 8;
            }
        }
        hashes[v] = h;
    }
    Partition out;
    out.data() = std::move(hashes);
    out.set_upper_bound(0); // raw hash ids; compaction renumbers
    return out.compacted();
}

/// Ensemble preprocessing: run b base detectors, contract the graph by their
/// core communities, run the final detector on the coarse graph, prolong.
inline std::pair<Partition, RunReport> run_epp(const Graph &g, const EnsembleConfig &cfg) {
    using clock = std::chrono::steady_clock;
    if (cfg.ensemble_size < 1)
        throw std::invalid_argument("ensemble size must be >= 1");
    if (g.total_edge_weight() == 0.0)
        throw std::domain_error("EPP requires positive total edge weight");

    RunReport report;
    report.algorithm = "epp";
    report.seed = cfg.seed;
    const int workers = resolve_workers(cfg.workers);
    report.workers = workers;
    const auto t0 = clock::now();

    const count b = cfg.ensemble_size;
    auto run_base = [&](std::uint64_t seed, int base_workers) -> Partition {
        if (cfg.base_override)
            return cfg.base_override(g, seed);
        switch (cfg.base) {
        case Algo::plp: {
            PlpConfig pc = cfg.base_plp;
            pc.seed = seed;
            pc.workers = base_workers;
            return run_plp(g, pc).first;
        }
        case Algo::plm: {
            LouvainConfig lc = cfg.final_louvain;
            lc.seed = seed;
            lc.workers = base_workers;
            return run_plm(g, lc).first;
        }
        case Algo::plmr: {
            LouvainConfig lc = cfg.final_louvain;
            lc.seed = seed;
            lc.workers = base_workers;
            return run_plmr(g, lc).first;
        }
        }
        throw std::logic_error("unknown base algorithm");
    };

    // b-way split of the worker budget across concurrent base runs
    auto phase0 = clock::now();
    std::vector<Partition> bases(b);
    const int outer = static_cast<int>(std::min<count>(b, workers));
    const int inner = std::max(1, workers / outer);
    const std::int64_t bs = static_cast<std::int64_t>(b);
#pragma omp parallel for schedule(static) num_threads(outer)
    for (std::int64_t i = 0; i < bs; ++i)
        bases[i] = run_base(cfg.seed + static_cast<std::uint64_t>(i), inner);
    report.base_ms = std::chrono::duration<double, std::milli>(clock::now() - phase0).count();

    phase0 = clock::now();
    const Partition core = combine_hashed(bases, workers);
    report.combine_ms = std::chrono::duration<double, std::milli>(clock::now() - phase0).count();

    phase0 = clock::now();
    CoarseningResult cr = coarsen(g, core, cfg.workers);
    report.coarsen_ms = std::chrono::duration<double, std::milli>(clock::now() - phase0).count();

    phase0 = clock::now();
    LouvainConfig fc = cfg.final_louvain;
    fc.seed = cfg.seed;
    fc.workers = cfg.workers;
    Partition z_coarse;
    switch (cfg.final_algo) {
    case Algo::plp: {
        PlpConfig pc = cfg.base_plp;
        pc.seed = cfg.seed;
        pc.workers = cfg.workers;
        z_coarse = run_plp(cr.coarse, pc).first;
        break;
    }
    case Algo::plm:
        z_coarse = run_plm(cr.coarse, fc).first;
        break;
    case Algo::plmr:
        z_coarse = run_plmr(cr.coarse, fc).first;
        break;
    }
    report.final_ms = std::chrono::duration<double, std::milli>(clock::now() - phase0).count();

    Partition z = prolong(z_coarse, cr.pi).compacted();
    report.total_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    report.modularity = modularity(g, z);
    report.coverage = coverage(g, z);
    report.community_count = z.upper_bound();
    return {std::move(z), std::move(report)};
}

} // namespace commdet
