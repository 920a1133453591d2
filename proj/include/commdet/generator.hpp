#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <commdet/graph.hpp>
#include <commdet/partition.hpp>

namespace commdet {

/// Planted-partition model: n nodes in k near-equal blocks, each intra-block
/// pair an edge with probability p_in, inter-block with p_out.
struct PlantedPartitionSpec {
    count n = 0;
    count k = 1;
    double p_in = 0.0;
    double p_out = 0.0;
    std::uint64_t seed = 1;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t row_key(std::uint64_t seed, node u) {
    return splitmix64(seed ^ splitmix64(u));
}

inline double row_uniform(std::uint64_t key, node v) {
    return static_cast<double>(splitmix64(key ^ splitmix64(v)) >> 11) * 0x1.0p-53;
}

/// Uniform double in [0,1) from the (seed, u, v) triple; pair-indexed so
/// generation is order-independent and parallelizes.
inline double pair_uniform(std::uint64_t seed, node u, node v) {
    return row_uniform(row_key(seed, u), v);
}

} // namespace detail

/// Block of node u when n nodes are split into k contiguous near-equal blocks.
inline index planted_block(node u, count n, count k) {
    return static_cast<index>((static_cast<unsigned __int128>(u) * k) / n);
}

inline std::pair<Graph, Partition> generate_planted(const PlantedPartitionSpec &spec, int workers = 1) {
    if (spec.k < 1 || (spec.n > 0 && spec.k > spec.n))
        throw std::invalid_argument("planted partition: need 1 <= k <= n");
    if (spec.p_out < 0.0 || spec.p_in > 1.0 || spec.p_out > spec.p_in)
        throw std::invalid_argument("planted partition: need 0 <= p_out <= p_in <= 1");
    const count n = spec.n;
    Partition truth;
    truth.data().resize(n);
    for (node u = 0; u < n; ++u)
        truth[u] = planted_block(u, n, spec.k);
    truth.set_upper_bound(n > 0 ? spec.k : 1);

    const int t = resolve_workers(workers);
    std::vector<EdgeList> local(t);
#pragma omp parallel num_threads(t)
    {
        const int tid = omp_get_thread_num();
        EdgeList &edges = local[tid];
#pragma omp for schedule(guided) nowait
        for (std::int64_t ui = 0; ui < static_cast<std::int64_t>(n); ++ui) {
            const node u = static_cast<node>(ui);
            const index bu = truth[u];
            // with p_out == 0 only the tail of u's own block can connect
            node v_end = n;
            if (spec.p_out == 0.0) {
                v_end = u + 1;
                while (v_end < n && planted_block(v_end, n, spec.k) == bu)
                    ++v_end;
            }
            const std::uint64_t key = detail::row_key(spec.seed, u);
            for (node v = u + 1; v < v_end; ++v) {
                const double p = (truth[v] == bu) ? spec.p_in : spec.p_out;
                if (p > 0.0 && detail::row_uniform(key, v) < p)
                    edges.push_back({u, v, 1.0});
            }
        }
    }
    // merge in u order so the edge list is canonical for any worker count
    EdgeList edges;
    std::size_t total = 0;
    for (auto &l : local)
        total += l.size();
    edges.reserve(total);
    std::vector<std::size_t> pos(t, 0);
    for (node u = 0; u < n; ++u) {
        for (int w = 0; w < t; ++w) {
            auto &l = local[w];
            while (pos[w] < l.size() && l[pos[w]].u == u)
                edges.push_back(l[pos[w]++]);
        }
    }
    return {Graph::from_edges(n, edges), std::move(truth)};
}

} // namespace commdet
