#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <omp.h>

namespace commdet {

using node = std::uint64_t;
using index = std::uint64_t;
using count = std::uint64_t;
using edgeweight = double;

/// Thrown on malformed input data (files, edge lists, flags).
class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Edge {
    node u;
    node v;
    edgeweight w;
};

using EdgeList = std::vector<Edge>;

inline int resolve_workers(int workers) {
    return workers > 0 ? workers : omp_get_max_threads();
}

/// Undirected weighted graph stored as an adjacency array (CSR).
/// Each undirected edge {u,v}, u != v, appears in both endpoint lists;
/// a self-loop {u,u} appears once in u's list. Immutable after construction.
class Graph {
public:
    Graph() = default;

    /// Builds a graph from an edge list. Endpoints must be < node_count and
    /// weights positive. Duplicate unordered pairs are an error unless
    /// merge_duplicates is set, in which case their weights are summed.
    static Graph from_edges(count node_count, const EdgeList &edges, bool merge_duplicates = false) {
        for (const Edge &e : edges) {
            if (e.u >= node_count || e.v >= node_count)
                throw input_error("edge endpoint out of range: " + std::to_string(e.u) + "," + std::to_string(e.v));
            if (!(e.w > 0.0))
                throw input_error("nonpositive edge weight on edge " + std::to_string(e.u) + "," + std::to_string(e.v));
        }
        std::vector<count> deg(node_count, 0);
        for (const Edge &e : edges) {
            ++deg[e.u];
            if (e.v != e.u)
                ++deg[e.v];
        }
        Graph g;
        g.offsets_.assign(node_count + 1, 0);
        for (node u = 0; u < node_count; ++u)
            g.offsets_[u + 1] = g.offsets_[u] + deg[u];
        g.neighbors_.resize(g.offsets_[node_count]);
        g.weights_.resize(g.offsets_[node_count]);
        std::vector<index> fill(g.offsets_.begin(), g.offsets_.end() - 1);
        auto put = [&](node u, node v, edgeweight w) {
            g.neighbors_[fill[u]] = v;
            g.weights_[fill[u]] = w;
            ++fill[u];
        };
        for (const Edge &e : edges) {
            put(e.u, e.v, e.w);
            if (e.v != e.u)
                put(e.v, e.u, e.w);
        }
        g.sort_and_merge(merge_duplicates);
        g.finalize();
        return g;
    }

    /// Builds from a full symmetric adjacency (both directions present for
    /// u != v, self-loops once). Used by coarsening; not validated beyond sort.
    static Graph from_adjacency(const std::vector<std::vector<std::pair<node, edgeweight>>> &adj) {
        const count n = adj.size();
        Graph g;
        g.offsets_.assign(n + 1, 0);
        for (node u = 0; u < n; ++u)
            g.offsets_[u + 1] = g.offsets_[u] + adj[u].size();
        g.neighbors_.resize(g.offsets_[n]);
        g.weights_.resize(g.offsets_[n]);
        for (node u = 0; u < n; ++u) {
            index pos = g.offsets_[u];
            for (auto [v, w] : adj[u]) {
                g.neighbors_[pos] = v;
                g.weights_[pos] = w;
                ++pos;
            }
        }
        g.finalize();
        return g;
    }

    count node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    count edge_count() const { return edge_count_; }
    edgeweight total_edge_weight() const { return total_weight_; }

    count degree(node u) const {
        check_node(u);
        return offsets_[u + 1] - offsets_[u];
    }

    /// vol(u): weighted degree with the self-loop counted twice.
    edgeweight volume(node u) const {
        check_node(u);
        return volumes_[u];
    }

    edgeweight loop_weight(node u) const {
        check_node(u);
        return loops_[u];
    }

    template <typename F>
    void for_neighbors(node u, F &&f) const {
        for (index i = offsets_[u]; i < offsets_[u + 1]; ++i)
            f(neighbors_[i], weights_[i]);
    }

    template <typename F>
    void for_nodes(F &&f) const {
        const count n = node_count();
        for (node u = 0; u < n; ++u)
            f(u);
    }

    /// Applies f once per node. Guided scheduling balances skewed degree
    /// distributions; with workers == 1 the order is ascending node id.
    template <typename F>
    void for_nodes_parallel(F &&f, int workers = 0) const {
        const std::int64_t n = static_cast<std::int64_t>(node_count());
        const int t = resolve_workers(workers);
#pragma omp parallel for schedule(guided) num_threads(t)
        for (std::int64_t u = 0; u < n; ++u)
            f(static_cast<node>(u));
    }

    /// Applies f once per undirected edge (u <= v).
    template <typename F>
    void for_edges(F &&f) const {
        const count n = node_count();
        for (node u = 0; u < n; ++u)
            for (index i = offsets_[u]; i < offsets_[u + 1]; ++i)
                if (neighbors_[i] >= u)
                    f(u, neighbors_[i], weights_[i]);
    }

    bool operator==(const Graph &other) const {
        return offsets_ == other.offsets_ && neighbors_ == other.neighbors_ && weights_ == other.weights_;
    }

private:
    void check_node(node u) const {
        if (u >= node_count())
            throw std::out_of_range("node id " + std::to_string(u) + " out of range");
    }

    void sort_and_merge(bool merge_duplicates) {
        const count n = node_count();
        for (node u = 0; u < n; ++u) {
            const index lo = offsets_[u], hi = offsets_[u + 1];
            std::vector<std::pair<node, edgeweight>> entries;
            entries.reserve(hi - lo);
            for (index i = lo; i < hi; ++i)
                entries.emplace_back(neighbors_[i], weights_[i]);
            std::sort(entries.begin(), entries.end());
            for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
                if (entries[i].first == entries[i + 1].first) {
                    if (!merge_duplicates)
                        throw input_error("duplicate edge " + std::to_string(u) + "," + std::to_string(entries[i].first));
                    merged_ = true;
                }
            }
            if (merged_) {
                std::vector<std::pair<node, edgeweight>> dedup;
                for (auto &e : entries) {
                    if (!dedup.empty() && dedup.back().first == e.first)
                        dedup.back().second += e.second;
                    else
                        dedup.push_back(e);
                }
                entries.swap(dedup);
            }
            for (std::size_t i = 0; i < entries.size(); ++i) {
                neighbors_[lo + i] = entries[i].first;
                weights_[lo + i] = entries[i].second;
            }
            if (lo + entries.size() != hi)
                shrink_marks_.push_back({u, lo + static_cast<index>(entries.size()), hi});
        }
        if (!shrink_marks_.empty())
            compact_storage();
    }

    // Drops slots left over after duplicate merging.
    void compact_storage() {
        const count n = node_count();
        std::vector<node> nb;
        std::vector<edgeweight> wt;
        std::vector<index> off(n + 1, 0);
        std::size_t mark = 0;
        for (node u = 0; u < n; ++u) {
            index hi = offsets_[u + 1];
            if (mark < shrink_marks_.size() && shrink_marks_[mark].u == u)
                hi = shrink_marks_[mark++].valid_end;
            for (index i = offsets_[u]; i < hi; ++i) {
                nb.push_back(neighbors_[i]);
                wt.push_back(weights_[i]);
            }
            off[u + 1] = nb.size();
        }
        offsets_ = std::move(off);
        neighbors_ = std::move(nb);
        weights_ = std::move(wt);
        shrink_marks_.clear();
    }

    void finalize() {
        const count n = node_count();
        loops_.assign(n, 0.0);
        volumes_.assign(n, 0.0);
        edgeweight total = 0.0;
        count m = 0;
        for (node u = 0; u < n; ++u) {
            edgeweight vol = 0.0;
            for (index i = offsets_[u]; i < offsets_[u + 1]; ++i) {
                const node v = neighbors_[i];
                const edgeweight w = weights_[i];
                vol += w;
                if (v == u) {
                    loops_[u] = w;
                    vol += w; // self-loop counts twice in vol
                    total += w;
                    ++m;
                } else if (v > u) {
                    total += w;
                    ++m;
                }
            }
            volumes_[u] = vol;
        }
        total_weight_ = total;
        edge_count_ = m;
    }

    struct ShrinkMark {
        node u;
        index valid_end;
        index slot_end;
    };

    std::vector<index> offsets_;
    std::vector<node> neighbors_;
    std::vector<edgeweight> weights_;
    std::vector<edgeweight> loops_;
    std::vector<edgeweight> volumes_;
    std::vector<ShrinkMark> shrink_marks_;
    count edge_count_ = 0;
    edgeweight total_weight_ = 0.0;
    bool merged_ = false;
};

} // namespace commdet
