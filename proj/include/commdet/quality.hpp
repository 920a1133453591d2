#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <commdet/graph.hpp>
#include <commdet/partition.hpp>

namespace commdet {

inline void check_cover(const Graph &g, const Partition &z) {
    if (z.size() != g.node_count())
        throw std::invalid_argument("partition length " + std::to_string(z.size()) + " does not match node count "
                                    + std::to_string(g.node_count()));
}

/// Fraction of total edge weight inside communities; 0 for edgeless graphs.
inline double coverage(const Graph &g, const Partition &z) {
    check_cover(g, z);
    if (g.total_edge_weight() == 0.0)
        return 0.0;
    edgeweight intra = 0.0;
    g.for_edges([&](node u, node v, edgeweight w) {
        if (z[u] == z[v])
            intra += w;
    });
    return intra / g.total_edge_weight();
}

/// mod(z, G) = sum_C ( w(C)/w(E) - gamma * vol(C)^2 / (4 w(E)^2) ).
/// gamma = 1 is standard modularity. Undefined for w(E) = 0.
inline double modularity(const Graph &g, const Partition &z, double gamma = 1.0) {
    check_cover(g, z);
    const edgeweight total = g.total_edge_weight();
    if (total == 0.0)
        throw std::domain_error("modularity undefined for graph with zero total edge weight");
    std::vector<edgeweight> intra(z.upper_bound(), 0.0);
    std::vector<edgeweight> vol(z.upper_bound(), 0.0);
    g.for_edges([&](node u, node v, edgeweight w) {
        if (z[u] == z[v])
            intra[z[u]] += w;
    });
    g.for_nodes([&](node u) { vol[z[u]] += g.volume(u); });
    double mod = 0.0;
    for (index c = 0; c < z.upper_bound(); ++c)
        mod += intra[c] / total - gamma * vol[c] * vol[c] / (4.0 * total * total);
    return mod;
}

/// Graph-structural Rand index: the fraction of edges on which the two
/// partitions agree (endpoints joined in both, or separated in both).
/// Self-loops always agree.
inline double graph_rand_index(const Graph &g, const Partition &a, const Partition &b) {
    check_cover(g, a);
    check_cover(g, b);
    if (g.edge_count() == 0)
        throw std::domain_error("graph-structural Rand index undefined for edgeless graph");
    count agree = 0;
    g.for_edges([&](node u, node v, edgeweight) {
        const bool in_a = a[u] == a[v];
        const bool in_b = b[u] == b[v];
        if (in_a == in_b)
            ++agree;
    });
    return static_cast<double>(agree) / static_cast<double>(g.edge_count());
}

struct QualityReport {
    double modularity = 0.0;
    double coverage = 0.0;
    count community_count = 0;
    std::map<count, count> size_histogram; // community size -> number of communities

    std::string to_text() const {
        std::ostringstream os;
        os.precision(15);
        os << "modularity " << modularity << "\n";
        os << "coverage " << coverage << "\n";
        os << "communities " << community_count << "\n";
        for (auto [size, n] : size_histogram)
            os << "size_" << size << " " << n << "\n";
        return os.str();
    }
};

inline QualityReport evaluate(const Graph &g, const Partition &z, double gamma = 1.0) {
    QualityReport r;
    r.coverage = coverage(g, z);
    r.modularity = g.total_edge_weight() > 0 ? modularity(g, z, gamma) : 0.0;
    const Partition zc = z.compacted();
    const auto sizes = zc.community_sizes();
    r.community_count = sizes.size();
    for (count s : sizes)
        ++r.size_histogram[s];
    return r;
}

} // namespace commdet
