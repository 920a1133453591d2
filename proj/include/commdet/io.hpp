#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <commdet/graph.hpp>
#include <commdet/louvain.hpp>
#include <commdet/partition.hpp>

namespace commdet {
namespace io {

namespace detail {

inline std::ifstream open_input(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw input_error("cannot open " + path);
    return in;
}

inline std::ofstream open_output(const std::string &path) {
    std::ofstream out(path);
    if (!out)
        throw input_error("cannot open " + path + " for writing");
    return out;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
            ++j;
        if (j > i)
            out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::uint64_t parse_uint(std::string_view tok, const std::string &ctx) {
    std::uint64_t value = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || p != tok.data() + tok.size())
        throw input_error("malformed integer '" + std::string(tok) + "' in " + ctx);
    return value;
}

inline double parse_weight(std::string_view tok, const std::string &ctx) {
    double value = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || p != tok.data() + tok.size())
        throw input_error("malformed weight '" + std::string(tok) + "' in " + ctx);
    return value;
}

inline std::string format_weight(double w) {
    char buf[32];
    if (w == std::floor(w) && std::abs(w) < 1e15)
        std::snprintf(buf, sizeof(buf), "%.0f", w);
    else
        std::snprintf(buf, sizeof(buf), "%.17g", w);
    return buf;
}

} // namespace detail

/// Reads a METIS adjacency file: optional '%' comments, header "n m [fmt]",
/// line i holds the 1-indexed neighbors of node i (weights interleaved when
/// fmt is 1). Node-weight fmt codes are rejected.
inline Graph read_metis(const std::string &path) {
    auto in = detail::open_input(path);
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&](bool required) -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line[0] == '%')
                continue;
            return true;
        }
        if (required)
            throw input_error(path + ": unexpected end of file");
        return false;
    };

    if (!next_line(true))
        throw input_error(path + ": missing header");
    auto header = detail::split_ws(line);
    if (header.size() < 2 || header.size() > 3)
        throw input_error(path + ": malformed header");
    const count n = detail::parse_uint(header[0], path + " header");
    const count m = detail::parse_uint(header[1], path + " header");
    bool weighted = false;
    if (header.size() == 3) {
        const std::uint64_t fmt = detail::parse_uint(header[2], path + " header");
        if (fmt == 1)
            weighted = true;
        else if (fmt != 0)
            throw input_error(path + ": unsupported fmt code " + std::to_string(fmt)
                              + " (node weights are not supported)");
    }

    std::vector<std::vector<std::pair<node, edgeweight>>> adj(n);
    for (node u = 0; u < n; ++u) {
        if (!next_line(false))
            throw input_error(path + ": expected " + std::to_string(n) + " adjacency lines, got "
                              + std::to_string(u));
        auto toks = detail::split_ws(line);
        const std::size_t stride = weighted ? 2 : 1;
        if (toks.size() % stride != 0)
            throw input_error(path + ":" + std::to_string(lineno) + ": dangling weight token");
        for (std::size_t i = 0; i < toks.size(); i += stride) {
            const std::uint64_t v1 = detail::parse_uint(toks[i], path + ":" + std::to_string(lineno));
            if (v1 < 1 || v1 > n)
                throw input_error(path + ":" + std::to_string(lineno) + ": neighbor id " + std::to_string(v1)
                                  + " out of range");
            const double w =
                weighted ? detail::parse_weight(toks[i + 1], path + ":" + std::to_string(lineno)) : 1.0;
            if (!(w > 0.0))
                throw input_error(path + ":" + std::to_string(lineno) + ": nonpositive edge weight");
            adj[u].emplace_back(static_cast<node>(v1 - 1), w);
        }
    }
    if (next_line(false)) {
        auto toks = detail::split_ws(line);
        if (!toks.empty())
            throw input_error(path + ": trailing content after " + std::to_string(n) + " adjacency lines");
    }

    // symmetry check and reduction to undirected edges
    for (node u = 0; u < n; ++u)
        std::sort(adj[u].begin(), adj[u].end());
    EdgeList edges;
    for (node u = 0; u < n; ++u) {
        for (auto [v, w] : adj[u]) {
            if (v < u)
                continue;
            edges.push_back({u, v, w});
            if (v != u) {
                auto it = std::lower_bound(adj[v].begin(), adj[v].end(), std::make_pair(u, 0.0));
                if (it == adj[v].end() || it->first != u || it->second != w)
                    throw input_error(path + ": asymmetric adjacency between nodes " + std::to_string(u + 1)
                                      + " and " + std::to_string(v + 1));
            }
        }
    }
    Graph g = Graph::from_edges(n, edges);
    if (g.edge_count() != m)
        throw input_error(path + ": header promises " + std::to_string(m) + " edges, file contains "
                          + std::to_string(g.edge_count()));
    return g;
}

/// Writes METIS with edge weights (fmt 1). Inverse of read_metis.
inline void write_metis(const Graph &g, const std::string &path) {
    auto out = detail::open_output(path);
    out << g.node_count() << " " << g.edge_count() << " 1\n";
    for (node u = 0; u < g.node_count(); ++u) {
        bool first = true;
        g.for_neighbors(u, [&](node v, edgeweight w) {
            if (!first)
                out << " ";
            out << (v + 1) << " " << detail::format_weight(w);
            first = false;
        });
        out << "\n";
    }
    if (!out)
        throw input_error("write failed: " + path);
}

/// Reads a whitespace edge list: lines "u v [w]", '#' comments, arbitrary
/// nonnegative integer ids (densified in first-seen order). Duplicate
/// unordered pairs are merged by weight sum when merge_duplicates is set,
/// otherwise an error. original_ids, when non-null, receives the dense-id ->
/// original-id mapping.
inline Graph read_edge_list(const std::string &path, bool merge_duplicates = false,
                            std::vector<std::uint64_t> *original_ids = nullptr) {
    auto in = detail::open_input(path);
    std::string line;
    std::size_t lineno = 0;
    struct RawEdge {
        std::uint64_t u, v;
        double w;
    };
    std::vector<RawEdge> raw_edges;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        auto toks = detail::split_ws(std::string_view(line).substr(0, hash));
        if (toks.empty())
            continue;
        if (toks.size() != 2 && toks.size() != 3)
            throw input_error(path + ":" + std::to_string(lineno) + ": expected 'u v [w]'");
        const std::string ctx = path + ":" + std::to_string(lineno);
        const std::uint64_t u = detail::parse_uint(toks[0], ctx);
        const std::uint64_t v = detail::parse_uint(toks[1], ctx);
        const double w = toks.size() == 3 ? detail::parse_weight(toks[2], ctx) : 1.0;
        if (!(w > 0.0))
            throw input_error(ctx + ": nonpositive edge weight");
        raw_edges.push_back({u, v, w});
    }
    // densify ids in ascending numeric order
    std::vector<std::uint64_t> original;
    original.reserve(raw_edges.size() * 2);
    for (const RawEdge &e : raw_edges) {
        original.push_back(e.u);
        original.push_back(e.v);
    }
    std::sort(original.begin(), original.end());
    original.erase(std::unique(original.begin(), original.end()), original.end());
    std::unordered_map<std::uint64_t, node> remap;
    remap.reserve(original.size());
    for (node dense = 0; dense < original.size(); ++dense)
        remap[original[dense]] = dense;
    EdgeList edges;
    edges.reserve(raw_edges.size());
    for (const RawEdge &e : raw_edges)
        edges.push_back({remap[e.u], remap[e.v], e.w});
    Graph g = Graph::from_edges(original.size(), edges, merge_duplicates);
    if (original_ids)
        *original_ids = std::move(original);
    return g;
}

/// Writes "u v w" lines, one per undirected edge.
inline void write_edge_list(const Graph &g, const std::string &path) {
    auto out = detail::open_output(path);
    g.for_edges([&](node u, node v, edgeweight w) { out << u << " " << v << " " << detail::format_weight(w) << "\n"; });
    if (!out)
        throw input_error("write failed: " + path);
}

/// Line i (0-based) holds the community id of node i.
inline void write_partition(const Partition &z, const std::string &path) {
    auto out = detail::open_output(path);
    for (node u = 0; u < z.size(); ++u)
        out << z[u] << "\n";
    if (!out)
        throw input_error("write failed: " + path);
}

inline Partition read_partition(const std::string &path) {
    auto in = detail::open_input(path);
    Partition z;
    std::string line;
    std::size_t lineno = 0;
    index ub = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = detail::split_ws(line);
        if (toks.empty())
            continue;
        if (toks.size() != 1)
            throw input_error(path + ":" + std::to_string(lineno) + ": expected one community id per line");
        const index c = detail::parse_uint(toks[0], path + ":" + std::to_string(lineno));
        z.data().push_back(c);
        ub = std::max(ub, c + 1);
    }
    z.set_upper_bound(ub > 0 ? ub : 1);
    return z;
}

/// Contracts g by z and writes the community graph in METIS format, plus a
/// "<path>.sizes" sidecar with "community_id size" lines.
inline void write_community_graph(const Graph &g, const Partition &z, const std::string &path) {
    const Partition zc = z.is_compact() ? z : z.compacted();
    CoarseningResult cr = coarsen(g, zc);
    write_metis(cr.coarse, path);
    auto sizes = zc.community_sizes();
    auto out = detail::open_output(path + ".sizes");
    for (index c = 0; c < sizes.size(); ++c)
        out << c << " " << sizes[c] << "\n";
    if (!out)
        throw input_error("write failed: " + path + ".sizes");
}

} // namespace io
} // namespace commdet
