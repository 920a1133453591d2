#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include <commdet/graph.hpp>

namespace commdet {

/// Dense node -> community assignment. Community ids are arbitrary until
/// compacted; after compaction they are consecutive in [0, k).
class Partition {
public:
    Partition() = default;
    explicit Partition(count n, index initial = 0) : data_(n, initial), upper_(initial + 1) {}

    static Partition singletons(count n) {
        Partition z;
        z.data_.resize(n);
        for (node u = 0; u < n; ++u)
            z.data_[u] = u;
        z.upper_ = n > 0 ? n : 1;
        return z;
    }

    count size() const { return data_.size(); }
    index upper_bound() const { return upper_; }
    void set_upper_bound(index ub) { upper_ = ub; }

    index operator[](node u) const { return data_[u]; }
    index &operator[](node u) { return data_[u]; }

    const std::vector<index> &data() const { return data_; }
    std::vector<index> &data() { return data_; }

    /// Remaps community ids to [0, k) in first-appearance order; preserves
    /// the same-community equivalence relation.
    Partition compacted() const {
        Partition out;
        out.data_.resize(data_.size());
        std::unordered_map<index, index> remap;
        remap.reserve(data_.size());
        index next = 0;
        for (node u = 0; u < data_.size(); ++u) {
            auto [it, fresh] = remap.try_emplace(data_[u], next);
            if (fresh)
                ++next;
            out.data_[u] = it->second;
        }
        out.upper_ = next > 0 ? next : 1;
        return out;
    }

    count community_count() const {
        std::unordered_map<index, count> seen;
        for (index c : data_)
            ++seen[c];
        return seen.size();
    }

    /// Community id -> member count, indexed by id. Requires compacted ids.
    std::vector<count> community_sizes() const {
        std::vector<count> sizes;
        for (index c : data_) {
            if (c >= sizes.size())
                sizes.resize(c + 1, 0);
            ++sizes[c];
        }
        return sizes;
    }

    bool is_compact() const {
        std::vector<bool> used;
        for (index c : data_) {
            if (c >= used.size())
                used.resize(c + 1, false);
            used[c] = true;
        }
        for (bool b : used)
            if (!b)
                return false;
        return true;
    }

    bool operator==(const Partition &other) const { return data_ == other.data_; }

private:
    std::vector<index> data_;
    index upper_ = 1;
};

inline Partition singleton_partition(const Graph &g) {
    return Partition::singletons(g.node_count());
}

} // namespace commdet
