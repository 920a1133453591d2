#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include <commdet/quality.hpp>

namespace commdet {

struct LevelTiming {
    double move_ms = 0.0;
    double coarsen_ms = 0.0;
    double refine_ms = 0.0;
};

struct IterationRecord {
    count updated = 0;
    double ms = 0.0;
};

/// One detection run: algorithm, configuration echo, per-phase wall times
/// and the resulting quality figures.
struct RunReport {
    std::string algorithm;
    std::string input;
    int workers = 1;
    std::uint64_t seed = 0;
    double total_ms = 0.0;
    double modularity = 0.0;
    double coverage = 0.0;
    count community_count = 0;
    std::vector<LevelTiming> levels;        // PLM / PLMR, one entry per level
    std::vector<IterationRecord> iterations; // PLP
    double base_ms = 0.0;    // EPP phases
    double combine_ms = 0.0;
    double coarsen_ms = 0.0;
    double final_ms = 0.0;

    nlohmann::json to_json() const {
        nlohmann::json j{
            {"algorithm", algorithm},
            {"input", input},
            {"workers", workers},
            {"seed", seed},
            {"total_ms", total_ms},
            {"modularity", modularity},
            {"coverage", coverage},
            {"communities", community_count},
        };
        if (!levels.empty()) {
            auto &arr = j["levels"] = nlohmann::json::array();
            for (const auto &l : levels)
                arr.push_back({{"move_ms", l.move_ms}, {"coarsen_ms", l.coarsen_ms}, {"refine_ms", l.refine_ms}});
        }
        if (!iterations.empty()) {
            auto &arr = j["iterations"] = nlohmann::json::array();
            for (const auto &it : iterations)
                arr.push_back({{"updated", it.updated}, {"ms", it.ms}});
        }
        if (algorithm == "epp") {
            j["phases"] = {{"base_ms", base_ms},
                           {"combine_ms", combine_ms},
                           {"coarsen_ms", coarsen_ms},
                           {"final_ms", final_ms}};
        }
        return j;
    }
};

} // namespace commdet
