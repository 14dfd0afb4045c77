#pragma once

#include <map>
#include <string>
#include <vector>

#include "fleetsim/metrics.hpp"
#include "fleetsim/scenario.hpp"

namespace fleetsim {

// Cross-strategy comparison over shared seeds (paired runs). Built strictly
// from the per-run summary files on disk so a stored report can always be
// regenerated byte-identically.
struct ComparisonReport {
    std::string scenario;
    std::string primary_metric;
    std::vector<std::string> strategies;
    std::vector<uint64_t> seeds;
    std::map<std::string, std::map<std::string, Stats>> aggregates;  // strategy -> stats
    // improvement_pct[benchmark][other] = (t_bench - t_other) / t_bench * 100
    std::map<std::string, std::map<std::string, double>> improvement_pct;
    bool paired_spawns = false;  // demand traces identical across strategies per seed

    std::string to_json_text() const;
    std::string to_csv_text() const;
};

std::string summary_filename(const std::string& strategy, uint64_t seed);
std::string requests_filename(const std::string& strategy, uint64_t seed);

// The waiting/response metric the paper tables compare per scenario.
std::string primary_metric_for(ScenarioKind kind);

// Reads <out_dir>/<strategy>_seed<seed>.summary.json for every combination.
ComparisonReport build_report(const std::string& out_dir, ScenarioKind scenario,
                              const std::vector<std::string>& strategies,
                              const std::vector<uint64_t>& seeds);

// Runs each strategy over the shared seeds, writes per-run artifacts into
// out_dir and returns the report built back from those files.
ComparisonReport compare_strategies(const ScenarioConfig& base,
                                    const std::vector<std::string>& strategies,
                                    const std::vector<uint64_t>& seeds,
                                    const std::string& out_dir);

}  // namespace fleetsim
