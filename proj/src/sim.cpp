#include "fleetsim/sim.hpp"

#include "sim_internal.hpp"

namespace fleetsim {

RunMetrics run_with_seed(const ScenarioConfig& config, uint64_t seed) {
    config.validate();
    switch (config.scenario) {
        case ScenarioKind::Ems: return run_ems(config, seed);
        case ScenarioKind::Angioplasty: return run_angioplasty(config, seed);
        case ScenarioKind::Taxi: return run_taxi(config, seed);
    }
    throw ConfigError("unknown scenario kind");
}

RunMetrics run(const ScenarioConfig& config) {
    return run_with_seed(config, config.seed);
}

ReplicateResult replicate(const ScenarioConfig& config, const std::vector<uint64_t>& seeds) {
    if (seeds.empty()) throw ConfigError("replicate: needs at least one seed");
    ReplicateResult result;
    std::vector<std::map<std::string, double>> summaries;
    for (uint64_t seed : seeds) {
        result.runs.push_back(run_with_seed(config, seed));
        summaries.push_back(result.runs.back().summary);
    }
    result.aggregate = aggregate_summaries(summaries);
    return result;
}

}  // namespace fleetsim
