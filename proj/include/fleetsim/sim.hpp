#pragma once

#include "fleetsim/metrics.hpp"
#include "fleetsim/scenario.hpp"

namespace fleetsim {

// One deterministic, single-threaded run of the configured scenario.
// Per tick: demand spawn -> movement/arrivals -> strategy invocation ->
// metrics. Identical (config, seed) pairs produce identical event-log hashes.
RunMetrics run(const ScenarioConfig& config);
RunMetrics run_with_seed(const ScenarioConfig& config, uint64_t seed);

// Sequential replications sharing one config; the aggregate holds
// componentwise mean/min/max over the per-run summaries.
ReplicateResult replicate(const ScenarioConfig& config, const std::vector<uint64_t>& seeds);

}  // namespace fleetsim
