#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fleetsim/scenario.hpp"
#include "fleetsim/taxi_economics.hpp"

namespace fleetsim {

// Raw outcome of one simulation run. Request rows use NaN for fields that do
// not apply (e.g. pickup time of an unserved request).
struct RunMetrics {
    std::string scenario;
    std::string strategy;
    uint64_t seed = 0;
    std::vector<std::string> request_columns;
    std::vector<std::vector<double>> request_rows;
    std::vector<double> vehicle_distance_m;
    std::map<std::string, double> summary;
    std::vector<CompensationRecord> compensations;  // taxi runs only
    uint64_t event_log_hash = 0;
    uint64_t spawn_log_hash = 0;
};

void write_requests_csv(const RunMetrics& metrics, const std::string& path);
void write_summary_json(const RunMetrics& metrics, const std::string& path);

// Reads back what write_summary_json wrote (used to rebuild reports from
// stored artifacts).
struct StoredSummary {
    std::string scenario;
    std::string strategy;
    uint64_t seed = 0;
    std::map<std::string, double> summary;
    uint64_t event_log_hash = 0;
    uint64_t spawn_log_hash = 0;
};
StoredSummary read_summary_json(const std::string& path);

struct Stats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct ReplicateResult {
    std::vector<RunMetrics> runs;
    std::map<std::string, Stats> aggregate;  // componentwise over run summaries
};

std::map<std::string, Stats> aggregate_summaries(
    const std::vector<std::map<std::string, double>>& summaries);

}  // namespace fleetsim
