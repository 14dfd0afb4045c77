#include "fleetsim/metrics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fleetsim {

using nlohmann::json;

void write_requests_csv(const RunMetrics& metrics, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(10);
    for (size_t c = 0; c < metrics.request_columns.size(); ++c) {
        out << (c ? "," : "") << metrics.request_columns[c];
    }
    out << "\n";
    for (const auto& row : metrics.request_rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out << ",";
            if (!std::isnan(row[c])) out << row[c];
        }
        out << "\n";
    }
}

void write_summary_json(const RunMetrics& metrics, const std::string& path) {
    json j;
    j["scenario"] = metrics.scenario;
    j["strategy"] = metrics.strategy;
    j["seed"] = metrics.seed;
    j["event_log_hash"] = metrics.event_log_hash;
    j["spawn_log_hash"] = metrics.spawn_log_hash;
    json s;
    for (const auto& [key, value] : metrics.summary) s[key] = value;
    j["summary"] = s;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

StoredSummary read_summary_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j = json::parse(in);
    StoredSummary s;
    s.scenario = j.at("scenario").get<std::string>();
    s.strategy = j.at("strategy").get<std::string>();
    s.seed = j.at("seed").get<uint64_t>();
    s.event_log_hash = j.at("event_log_hash").get<uint64_t>();
    s.spawn_log_hash = j.at("spawn_log_hash").get<uint64_t>();
    for (const auto& [key, value] : j.at("summary").items()) {
        s.summary[key] = value.get<double>();
    }
    return s;
}

std::map<std::string, Stats> aggregate_summaries(
    const std::vector<std::map<std::string, double>>& summaries) {
    std::map<std::string, Stats> out;
    std::map<std::string, int> counts;
    for (const auto& summary : summaries) {
        for (const auto& [key, value] : summary) {
            auto [it, fresh] = out.try_emplace(key);
            if (fresh) {
                it->second = {0.0, value, value};
            }
            it->second.mean += value;
            it->second.min = std::min(it->second.min, value);
            it->second.max = std::max(it->second.max, value);
            counts[key] += 1;
        }
    }
    for (auto& [key, stats] : out) stats.mean /= counts[key];
    return out;
}

}  // namespace fleetsim
