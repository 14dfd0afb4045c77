#include "fleetsim/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fleetsim/angioplasty.hpp"
#include "fleetsim/sim.hpp"
#include <json.hpp>

namespace fleetsim {

using nlohmann::json;

std::string summary_filename(const std::string& strategy, uint64_t seed) {
    return strategy + "_seed" + std::to_string(seed) + ".summary.json";
}

std::string requests_filename(const std::string& strategy, uint64_t seed) {
    return strategy + "_seed" + std::to_string(seed) + ".requests.csv";
}

std::string primary_metric_for(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::Ems: return "mean_response_s";
        case ScenarioKind::Angioplasty: return "mean_delay_s";
        case ScenarioKind::Taxi: return "mean_wait_s";
    }
    return "mean_wait_s";
}

ComparisonReport build_report(const std::string& out_dir, ScenarioKind scenario,
                              const std::vector<std::string>& strategies,
                              const std::vector<uint64_t>& seeds) {
    ComparisonReport report;
    report.scenario = to_string(scenario);
    report.primary_metric = primary_metric_for(scenario);
    report.strategies = strategies;
    report.seeds = seeds;
    report.paired_spawns = true;

    std::map<std::string, std::vector<std::map<std::string, double>>> summaries;
    std::map<uint64_t, uint64_t> spawn_hash_by_seed;
    for (const std::string& strategy : strategies) {
        for (uint64_t seed : seeds) {
            std::filesystem::path p =
                std::filesystem::path(out_dir) / summary_filename(strategy, seed);
            StoredSummary s = read_summary_json(p.string());
            summaries[strategy].push_back(s.summary);
            auto [it, fresh] = spawn_hash_by_seed.try_emplace(seed, s.spawn_log_hash);
            if (!fresh && it->second != s.spawn_log_hash) report.paired_spawns = false;
        }
    }
    for (const std::string& strategy : strategies) {
        report.aggregates[strategy] = aggregate_summaries(summaries[strategy]);
    }
    for (const std::string& bench : strategies) {
        double t_bench = report.aggregates[bench][report.primary_metric].mean;
        for (const std::string& other : strategies) {
            double t_other = report.aggregates[other][report.primary_metric].mean;
            report.improvement_pct[bench][other] =
                t_bench > 0.0 ? performance_P(t_bench, t_other) : 0.0;
        }
    }
    return report;
}

ComparisonReport compare_strategies(const ScenarioConfig& base,
                                    const std::vector<std::string>& strategies,
                                    const std::vector<uint64_t>& seeds,
                                    const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (const std::string& name : strategies) {
        ScenarioConfig cfg = base;
        cfg.strategy = strategy_from_string(name);
        cfg.validate();
        for (uint64_t seed : seeds) {
            RunMetrics m = run_with_seed(cfg, seed);
            std::filesystem::path dir(out_dir);
            write_requests_csv(m, (dir / requests_filename(name, seed)).string());
            write_summary_json(m, (dir / summary_filename(name, seed)).string());
        }
    }
    return build_report(out_dir, base.scenario, strategies, seeds);
}

std::string ComparisonReport::to_json_text() const {
    json j;
    j["scenario"] = scenario;
    j["primary_metric"] = primary_metric;
    j["strategies"] = strategies;
    j["seeds"] = seeds;
    j["paired_spawns"] = paired_spawns;
    json aggr;
    for (const auto& [strategy, stats] : aggregates) {
        json s;
        for (const auto& [key, st] : stats) {
            s[key] = {{"mean", st.mean}, {"min", st.min}, {"max", st.max}};
        }
        aggr[strategy] = s;
    }
    j["aggregates"] = aggr;
    json imp;
    for (const auto& [bench, row] : improvement_pct) {
        json r;
        for (const auto& [other, value] : row) r[other] = value;
        imp[bench] = r;
    }
    j["improvement_pct"] = imp;
    return j.dump(2) + "\n";
}

std::string ComparisonReport::to_csv_text() const {
    std::ostringstream out;
    out.precision(10);
    out << "strategy," << primary_metric << "_mean," << primary_metric << "_min,"
        << primary_metric << "_max";
    for (const std::string& other : strategies) out << ",improvement_vs_" << other << "_pct";
    out << "\n";
    for (const std::string& strategy : strategies) {
        auto stats = aggregates.at(strategy).at(primary_metric);
        out << strategy << "," << stats.mean << "," << stats.min << "," << stats.max;
        for (const std::string& bench : strategies) {
            out << "," << improvement_pct.at(bench).at(strategy);
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace fleetsim
