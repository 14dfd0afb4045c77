#include <doctest.h>

#include <filesystem>

#include "fleetsim/report.hpp"
#include "fleetsim/sim.hpp"

using namespace fleetsim;

namespace {

ScenarioConfig tiny_taxi() {
    ScenarioConfig cfg;
    cfg.name = "tiny";
    cfg.scenario = ScenarioKind::Taxi;
    cfg.strategy = Strategy::Fcfs;
    cfg.demand_kind = DemandKind::CenterPeriphery;
    cfg.tick_s = 5;
    cfg.horizon_s = 1800;
    cfg.region_width = cfg.region_height = 9000;
    cfg.fleet_count = 15;
    cfg.speed_kmh = 17;
    cfg.customers_per_window = 8;
    cfg.window_s = 900;
    return cfg;
}

}  // namespace

TEST_CASE("compare_strategies writes artifacts and builds a paired report") {
    std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "fleetsim_report_test";
    std::filesystem::remove_all(dir);

    ScenarioConfig cfg = tiny_taxi();
    std::vector<std::string> strategies{"FCFS", "NVNR", "DYNRA"};
    std::vector<uint64_t> seeds{1, 2};
    ComparisonReport report = compare_strategies(cfg, strategies, seeds, dir.string());

    CHECK(report.paired_spawns);
    CHECK(report.primary_metric == "mean_wait_s");
    for (const std::string& s : strategies) {
        CHECK(report.improvement_pct.at(s).at(s) == doctest::Approx(0.0));
        for (uint64_t seed : seeds) {
            CHECK(std::filesystem::exists(dir / requests_filename(s, seed)));
            CHECK(std::filesystem::exists(dir / summary_filename(s, seed)));
        }
    }

    SUBCASE("regeneration from stored files is byte-identical") {
        ComparisonReport again = build_report(dir.string(), cfg.scenario, strategies, seeds);
        CHECK(again.to_json_text() == report.to_json_text());
        CHECK(again.to_csv_text() == report.to_csv_text());
    }

    SUBCASE("degenerate single-strategy report") {
        ComparisonReport solo = compare_strategies(cfg, {"FCFS"}, {1}, (dir / "solo").string());
        CHECK(solo.strategies.size() == 1);
        CHECK(solo.improvement_pct.at("FCFS").at("FCFS") == doctest::Approx(0.0));
    }

    std::filesystem::remove_all(dir);
}

TEST_CASE("primary metrics per scenario") {
    CHECK(primary_metric_for(ScenarioKind::Ems) == "mean_response_s");
    CHECK(primary_metric_for(ScenarioKind::Angioplasty) == "mean_delay_s");
    CHECK(primary_metric_for(ScenarioKind::Taxi) == "mean_wait_s");
}
