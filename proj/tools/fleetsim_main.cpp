// fleetsim: run, compare and validate fleet-coordination scenarios.
//
// Exit codes: 0 success, 2 config error, 3 runtime error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fleetsim/report.hpp"
#include "fleetsim/sim.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int do_run(const std::string& config_path, const std::string& out_dir,
           std::optional<uint64_t> seed_override, const std::string& format) {
    fleetsim::ScenarioConfig cfg = fleetsim::ScenarioConfig::from_json_file(config_path);
    if (seed_override) cfg.seed = *seed_override;
    std::filesystem::create_directories(out_dir);
    fleetsim::RunMetrics m = fleetsim::run(cfg);
    std::filesystem::path dir(out_dir);
    std::string strategy = fleetsim::to_string(cfg.strategy);
    if (format == "csv" || format == "both") {
        fleetsim::write_requests_csv(
            m, (dir / fleetsim::requests_filename(strategy, cfg.seed)).string());
    }
    if (format == "json" || format == "both") {
        fleetsim::write_summary_json(
            m, (dir / fleetsim::summary_filename(strategy, cfg.seed)).string());
    }
    std::cout << cfg.name << " " << strategy << " seed=" << cfg.seed << "\n";
    for (const auto& [key, value] : m.summary) {
        std::cout << "  " << key << " = " << value << "\n";
    }
    std::cout << "  event_log_hash = " << m.event_log_hash << "\n";
    return 0;
}

int do_compare(const std::string& config_path, const std::vector<std::string>& strategies,
               const std::vector<uint64_t>& seeds, const std::string& out_dir) {
    fleetsim::ScenarioConfig cfg = fleetsim::ScenarioConfig::from_json_file(config_path);
    std::vector<uint64_t> use_seeds = seeds.empty() ? std::vector<uint64_t>{cfg.seed} : seeds;
    std::vector<std::string> use_strategies = strategies;
    if (use_strategies.empty()) use_strategies.push_back(fleetsim::to_string(cfg.strategy));

    fleetsim::ComparisonReport report =
        fleetsim::compare_strategies(cfg, use_strategies, use_seeds, out_dir);

    std::filesystem::path dir(out_dir);
    std::ofstream(dir / "report.json") << report.to_json_text();
    std::ofstream(dir / "report.csv") << report.to_csv_text();
    std::cout << report.to_csv_text();
    if (!report.paired_spawns) {
        std::cout << "warning: demand traces were not identical across strategies\n";
    }
    return 0;
}

int do_validate(const std::string& config_path) {
    fleetsim::ScenarioConfig cfg = fleetsim::ScenarioConfig::from_json_file(config_path);
    std::cout << "ok: " << cfg.name << " (" << fleetsim::to_string(cfg.scenario) << ", "
              << fleetsim::to_string(cfg.strategy) << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fleet coordination simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string format = "both";
    std::optional<uint64_t> seed_override;
    std::vector<std::string> strategies;
    std::vector<uint64_t> seeds;

    CLI::App* cmd_run = app.add_subcommand("run", "run one scenario");
    cmd_run->add_option("config", config_path, "scenario config (JSON)")->required();
    cmd_run->add_option("--out", out_dir, "output directory");
    cmd_run->add_option("--seed", seed_override, "override the config seed");
    cmd_run->add_option("--format", format, "csv|json|both")
        ->check(CLI::IsMember({"csv", "json", "both"}));

    CLI::App* cmd_compare = app.add_subcommand("compare", "compare strategies on shared seeds");
    cmd_compare->add_option("config", config_path, "scenario config (JSON)")->required();
    cmd_compare->add_option("--strategies", strategies, "strategies to compare");
    cmd_compare->add_option("--seeds", seeds, "seeds shared across strategies");
    cmd_compare->add_option("--out", out_dir, "output directory");

    CLI::App* cmd_validate = app.add_subcommand("validate", "validate a config");
    cmd_validate->add_option("config", config_path, "scenario config (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) return do_run(config_path, out_dir, seed_override, format);
        if (cmd_compare->parsed()) return do_compare(config_path, strategies, seeds, out_dir);
        if (cmd_validate->parsed()) return do_validate(config_path);
    } catch (const fleetsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
