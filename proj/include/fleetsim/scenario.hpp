#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fleetsim/core.hpp"
#include "fleetsim/redeployment.hpp"
#include "fleetsim/taxi_economics.hpp"

namespace fleetsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ScenarioKind { Ems, Angioplasty, Taxi };

enum class Strategy { Static, Drard, Fcfs, Nvnr, Dynra, ThreeLevel, EmsFcfs };

std::string to_string(ScenarioKind kind);
std::string to_string(Strategy strategy);
Strategy strategy_from_string(const std::string& name);

enum class DemandKind { GridDensity, UniformRegion, CenterPeriphery };

struct DensitySpec {
    enum class Type { Uniform, GaussianMixture, Csv };
    Type type = Type::Uniform;
    int bumps = 4;
    uint64_t seed = 12345;
    std::string csv_path;
};

struct ScenarioConfig {
    std::string name = "scenario";
    ScenarioKind scenario = ScenarioKind::Taxi;
    Strategy strategy = Strategy::Fcfs;
    uint64_t seed = 1;
    Seconds tick_s = 5.0;
    Seconds horizon_s = 3600.0;
    Meters region_width = 9000.0;
    Meters region_height = 9000.0;
    int fleet_count = 10;
    double speed_kmh = 17.0;
    uint64_t layout_seed = 777;  // fixed infrastructure (EMS stations, density bumps)

    DemandKind demand_kind = DemandKind::CenterPeriphery;
    int patients = 0;               // total (ems, angioplasty)
    int customers_per_window = 0;   // taxi
    Seconds window_s = 900.0;       // taxi demand window

    // ems
    int stations = 0;
    std::vector<DensitySpec> densities;
    Seconds density_switch_s = 3600.0;  // grid rotation cadence when several are given
    Meters cell_size_m = 1300.0;
    Meters move_threshold_m = 500.0;
    Seconds call_duration_s = 120.0;
    Seconds in_situ_s = 900.0;

    // angioplasty
    int hospitals = 0;
    int teams = 0;
    double team_speed_kmh = 60.0;
    Seconds procedure_s = 3600.0;
    Seconds t1_s = 120.0;
    Seconds period_s = 60.0;
    int periods_per_patient = 10;
    std::optional<Seconds> t_p_max_s;
    bool run_to_completion = true;

    // taxi
    EconomicParams economics;
    Seconds pickup_s = 30.0;
    Seconds dropoff_s = 90.0;

    double speed_mps() const { return speed_kmh / 3.6; }
    double team_speed_mps() const { return team_speed_kmh / 3.6; }

    static ScenarioConfig from_json_file(const std::string& path);
    static ScenarioConfig from_json_text(const std::string& text);
    std::string to_json_text() const;

    // Throws ConfigError naming the offending key.
    void validate() const;
};

// One generated request, fixed before the simulation starts so demand traces
// are identical across strategies sharing a seed.
struct SpawnEvent {
    RequestId id = -1;
    Seconds time = 0.0;
    Point2D origin;
    std::optional<Point2D> destination;
    Meters trip_m = 0.0;
};

// Builds the configured density grids (synthetic mixtures are seeded by the
// layout seed, not the run seed).
std::vector<DensityGrid> build_density_grids(const ScenarioConfig& cfg);

// Demand for one run. grids may be empty for non-EMS scenarios.
std::vector<SpawnEvent> generate_demand(const ScenarioConfig& cfg,
                                        const std::vector<DensityGrid>& grids, uint64_t seed);

// Fixed station/hospital layout sampling.
std::vector<Point2D> sample_uniform_points(int count, Meters width, Meters height, uint64_t seed);

}  // namespace fleetsim
