#include "fleetsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fleetsim/rng.hpp"
#include <json.hpp>

namespace fleetsim {

using nlohmann::json;

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::Ems: return "ems";
        case ScenarioKind::Angioplasty: return "angioplasty";
        case ScenarioKind::Taxi: return "taxi";
    }
    return "?";
}

std::string to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::Static: return "STATIC";
        case Strategy::Drard: return "DRARD";
        case Strategy::Fcfs: return "FCFS";
        case Strategy::Nvnr: return "NVNR";
        case Strategy::Dynra: return "DYNRA";
        case Strategy::ThreeLevel: return "THREE_LEVEL";
        case Strategy::EmsFcfs: return "EMS_FCFS";
    }
    return "?";
}

Strategy strategy_from_string(const std::string& name) {
    if (name == "STATIC") return Strategy::Static;
    if (name == "DRARD") return Strategy::Drard;
    if (name == "FCFS") return Strategy::Fcfs;
    if (name == "NVNR") return Strategy::Nvnr;
    if (name == "DYNRA") return Strategy::Dynra;
    if (name == "THREE_LEVEL") return Strategy::ThreeLevel;
    if (name == "EMS_FCFS") return Strategy::EmsFcfs;
    throw ConfigError("unknown strategy: " + name);
}

namespace {

ScenarioKind scenario_from_string(const std::string& name) {
    if (name == "ems") return ScenarioKind::Ems;
    if (name == "angioplasty") return ScenarioKind::Angioplasty;
    if (name == "taxi") return ScenarioKind::Taxi;
    throw ConfigError("unknown scenario: " + name);
}

DensitySpec density_from_json(const json& j) {
    DensitySpec spec;
    std::string type = j.value("type", "uniform");
    if (type == "uniform") {
        spec.type = DensitySpec::Type::Uniform;
    } else if (type == "gaussian_mixture") {
        spec.type = DensitySpec::Type::GaussianMixture;
    } else if (type == "csv") {
        spec.type = DensitySpec::Type::Csv;
    } else {
        throw ConfigError("density.type: unknown value " + type);
    }
    spec.bumps = j.value("bumps", 4);
    spec.seed = j.value("seed", 12345ull);
    spec.csv_path = j.value("path", std::string{});
    return spec;
}

json density_to_json(const DensitySpec& spec) {
    json j;
    switch (spec.type) {
        case DensitySpec::Type::Uniform: j["type"] = "uniform"; break;
        case DensitySpec::Type::GaussianMixture: j["type"] = "gaussian_mixture"; break;
        case DensitySpec::Type::Csv: j["type"] = "csv"; break;
    }
    j["bumps"] = spec.bumps;
    j["seed"] = spec.seed;
    if (!spec.csv_path.empty()) j["path"] = spec.csv_path;
    return j;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    ScenarioConfig cfg;
    try {
        cfg.name = j.value("name", std::string("scenario"));
        cfg.scenario = scenario_from_string(j.at("scenario").get<std::string>());
        cfg.strategy = strategy_from_string(j.at("strategy").get<std::string>());
        cfg.seed = j.value("seed", 1ull);
        cfg.tick_s = j.value("tick_s", 5.0);
        cfg.horizon_s = j.at("horizon_s").get<double>();
        cfg.layout_seed = j.value("layout_seed", 777ull);

        const json& region = j.at("region");
        cfg.region_width = region.at("width_m").get<double>();
        cfg.region_height = region.at("height_m").get<double>();

        const json& fleet = j.at("fleet");
        cfg.fleet_count = fleet.at("count").get<int>();
        cfg.speed_kmh = fleet.at("speed_kmh").get<double>();

        const json& demand = j.at("demand");
        std::string kind = demand.value("kind", std::string{});
        if (kind == "grid_density") {
            cfg.demand_kind = DemandKind::GridDensity;
        } else if (kind == "uniform_region") {
            cfg.demand_kind = DemandKind::UniformRegion;
        } else if (kind == "center_periphery") {
            cfg.demand_kind = DemandKind::CenterPeriphery;
        } else if (kind.empty()) {
            cfg.demand_kind = cfg.scenario == ScenarioKind::Ems ? DemandKind::GridDensity
                              : cfg.scenario == ScenarioKind::Angioplasty
                                  ? DemandKind::UniformRegion
                                  : DemandKind::CenterPeriphery;
        } else {
            throw ConfigError("demand.kind: unknown value " + kind);
        }
        cfg.patients = demand.value("patients", 0);
        cfg.customers_per_window = demand.value("customers_per_window", 0);
        cfg.window_s = demand.value("window_s", 900.0);

        if (j.contains("ems")) {
            const json& e = j.at("ems");
            cfg.stations = e.value("stations", 0);
            cfg.cell_size_m = e.value("cell_size_m", 1300.0);
            cfg.move_threshold_m = e.value("move_threshold_m", 500.0);
            cfg.call_duration_s = e.value("call_duration_s", 120.0);
            cfg.in_situ_s = e.value("in_situ_s", 900.0);
            cfg.density_switch_s = e.value("density_switch_s", 3600.0);
            if (e.contains("density")) {
                cfg.densities.push_back(density_from_json(e.at("density")));
            }
            if (e.contains("densities")) {
                for (const json& d : e.at("densities")) {
                    cfg.densities.push_back(density_from_json(d));
                }
            }
        }

        if (j.contains("angioplasty")) {
            const json& a = j.at("angioplasty");
            cfg.hospitals = a.value("hospitals", 0);
            cfg.teams = a.value("teams", 0);
            cfg.team_speed_kmh = a.value("team_speed_kmh", cfg.speed_kmh);
            cfg.procedure_s = a.value("procedure_s", 3600.0);
            cfg.t1_s = a.value("t1_s", 120.0);
            cfg.period_s = a.value("period_s", 60.0);
            cfg.periods_per_patient = a.value("periods_per_patient", 10);
            cfg.in_situ_s = a.value("in_situ_s", 900.0);
            cfg.run_to_completion = a.value("run_to_completion", true);
            if (a.contains("t_p_max_s") && !a.at("t_p_max_s").is_null()) {
                cfg.t_p_max_s = a.at("t_p_max_s").get<double>();
            }
        }

        if (j.contains("taxi")) {
            const json& t = j.at("taxi");
            cfg.pickup_s = t.value("pickup_s", 30.0);
            cfg.dropoff_s = t.value("dropoff_s", 90.0);
            if (t.contains("economics")) {
                const json& e = t.at("economics");
                cfg.economics.fcost = e.value("fcost_eur", 2.4);
                cfg.economics.fare_per_km = e.value("fare_eur_per_km", 1.05);
                cfg.economics.vcost_per_km = e.value("vcost_eur_per_km", 0.2);
                cfg.economics.gamma_m_per_eur = e.value("gamma_m_per_eur", 1.0 / 0.00085);
                cfg.economics.initial_ledger = e.value("initial_ledger_eur", 0.0);
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config schema error: ") + e.what());
    }

    cfg.validate();
    return cfg;
}

std::string ScenarioConfig::to_json_text() const {
    json j;
    j["name"] = name;
    j["scenario"] = to_string(scenario);
    j["strategy"] = to_string(strategy);
    j["seed"] = seed;
    j["tick_s"] = tick_s;
    j["horizon_s"] = horizon_s;
    j["layout_seed"] = layout_seed;
    j["region"] = {{"width_m", region_width}, {"height_m", region_height}};
    j["fleet"] = {{"count", fleet_count}, {"speed_kmh", speed_kmh}};
    json demand;
    switch (demand_kind) {
        case DemandKind::GridDensity: demand["kind"] = "grid_density"; break;
        case DemandKind::UniformRegion: demand["kind"] = "uniform_region"; break;
        case DemandKind::CenterPeriphery: demand["kind"] = "center_periphery"; break;
    }
    if (patients > 0) demand["patients"] = patients;
    if (customers_per_window > 0) {
        demand["customers_per_window"] = customers_per_window;
        demand["window_s"] = window_s;
    }
    j["demand"] = demand;
    if (scenario == ScenarioKind::Ems) {
        json e;
        e["stations"] = stations;
        e["cell_size_m"] = cell_size_m;
        e["move_threshold_m"] = move_threshold_m;
        e["call_duration_s"] = call_duration_s;
        e["in_situ_s"] = in_situ_s;
        e["density_switch_s"] = density_switch_s;
        json ds = json::array();
        for (const DensitySpec& d : densities) ds.push_back(density_to_json(d));
        e["densities"] = ds;
        j["ems"] = e;
    } else if (scenario == ScenarioKind::Angioplasty) {
        json a;
        a["hospitals"] = hospitals;
        a["teams"] = teams;
        a["team_speed_kmh"] = team_speed_kmh;
        a["procedure_s"] = procedure_s;
        a["t1_s"] = t1_s;
        a["period_s"] = period_s;
        a["periods_per_patient"] = periods_per_patient;
        a["in_situ_s"] = in_situ_s;
        a["run_to_completion"] = run_to_completion;
        if (t_p_max_s) a["t_p_max_s"] = *t_p_max_s;
        j["angioplasty"] = a;
    } else {
        json t;
        t["pickup_s"] = pickup_s;
        t["dropoff_s"] = dropoff_s;
        t["economics"] = {{"fcost_eur", economics.fcost},
                          {"fare_eur_per_km", economics.fare_per_km},
                          {"vcost_eur_per_km", economics.vcost_per_km},
                          {"gamma_m_per_eur", economics.gamma_m_per_eur},
                          {"initial_ledger_eur", economics.initial_ledger}};
        j["taxi"] = t;
    }
    return j.dump(2) + "\n";
}

void ScenarioConfig::validate() const {
    if (!(tick_s > 0.0)) throw ConfigError("tick_s: must be > 0");
    if (!(horizon_s > 0.0)) throw ConfigError("horizon_s: must be > 0");
    double ratio = horizon_s / tick_s;
    if (std::abs(ratio - std::round(ratio)) > 1e-9) {
        throw ConfigError("horizon_s: must be a multiple of tick_s");
    }
    if (!(region_width > 0.0) || !(region_height > 0.0)) {
        throw ConfigError("region.width_m/height_m: must be > 0");
    }
    if (fleet_count < 1) throw ConfigError("fleet.count: must be >= 1");
    if (!(speed_kmh > 0.0)) throw ConfigError("fleet.speed_kmh: must be > 0");

    switch (scenario) {
        case ScenarioKind::Ems:
            if (strategy != Strategy::Static && strategy != Strategy::Drard) {
                throw ConfigError("strategy: ems scenarios accept STATIC or DRARD");
            }
            if (stations < 1) throw ConfigError("ems.stations: must be >= 1");
            if (patients < 0) throw ConfigError("demand.patients: must be >= 0");
            if (densities.empty()) throw ConfigError("ems.density: missing");
            if (!(cell_size_m > 0.0)) throw ConfigError("ems.cell_size_m: must be > 0");
            for (const DensitySpec& d : densities) {
                if (d.type == DensitySpec::Type::Csv) {
                    std::ifstream probe(d.csv_path);
                    if (!probe) throw ConfigError("ems.density.path: cannot open " + d.csv_path);
                }
                if (d.type == DensitySpec::Type::GaussianMixture && (d.bumps < 1 || d.bumps > 16)) {
                    throw ConfigError("ems.density.bumps: must be in [1,16]");
                }
            }
            break;
        case ScenarioKind::Angioplasty:
            if (strategy != Strategy::ThreeLevel && strategy != Strategy::EmsFcfs) {
                throw ConfigError("strategy: angioplasty scenarios accept THREE_LEVEL or EMS_FCFS");
            }
            if (hospitals < 1) throw ConfigError("angioplasty.hospitals: must be >= 1");
            if (teams < 1) throw ConfigError("angioplasty.teams: must be >= 1");
            if (patients < 0) throw ConfigError("demand.patients: must be >= 0");
            if (!(period_s > 0.0)) throw ConfigError("angioplasty.period_s: must be > 0");
            if (periods_per_patient < 1) {
                throw ConfigError("angioplasty.periods_per_patient: must be >= 1");
            }
            break;
        case ScenarioKind::Taxi:
            if (strategy != Strategy::Fcfs && strategy != Strategy::Nvnr &&
                strategy != Strategy::Dynra) {
                throw ConfigError("strategy: taxi scenarios accept FCFS, NVNR or DYNRA");
            }
            if (customers_per_window < 0) {
                throw ConfigError("demand.customers_per_window: must be >= 0");
            }
            if (!(window_s > 0.0)) throw ConfigError("demand.window_s: must be > 0");
            economics.validate();
            break;
    }
}

std::vector<Point2D> sample_uniform_points(int count, Meters width, Meters height,
                                           uint64_t seed) {
    Rng rng(seed);
    std::vector<Point2D> points;
    points.reserve(count);
    for (int i = 0; i < count; ++i) {
        points.push_back({rng.uniform(0.0, width), rng.uniform(0.0, height)});
    }
    return points;
}

namespace {

DensityGrid build_grid(const ScenarioConfig& cfg, const DensitySpec& spec) {
    int xc = std::max(1, static_cast<int>(std::ceil(cfg.region_width / cfg.cell_size_m)));
    int yc = std::max(1, static_cast<int>(std::ceil(cfg.region_height / cfg.cell_size_m)));
    switch (spec.type) {
        case DensitySpec::Type::Csv: return DensityGrid::load_csv(spec.csv_path);
        case DensitySpec::Type::Uniform: return DensityGrid::uniform(xc, yc, cfg.cell_size_m);
        case DensitySpec::Type::GaussianMixture: break;
    }
    Rng rng(spec.seed);
    struct Bump {
        Point2D mean;
        double sigma;
        double weight;
    };
    std::vector<Bump> bumps;
    for (int b = 0; b < spec.bumps; ++b) {
        Bump bump;
        bump.mean = {rng.uniform(0.1 * cfg.region_width, 0.9 * cfg.region_width),
                     rng.uniform(0.1 * cfg.region_height, 0.9 * cfg.region_height)};
        bump.sigma = rng.uniform(cfg.region_width / 12.0, cfg.region_width / 5.0);
        bump.weight = rng.uniform(0.5, 1.5);
        bumps.push_back(bump);
    }
    std::vector<double> weights(static_cast<size_t>(xc) * yc, 0.0);
    double total = 0.0;
    DensityGrid shape = DensityGrid::uniform(xc, yc, cfg.cell_size_m);
    for (int c = 0; c < shape.cell_count(); ++c) {
        Point2D center = shape.cell_center(c);
        double w = 0.0;
        for (const Bump& b : bumps) {
            double dx = center.x - b.mean.x;
            double dy = center.y - b.mean.y;
            w += b.weight * std::exp(-(dx * dx + dy * dy) / (2.0 * b.sigma * b.sigma));
        }
        weights[c] = w;
        total += w;
    }
    // Small uniform floor: patients can appear anywhere in the region.
    double floor = 0.02 * total / shape.cell_count() / 0.98;
    for (double& w : weights) w += floor;
    return DensityGrid(xc, yc, cfg.cell_size_m, {0.0, 0.0}, std::move(weights));
}

}  // namespace

std::vector<DensityGrid> build_density_grids(const ScenarioConfig& cfg) {
    std::vector<DensityGrid> grids;
    for (const DensitySpec& spec : cfg.densities) {
        grids.push_back(build_grid(cfg, spec));
    }
    return grids;
}

std::vector<SpawnEvent> generate_demand(const ScenarioConfig& cfg,
                                        const std::vector<DensityGrid>& grids, uint64_t seed) {
    Rng rng(derive_seed(seed, 1));
    std::vector<SpawnEvent> spawns;

    auto inside = [&](const Point2D& p) {
        return p.x >= 0.0 && p.x <= cfg.region_width && p.y >= 0.0 && p.y <= cfg.region_height;
    };

    if (cfg.scenario == ScenarioKind::Ems) {
        std::vector<Seconds> times;
        times.reserve(cfg.patients);
        for (int i = 0; i < cfg.patients; ++i) times.push_back(rng.uniform(0.0, cfg.horizon_s));
        std::sort(times.begin(), times.end());

        std::vector<std::vector<double>> cumulative;
        for (const DensityGrid& g : grids) {
            std::vector<double> cum(g.cell_count());
            double acc = 0.0;
            for (int c = 0; c < g.cell_count(); ++c) {
                acc += g.prob(c);
                cum[c] = acc;
            }
            cumulative.push_back(std::move(cum));
        }

        for (int i = 0; i < cfg.patients; ++i) {
            size_t gi = 0;
            if (grids.size() > 1) {
                gi = static_cast<size_t>(times[i] / cfg.density_switch_s) % grids.size();
            }
            const DensityGrid& g = grids[gi];
            int cell = static_cast<int>(rng.discrete(cumulative[gi]));
            Point2D center = g.cell_center(cell);
            Point2D p;
            do {
                p = {center.x + rng.uniform(-0.5, 0.5) * g.cell_size(),
                     center.y + rng.uniform(-0.5, 0.5) * g.cell_size()};
            } while (!inside(p));
            spawns.push_back({i, times[i], p, std::nullopt, 0.0});
        }
        return spawns;
    }

    if (cfg.scenario == ScenarioKind::Angioplasty) {
        // Appearance spread equally along the horizon: one patient every
        // periods_per_patient periods.
        for (int i = 0; i < cfg.patients; ++i) {
            Seconds t = (i + 1) * cfg.periods_per_patient * cfg.period_s;
            Point2D p{rng.uniform(0.0, cfg.region_width), rng.uniform(0.0, cfg.region_height)};
            spawns.push_back({i, t, p, std::nullopt, 0.0});
        }
        return spawns;
    }

    // Taxi: fixed number of customers per window; trips alternate between
    // periphery->center and center->periphery, both ends normally
    // distributed.
    Point2D center{cfg.region_width / 2.0, cfg.region_height / 2.0};
    double sigma = cfg.region_width / 8.0;
    Point2D edges[4] = {{cfg.region_width / 2.0, 0.0},
                        {cfg.region_width, cfg.region_height / 2.0},
                        {cfg.region_width / 2.0, cfg.region_height},
                        {0.0, cfg.region_height / 2.0}};

    auto sample_cluster = [&](const Point2D& mean) {
        Point2D p;
        do {
            p = {rng.normal(mean.x, sigma), rng.normal(mean.y, sigma)};
        } while (!inside(p));
        return p;
    };

    int windows = static_cast<int>(std::ceil(cfg.horizon_s / cfg.window_s));
    int id = 0;
    for (int w = 0; w < windows; ++w) {
        Seconds start = w * cfg.window_s;
        Seconds end = std::min(cfg.horizon_s, start + cfg.window_s);
        std::vector<Seconds> times;
        for (int i = 0; i < cfg.customers_per_window; ++i) {
            times.push_back(rng.uniform(start, end));
        }
        std::sort(times.begin(), times.end());
        for (Seconds t : times) {
            Point2D center_pt = sample_cluster(center);
            Point2D edge_pt = sample_cluster(edges[rng.uniform_int(0, 3)]);
            SpawnEvent s;
            s.id = id;
            s.time = t;
            if (id % 2 == 0) {
                s.origin = edge_pt;
                s.destination = center_pt;
            } else {
                s.origin = center_pt;
                s.destination = edge_pt;
            }
            s.trip_m = euclidean_distance(s.origin, *s.destination);
            spawns.push_back(s);
            ++id;
        }
    }
    return spawns;
}

}  // namespace fleetsim
