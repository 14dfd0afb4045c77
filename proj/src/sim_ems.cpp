#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "fleetsim/ems_dispatch.hpp"
#include "fleetsim/rng.hpp"
#include "fleetsim/sim.hpp"
#include "sim_internal.hpp"

namespace fleetsim {

namespace {

// Event codes folded into the run hash.
enum : int {
    kHashSpawn = 1,
    kHashDispatchable = 2,
    kHashAssign = 3,
    kHashDeassign = 4,
    kHashRedeploy = 5,
    kHashArrivePatient = 6,
    kHashTransportStart = 7,
    kHashFinished = 8,
    kHashGridSwitch = 9,
};

enum class Purpose { None, ToPatient, ToHospital, Reposition };

struct EmsSim {
    const ScenarioConfig& cfg;
    uint64_t seed;

    std::vector<DensityGrid> grids;
    std::vector<Point2D> stations;
    std::vector<SpawnEvent> spawns;

    EmsState state;
    std::vector<Mover> mover;
    std::vector<Purpose> purpose;
    std::vector<Seconds> insitu_until;  // 0 = not attending in situ
    std::vector<EmsPatientRecord> records;
    std::vector<Seconds> dispatchable_at;
    std::vector<int> assignments_per_request;
    std::deque<EmsEvent> events;
    EventHash ev_hash;
    EventHash spawn_hash;
    Seconds now = 0.0;
    size_t next_spawn = 0;
    size_t next_dispatchable = 0;
    int active_grid = 0;

    // Lloyd runs are pure in the idle set and positions, which only change
    // between ticks or via assignment changes; identical consecutive
    // recomputations within one tick are skipped.
    std::vector<VehicleId> last_redeploy_set;
    bool redeploy_cache_valid = false;

    EmsSim(const ScenarioConfig& c, uint64_t s) : cfg(c), seed(s) {
        grids = build_density_grids(cfg);
        stations = sample_uniform_points(cfg.stations, cfg.region_width, cfg.region_height,
                                         derive_seed(cfg.layout_seed, 11));
        spawns = generate_demand(cfg, grids, seed);

        for (int i = 0; i < cfg.fleet_count; ++i) {
            Vehicle v;
            v.id = i;
            v.kind = VehicleKind::Ambulance;
            v.speed_mps = cfg.speed_mps();
            v.home_station = stations[i % stations.size()];
            v.position = *v.home_station;
            state.vehicles.push_back(v);
        }
        mover.resize(state.vehicles.size());
        purpose.resize(state.vehicles.size(), Purpose::None);
        insitu_until.resize(state.vehicles.size(), 0.0);

        records.resize(spawns.size());
        dispatchable_at.resize(spawns.size());
        assignments_per_request.assign(spawns.size(), 0);
        for (size_t i = 0; i < spawns.size(); ++i) {
            records[i].id = spawns[i].id;
            records[i].created_at = spawns[i].time;
            dispatchable_at[i] = spawns[i].time + cfg.call_duration_s;
        }
    }

    Vehicle& vehicle(VehicleId id) { return state.vehicles[id]; }

    Point2D nearest_hospital(const Point2D& from) const {
        const Point2D* best = &stations[0];
        double best_d = std::numeric_limits<double>::infinity();
        for (const Point2D& h : stations) {
            double d = euclidean_distance(from, h);
            if (d < best_d) {
                best_d = d;
                best = &h;
            }
        }
        return *best;
    }

    void remove_waiting(RequestId id) {
        auto it = std::find_if(state.waiting.begin(), state.waiting.end(),
                               [&](const ServiceRequest& r) { return r.id == id; });
        if (it != state.waiting.end()) state.waiting.erase(it);
    }

    void stage_demand() {
        Seconds tick_end = now + cfg.tick_s;
        if (now == 0.0 && cfg.strategy == Strategy::Drard) {
            // The density estimate becomes active: deploy idle ambulances.
            events.push_back(DistributionChange{active_grid});
            ev_hash.mix(kHashGridSwitch).mix(active_grid);
        }
        while (next_spawn < spawns.size() && spawns[next_spawn].time <= tick_end) {
            const SpawnEvent& s = spawns[next_spawn];
            spawn_hash.mix(kHashSpawn).mix(s.id).mix(s.time).mix(s.origin.x).mix(s.origin.y);
            ev_hash.mix(kHashSpawn).mix(s.id).mix(s.time).mix(s.origin.x).mix(s.origin.y);
            ++next_spawn;
        }
        while (next_dispatchable < spawns.size() &&
               dispatchable_at[next_dispatchable] <= tick_end) {
            const SpawnEvent& s = spawns[next_dispatchable];
            ServiceRequest r;
            r.id = s.id;
            r.origin = s.origin;
            r.created_at = s.time;
            state.waiting.push_back(r);
            events.push_back(NewPatient{s.id});
            ev_hash.mix(kHashDispatchable).mix(s.id);
            ++next_dispatchable;
        }
        // Hour-of-day density rotation (only when several grids are loaded).
        if (grids.size() > 1) {
            int gi = static_cast<int>(static_cast<uint64_t>(tick_end / cfg.density_switch_s) %
                                      grids.size());
            if (gi != active_grid) {
                active_grid = gi;
                ev_hash.mix(kHashGridSwitch).mix(gi);
                if (cfg.strategy == Strategy::Drard) {
                    events.push_back(DistributionChange{gi});
                }
            }
        }
    }

    void stage_movement() {
        Seconds tick_end = now + cfg.tick_s;
        for (size_t i = 0; i < state.vehicles.size(); ++i) {
            Vehicle& v = state.vehicles[i];
            if (insitu_until[i] > 0.0) {
                if (insitu_until[i] <= tick_end) {
                    insitu_until[i] = 0.0;
                    mover[i].target = nearest_hospital(v.position);
                    purpose[i] = Purpose::ToHospital;
                    ev_hash.mix(kHashTransportStart).mix(v.id);
                }
                continue;
            }
            if (!mover[i].target) continue;
            if (!mover[i].step(v.position, v.speed_mps, cfg.tick_s)) continue;
            switch (purpose[i]) {
                case Purpose::ToPatient: {
                    RequestId r = *v.request;
                    records[r].ambulance_arrived_at = tick_end;
                    remove_waiting(r);
                    v.occupy();
                    insitu_until[i] = tick_end + cfg.in_situ_s;
                    purpose[i] = Purpose::None;
                    ev_hash.mix(kHashArrivePatient).mix(v.id).mix(r);
                    redeploy_cache_valid = false;
                    break;
                }
                case Purpose::ToHospital: {
                    RequestId r = *v.request;
                    records[r].completed_at = tick_end;
                    v.release();
                    purpose[i] = Purpose::None;
                    ev_hash.mix(kHashFinished).mix(v.id).mix(r);
                    events.push_back(AmbulanceFinished{v.id});
                    redeploy_cache_valid = false;
                    break;
                }
                default:
                    purpose[i] = Purpose::None;
                    break;
            }
        }
    }

    void apply(const DispatchDecision& decision) {
        for (const auto& [veh, req] : decision.assignment_changes) {
            Vehicle& v = vehicle(veh);
            if (req) {
                bool was_idle = v.idle();
                v.assign(*req);
                mover[veh].target = spawns[*req].origin;
                purpose[veh] = Purpose::ToPatient;
                assignments_per_request[*req] += 1;
                ev_hash.mix(kHashAssign).mix(veh).mix(*req);
                if (was_idle && cfg.strategy == Strategy::Drard) {
                    events.push_back(IdleToAssigned{veh});
                }
            } else {
                v.release();
                mover[veh].target.reset();
                purpose[veh] = Purpose::None;
                ev_hash.mix(kHashDeassign).mix(veh);
                if (cfg.strategy == Strategy::Drard) {
                    events.push_back(Deassigned{veh});
                }
            }
            redeploy_cache_valid = false;
        }
        for (const auto& [veh, point] : decision.redeploy_targets) {
            Vehicle& v = vehicle(veh);
            if (!v.idle()) continue;
            mover[veh].target = point;
            purpose[veh] = Purpose::Reposition;
            ev_hash.mix(kHashRedeploy).mix(veh).mix(point.x).mix(point.y);
        }
    }

    std::vector<VehicleId> idle_ids() const {
        std::vector<VehicleId> ids;
        for (const Vehicle& v : state.vehicles) {
            if (v.idle()) ids.push_back(v.id);
        }
        return ids;
    }

    void stage_dispatch() {
        while (!events.empty()) {
            EmsEvent ev = events.front();
            events.pop_front();
            if (cfg.strategy == Strategy::Static) {
                apply(static_dispatch(state, ev));
                continue;
            }
            bool redeploy_only = std::holds_alternative<Deassigned>(ev) ||
                                 std::holds_alternative<IdleToAssigned>(ev) ||
                                 std::holds_alternative<DistributionChange>(ev);
            if (redeploy_only) {
                std::vector<VehicleId> idle = idle_ids();
                if (redeploy_cache_valid && idle == last_redeploy_set &&
                    !std::holds_alternative<DistributionChange>(ev)) {
                    continue;  // same inputs, same (already applied) recommendations
                }
                last_redeploy_set = idle;
                redeploy_cache_valid = true;
            }
            apply(drard_dispatch(state, ev, grids[active_grid], cfg.move_threshold_m));
        }
    }

    RunMetrics finish() {
        RunMetrics m;
        m.scenario = to_string(cfg.scenario);
        m.strategy = to_string(cfg.strategy);
        m.seed = seed;
        m.request_columns = {"request_id", "created_s", "dispatchable_s", "arrival_s",
                             "response_s", "served"};
        double nan = std::numeric_limits<double>::quiet_NaN();
        int served = 0;
        double response_sum = 0.0;
        for (size_t i = 0; i < records.size(); ++i) {
            const EmsPatientRecord& rec = records[i];
            bool ok = rec.ambulance_arrived_at.has_value();
            double response = ok ? response_time(rec) : nan;
            if (ok) {
                ++served;
                response_sum += response;
            }
            m.request_rows.push_back({static_cast<double>(rec.id), rec.created_at,
                                      dispatchable_at[i], ok ? *rec.ambulance_arrived_at : nan,
                                      response, ok ? 1.0 : 0.0});
        }
        double km_total = 0.0;
        for (size_t i = 0; i < mover.size(); ++i) {
            m.vehicle_distance_m.push_back(mover[i].moved_m);
            km_total += mover[i].moved_m / 1000.0;
        }
        int max_assign = 0;
        for (int c : assignments_per_request) max_assign = std::max(max_assign, c);
        m.summary["requests_total"] = static_cast<double>(records.size());
        m.summary["requests_served"] = served;
        m.summary["mean_response_s"] = served ? response_sum / served : 0.0;
        m.summary["vehicle_distance_km_total"] = km_total;
        m.summary["vehicle_distance_km_mean"] = km_total / state.vehicles.size();
        m.summary["max_assignments_per_request"] = max_assign;
        m.event_log_hash = ev_hash.value();
        m.spawn_log_hash = spawn_hash.value();
        return m;
    }

    RunMetrics run() {
        long ticks = std::lround(cfg.horizon_s / cfg.tick_s);
        for (long t = 0; t < ticks; ++t) {
            now = t * cfg.tick_s;
            stage_demand();
            stage_movement();
            redeploy_cache_valid = false;  // positions moved
            stage_dispatch();
        }
        return finish();
    }
};

}  // namespace

RunMetrics run_ems(const ScenarioConfig& cfg, uint64_t seed) {
    return EmsSim(cfg, seed).run();
}

}  // namespace fleetsim
