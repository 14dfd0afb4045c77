#include <algorithm>
#include <cmath>
#include <limits>

#include "fleetsim/angioplasty.hpp"
#include "fleetsim/rng.hpp"
#include "fleetsim/sim.hpp"
#include "sim_internal.hpp"

namespace fleetsim {

namespace {

enum : int {
    kHashSpawn = 1,
    kHashDispatchable = 2,
    kHashAssign = 3,
    kHashDeassign = 4,
    kHashArrivePatient = 6,
    kHashTransportStart = 7,
    kHashHospitalArrive = 14,
    kHashTeamDispatch = 15,
    kHashTeamArrive = 16,
    kHashOpStart = 17,
    kHashOpEnd = 18,
};

enum class PatientPhase {
    PreCall,
    AwaitAmbulance,
    InSitu,
    AwaitTransport,  // diagnosis done, no hospital destination yet
    Transport,
    AtHospital,
    InProcedure,
    Done
};

struct AngioSim {
    const ScenarioConfig& cfg;
    uint64_t seed;

    std::vector<SpawnEvent> spawns;
    std::vector<Hospital> hospitals;

    struct Team {
        CardiologyTeam core;
        Mover mover;
        std::optional<int> at_hospital;    // physically present
        Seconds arrived_at = 0.0;          // when it reached its current hospital
        Seconds operating_until = 0.0;
        RequestId operating_on = -1;
    };
    std::vector<Team> teams;

    struct Ambulance {
        Vehicle core;
        Mover mover;
        Point2D base;
        enum class Purpose { None, ToPatient, ToHospital, ToBase } purpose = Purpose::None;
        Seconds insitu_until = 0.0;
    };
    std::vector<Ambulance> ambulances;

    struct Patient {
        PatientPhase phase = PatientPhase::PreCall;
        std::optional<int> hospital;
        std::optional<VehicleId> ambulance;
        Seconds dispatchable_at = 0.0;
        Seconds amb_arrival = 0.0;
        Seconds insitu_end = 0.0;
        Seconds hospital_arrival = 0.0;
        Seconds procedure_start = 0.0;
        int performed_by = -1;
        bool committed_hospital = false;  // FCFS irrevocability
    };
    std::vector<Patient> patients;

    EventHash ev_hash;
    EventHash spawn_hash;
    Seconds now = 0.0;
    size_t next_spawn = 0;
    size_t next_dispatchable = 0;
    bool dirty = false;
    long period_ticks = 1;

    AngioSim(const ScenarioConfig& c, uint64_t s) : cfg(c), seed(s) {
        spawns = generate_demand(cfg, {}, seed);
        patients.resize(spawns.size());

        // A fresh participant layout per seed: hospitals, team posts and the
        // patient positions are all instance-specific.
        std::vector<Point2D> hospital_pos = sample_uniform_points(
            cfg.hospitals, cfg.region_width, cfg.region_height, derive_seed(seed, 11));
        for (int h = 0; h < cfg.hospitals; ++h) {
            Hospital hosp;
            hosp.id = h;
            hosp.position = hospital_pos[h];
            hospitals.push_back(hosp);
        }
        std::vector<Point2D> team_pos = sample_uniform_points(
            cfg.teams, cfg.region_width, cfg.region_height, derive_seed(seed, 12));
        for (int t = 0; t < cfg.teams; ++t) {
            Team team;
            team.core.id = t;
            team.core.position = team_pos[t];
            team.core.home_hospital = t % cfg.hospitals;
            teams.push_back(team);
        }
        for (int i = 0; i < cfg.fleet_count; ++i) {
            Ambulance a;
            a.core.id = i;
            a.core.kind = VehicleKind::Ambulance;
            a.core.speed_mps = cfg.speed_mps();
            a.base = hospitals[i % hospitals.size()].position;
            a.core.position = a.base;
            a.core.home_station = a.base;
            ambulances.push_back(a);
        }
        for (size_t i = 0; i < spawns.size(); ++i) {
            patients[i].dispatchable_at = spawns[i].time + cfg.t1_s;
        }
        period_ticks = std::max(1L, std::lround(cfg.period_s / cfg.tick_s));
    }

    void stage_demand() {
        Seconds tick_end = now + cfg.tick_s;
        while (next_spawn < spawns.size() && spawns[next_spawn].time <= tick_end) {
            const SpawnEvent& s = spawns[next_spawn];
            spawn_hash.mix(kHashSpawn).mix(s.id).mix(s.time).mix(s.origin.x).mix(s.origin.y);
            ev_hash.mix(kHashSpawn).mix(s.id).mix(s.time);
            ++next_spawn;
        }
        while (next_dispatchable < spawns.size() &&
               patients[next_dispatchable].dispatchable_at <= tick_end) {
            patients[next_dispatchable].phase = PatientPhase::AwaitAmbulance;
            ev_hash.mix(kHashDispatchable).mix(static_cast<int>(next_dispatchable));
            dirty = true;
            ++next_dispatchable;
        }
    }

    void stage_movement() {
        Seconds tick_end = now + cfg.tick_s;

        for (Ambulance& a : ambulances) {
            if (a.insitu_until > 0.0) {
                if (a.insitu_until > tick_end) continue;
                a.insitu_until = 0.0;
                RequestId r = *a.core.request;
                Patient& p = patients[r];
                p.insitu_end = tick_end;
                if (p.hospital) {
                    p.phase = PatientPhase::Transport;
                    a.mover.target = hospitals[*p.hospital].position;
                    a.purpose = Ambulance::Purpose::ToHospital;
                    ev_hash.mix(kHashTransportStart).mix(a.core.id).mix(r);
                } else {
                    p.phase = PatientPhase::AwaitTransport;
                }
                dirty = true;
                continue;
            }
            if (!a.mover.target) continue;
            if (!a.mover.step(a.core.position, a.core.speed_mps, cfg.tick_s)) continue;
            switch (a.purpose) {
                case Ambulance::Purpose::ToPatient: {
                    RequestId r = *a.core.request;
                    Patient& p = patients[r];
                    p.phase = PatientPhase::InSitu;
                    p.amb_arrival = tick_end;
                    a.core.occupy();
                    a.insitu_until = tick_end + cfg.in_situ_s;
                    a.purpose = Ambulance::Purpose::None;
                    ev_hash.mix(kHashArrivePatient).mix(a.core.id).mix(r);
                    dirty = true;
                    break;
                }
                case Ambulance::Purpose::ToHospital: {
                    RequestId r = *a.core.request;
                    Patient& p = patients[r];
                    p.phase = PatientPhase::AtHospital;
                    p.hospital_arrival = tick_end;
                    hospitals[*p.hospital].queue.push_back(r);
                    a.core.release();
                    a.mover.target = a.base;
                    a.purpose = Ambulance::Purpose::ToBase;
                    ev_hash.mix(kHashHospitalArrive).mix(r).mix(*p.hospital);
                    dirty = true;
                    break;
                }
                default:
                    a.purpose = Ambulance::Purpose::None;
                    break;
            }
        }

        for (Team& t : teams) {
            if (t.core.state == TeamState::Operating) continue;
            if (!t.mover.target) continue;
            if (!t.mover.step(t.core.position, cfg.team_speed_mps(), cfg.tick_s)) continue;
            t.core.state = TeamState::Available;
            t.at_hospital = t.core.target_hospital;
            t.arrived_at = tick_end;
            ev_hash.mix(kHashTeamArrive).mix(t.core.id).mix(*t.core.target_hospital);
            dirty = true;
        }
    }

    void stage_procedures() {
        Seconds tick_end = now + cfg.tick_s;

        for (Team& t : teams) {
            if (t.core.state == TeamState::Operating && t.operating_until <= tick_end) {
                patients[t.operating_on].phase = PatientPhase::Done;
                ev_hash.mix(kHashOpEnd).mix(t.core.id).mix(t.operating_on);
                t.core.state = TeamState::Available;
                t.operating_on = -1;
                dirty = true;
            }
        }

        for (Hospital& h : hospitals) {
            while (!h.queue.empty()) {
                Team* free_team = nullptr;
                for (Team& t : teams) {
                    if (t.core.state == TeamState::Available && t.at_hospital &&
                        *t.at_hospital == h.id) {
                        free_team = &t;
                        break;
                    }
                }
                if (!free_team) break;
                RequestId r = h.queue.front();
                h.queue.erase(h.queue.begin());
                Patient& p = patients[r];
                p.phase = PatientPhase::InProcedure;
                p.procedure_start = tick_end;
                p.performed_by = free_team->core.id;
                free_team->core.state = TeamState::Operating;
                free_team->operating_until = tick_end + cfg.procedure_s;
                free_team->operating_on = r;
                ev_hash.mix(kHashOpStart).mix(free_team->core.id).mix(r);
                dirty = true;
            }
        }
    }

    Seconds busy_until(const Hospital& h) const {
        Seconds busy = now;
        for (const Team& t : teams) {
            if (t.core.state == TeamState::Operating && t.at_hospital && *t.at_hospital == h.id) {
                busy = std::max(busy, t.operating_until);
            }
        }
        return busy + static_cast<double>(h.queue.size()) * cfg.procedure_s;
    }

    AngioSnapshot snapshot() {
        AngioSnapshot snap;
        snap.now = now + cfg.tick_s;
        snap.procedure_s = cfg.procedure_s;
        snap.ambulance_speed_mps = cfg.speed_mps();
        bool fcfs = cfg.strategy == Strategy::EmsFcfs;

        for (const Ambulance& a : ambulances) {
            if (a.core.occupied()) continue;
            if (fcfs && a.core.assigned()) continue;  // no revisions
            snap.ambulances.push_back(
                {a.core.id, a.core.position, a.core.speed_mps, a.core.request});
        }
        for (size_t i = 0; i < patients.size(); ++i) {
            const Patient& p = patients[i];
            RequestId id = static_cast<RequestId>(i);
            if (p.phase == PatientPhase::AwaitAmbulance) {
                if (fcfs && p.ambulance) continue;
                snap.awaiting_ambulance.push_back({id, spawns[i].origin, spawns[i].time});
            }
            if (p.phase == PatientPhase::InSitu || p.phase == PatientPhase::AwaitTransport ||
                p.phase == PatientPhase::Transport) {
                if (fcfs && p.committed_hospital) continue;
                Point2D pos = spawns[i].origin;
                if (p.phase == PatientPhase::Transport && p.ambulance) {
                    pos = ambulances[*p.ambulance].core.position;
                }
                snap.awaiting_hospital.push_back({id, pos, p.hospital, spawns[i].time});
            }
        }
        for (const Hospital& h : hospitals) {
            snap.hospitals.push_back(
                {h.id, h.position, busy_until(h), static_cast<int>(h.queue.size())});
        }
        for (const Team& t : teams) {
            if (t.core.state == TeamState::Operating) continue;
            snap.teams.push_back(
                {t.core.id, t.core.position, cfg.team_speed_mps(), t.core.home_hospital});
        }
        return snap;
    }

    void apply(const AngioPlan& plan) {
        bool fcfs = cfg.strategy == Strategy::EmsFcfs;

        // Ambulance level. THREE_LEVEL treats the plan as the complete
        // matching over re-assignable ambulances; unmatched ones return to
        // base.
        std::map<VehicleId, RequestId> new_patient;
        for (const auto& [veh, req] : plan.ambulance_to_patient) new_patient[veh] = req;
        for (Ambulance& a : ambulances) {
            if (a.core.occupied()) continue;
            auto it = new_patient.find(a.core.id);
            if (it != new_patient.end()) {
                RequestId req = it->second;
                if (a.core.request == std::optional<RequestId>(req)) continue;
                if (auto old = a.core.request) patients[*old].ambulance.reset();
                a.core.assign(req);
                a.mover.target = spawns[req].origin;
                a.purpose = Ambulance::Purpose::ToPatient;
                patients[req].ambulance = a.core.id;
                ev_hash.mix(kHashAssign).mix(a.core.id).mix(req);
            } else if (!fcfs && a.core.assigned()) {
                patients[*a.core.request].ambulance.reset();
                a.core.release();
                a.mover.target = a.base;
                a.purpose = Ambulance::Purpose::ToBase;
                ev_hash.mix(kHashDeassign).mix(a.core.id);
            }
        }

        // Hospital level.
        for (const auto& [req, h] : plan.patient_to_hospital) {
            Patient& p = patients[req];
            if (p.hospital == std::optional<int>(h)) continue;
            p.hospital = h;
            if (fcfs) p.committed_hospital = true;
            if (p.phase == PatientPhase::AwaitTransport) {
                p.phase = PatientPhase::Transport;
                Ambulance& a = ambulances[*p.ambulance];
                a.mover.target = hospitals[h].position;
                a.purpose = Ambulance::Purpose::ToHospital;
                ev_hash.mix(kHashTransportStart).mix(a.core.id).mix(req);
            } else if (p.phase == PatientPhase::Transport) {
                Ambulance& a = ambulances[*p.ambulance];
                a.mover.target = hospitals[h].position;  // redirect mid-route
            }
        }

        // Team level.
        std::map<int, int> team_target;
        for (const auto& [team, h] : plan.team_to_hospital) team_target[team] = h;
        for (Team& t : teams) {
            if (t.core.state == TeamState::Operating) continue;
            auto it = team_target.find(t.core.id);
            if (it == team_target.end()) {
                if (!fcfs && t.core.state == TeamState::EnRoute) {
                    // demand went away; hold position until needed again
                    t.core.state = TeamState::Available;
                    t.core.target_hospital.reset();
                    t.mover.target.reset();
                }
                continue;
            }
            int h = it->second;
            if (t.at_hospital && *t.at_hospital == h) continue;
            if (t.core.target_hospital == std::optional<int>(h) && t.mover.target) continue;
            t.core.state = TeamState::EnRoute;
            t.core.target_hospital = h;
            t.at_hospital.reset();
            t.mover.target = hospitals[h].position;
            ev_hash.mix(kHashTeamDispatch).mix(t.core.id).mix(h);
        }
    }

    void coordinate() {
        AngioSnapshot snap = snapshot();
        AngioPlan plan = cfg.strategy == Strategy::ThreeLevel ? three_level_assign(snap)
                                                              : fcfs_benchmark_assign(snap);
        apply(plan);
    }

    bool all_done() const {
        for (const Patient& p : patients) {
            if (p.phase != PatientPhase::Done) return false;
        }
        return true;
    }

    RunMetrics finish() {
        RunMetrics m;
        m.scenario = to_string(cfg.scenario);
        m.strategy = to_string(cfg.strategy);
        m.seed = seed;
        m.request_columns = {"request_id", "created_s", "procedure_start_s", "delay_s",
                             "t1_s",       "t2_s",      "t3_s",
                             "t4_s",       "t5_s",      "t6_s",
                             "served",     "deadline_violated"};
        double nan = std::numeric_limits<double>::quiet_NaN();
        int done = 0;
        int violations = 0;
        double delay_sum = 0.0;
        double gap_max = 0.0;
        double t2_sum = 0, t4_sum = 0, t5_sum = 0, t6_sum = 0;
        for (size_t i = 0; i < patients.size(); ++i) {
            const Patient& p = patients[i];
            bool ok = p.phase == PatientPhase::Done || p.phase == PatientPhase::InProcedure;
            if (!ok) {
                m.request_rows.push_back({static_cast<double>(i), spawns[i].time, nan, nan, nan,
                                          nan, nan, nan, nan, nan, 0.0, 0.0});
                continue;
            }
            DelayBreakdown b;
            b.t1 = cfg.t1_s;
            b.t2 = p.amb_arrival - p.dispatchable_at;
            b.t3 = p.insitu_end - p.amb_arrival;
            b.t4 = p.hospital_arrival - p.insitu_end;
            Seconds team_arrival = teams[p.performed_by].arrived_at;
            b.t5 = std::max(0.0, team_arrival - p.insitu_end);
            b.t6 = p.procedure_start -
                   std::max(p.hospital_arrival, std::max(team_arrival, p.insitu_end));
            double delay = p.procedure_start - spawns[i].time;
            gap_max = std::max(gap_max, std::abs(delay - b.total()));
            bool violated = cfg.t_p_max_s && delay > *cfg.t_p_max_s;
            if (violated) ++violations;
            ++done;
            delay_sum += delay;
            t2_sum += b.t2;
            t4_sum += b.t4;
            t5_sum += b.t5;
            t6_sum += b.t6;
            m.request_rows.push_back({static_cast<double>(i), spawns[i].time, p.procedure_start,
                                      delay, b.t1, b.t2, b.t3, b.t4, b.t5, b.t6, 1.0,
                                      violated ? 1.0 : 0.0});
        }
        double km_total = 0.0;
        for (const Ambulance& a : ambulances) {
            m.vehicle_distance_m.push_back(a.mover.moved_m);
            km_total += a.mover.moved_m / 1000.0;
        }
        m.summary["requests_total"] = static_cast<double>(patients.size());
        m.summary["requests_served"] = done;
        m.summary["mean_delay_s"] = done ? delay_sum / done : 0.0;
        m.summary["mean_t2_s"] = done ? t2_sum / done : 0.0;
        m.summary["mean_t4_s"] = done ? t4_sum / done : 0.0;
        m.summary["mean_t5_s"] = done ? t5_sum / done : 0.0;
        m.summary["mean_t6_s"] = done ? t6_sum / done : 0.0;
        m.summary["deadline_violations"] = violations;
        m.summary["breakdown_gap_max_s"] = gap_max;
        m.summary["vehicle_distance_km_total"] = km_total;
        m.summary["vehicle_distance_km_mean"] = km_total / ambulances.size();
        m.event_log_hash = ev_hash.value();
        m.spawn_log_hash = spawn_hash.value();
        return m;
    }

    RunMetrics run() {
        long ticks = std::lround(cfg.horizon_s / cfg.tick_s);
        long hard_cap = ticks * 20;
        for (long t = 0; t < ticks || (cfg.run_to_completion && t < hard_cap && !all_done());
             ++t) {
            now = t * cfg.tick_s;
            stage_demand();
            stage_movement();
            stage_procedures();
            if (dirty || t % period_ticks == 0) {
                dirty = false;
                coordinate();
            }
        }
        return finish();
    }
};

}  // namespace

RunMetrics run_angioplasty(const ScenarioConfig& cfg, uint64_t seed) {
    return AngioSim(cfg, seed).run();
}

}  // namespace fleetsim
