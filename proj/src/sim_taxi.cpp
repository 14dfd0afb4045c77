#include <algorithm>
#include <cmath>
#include <limits>

#include "fleetsim/rng.hpp"
#include "fleetsim/sim.hpp"
#include "sim_internal.hpp"

namespace fleetsim {

namespace {

enum : int {
    kHashSpawn = 1,
    kHashAssign = 3,
    kHashPickupArrive = 10,
    kHashTripStart = 11,
    kHashDropoffDone = 12,
    kHashCompensation = 13,
};

enum class TaxiPurpose { None, ToPickup, ToDropoff };

struct TaxiSim {
    const ScenarioConfig& cfg;
    uint64_t seed;

    std::vector<SpawnEvent> spawns;
    std::vector<Vehicle> vehicles;
    std::vector<Mover> mover;
    std::vector<TaxiPurpose> purpose;
    std::vector<Seconds> dwell_until;  // pickup/dropoff pause end, 0 = none
    std::vector<Euros> driver_cash;

    struct CustomerRecord {
        bool spawned = false;
        std::optional<VehicleId> taxi;
        std::optional<Seconds> pickup_arrival;  // waiting time ends here
        std::optional<Seconds> completed_at;
    };
    std::vector<CustomerRecord> customers;
    std::vector<RequestId> waiting_unassigned;

    MediatorLedger ledger;
    Euros client_payments = 0.0;
    Euros ledger_min = 0.0;
    int rationality_violations = 0;
    double rationality_max_shortfall = 0.0;
    int commits = 0;
    int rejections = 0;
    std::vector<CompensationRecord> all_compensations;

    EventHash ev_hash;
    EventHash spawn_hash;
    Seconds now = 0.0;
    size_t next_spawn = 0;
    bool trigger = false;  // new client or freed taxi since last assignment pass

    TaxiSim(const ScenarioConfig& c, uint64_t s) : cfg(c), seed(s), ledger(c.economics.initial_ledger) {
        spawns = generate_demand(cfg, {}, seed);
        customers.resize(spawns.size());
        Rng placement(derive_seed(seed, 2));
        for (int i = 0; i < cfg.fleet_count; ++i) {
            Vehicle v;
            v.id = i;
            v.kind = VehicleKind::Taxi;
            v.speed_mps = cfg.speed_mps();
            v.position = {placement.uniform(0.0, cfg.region_width),
                          placement.uniform(0.0, cfg.region_height)};
            vehicles.push_back(v);
        }
        mover.resize(vehicles.size());
        purpose.resize(vehicles.size(), TaxiPurpose::None);
        dwell_until.resize(vehicles.size(), 0.0);
        driver_cash.resize(vehicles.size(), 0.0);
        ledger_min = ledger.earning();
    }

    void stage_demand() {
        Seconds tick_end = now + cfg.tick_s;
        while (next_spawn < spawns.size() && spawns[next_spawn].time <= tick_end) {
            const SpawnEvent& s = spawns[next_spawn];
            customers[s.id].spawned = true;
            waiting_unassigned.push_back(s.id);
            spawn_hash.mix(kHashSpawn).mix(s.id).mix(s.time).mix(s.origin.x).mix(s.origin.y)
                .mix(s.destination->x).mix(s.destination->y);
            ev_hash.mix(kHashSpawn).mix(s.id).mix(s.time);
            trigger = true;
            ++next_spawn;
        }
    }

    void stage_movement() {
        Seconds tick_end = now + cfg.tick_s;
        for (size_t i = 0; i < vehicles.size(); ++i) {
            Vehicle& v = vehicles[i];
            if (dwell_until[i] > 0.0) {
                if (dwell_until[i] > tick_end) continue;
                dwell_until[i] = 0.0;
                if (purpose[i] == TaxiPurpose::ToPickup) {
                    // boarding done, drive to the destination
                    RequestId r = *v.request;
                    mover[i].target = *spawns[r].destination;
                    purpose[i] = TaxiPurpose::ToDropoff;
                    ev_hash.mix(kHashTripStart).mix(v.id).mix(r);
                } else {
                    // dropoff done, trip paid, taxi free again
                    RequestId r = *v.request;
                    customers[r].completed_at = tick_end;
                    Euros fare = price(spawns[r].trip_m, cfg.economics);
                    client_payments += fare;
                    driver_cash[i] += fare;
                    v.release();
                    purpose[i] = TaxiPurpose::None;
                    ev_hash.mix(kHashDropoffDone).mix(v.id).mix(r);
                    trigger = true;
                }
                continue;
            }
            if (!mover[i].target) continue;
            if (!mover[i].step(v.position, v.speed_mps, cfg.tick_s)) continue;
            if (purpose[i] == TaxiPurpose::ToPickup) {
                RequestId r = *v.request;
                v.occupy();
                customers[r].pickup_arrival = tick_end;
                dwell_until[i] = tick_end + cfg.pickup_s;
                ev_hash.mix(kHashPickupArrive).mix(v.id).mix(r);
            } else if (purpose[i] == TaxiPurpose::ToDropoff) {
                dwell_until[i] = tick_end + cfg.dropoff_s;
            }
        }
    }

    void assign(VehicleId veh, RequestId req) {
        Vehicle& v = vehicles[veh];
        if (v.request == std::optional<RequestId>(req)) return;
        v.assign(req);
        mover[veh].target = spawns[req].origin;
        purpose[veh] = TaxiPurpose::ToPickup;
        customers[req].taxi = veh;
        ev_hash.mix(kHashAssign).mix(veh).mix(req);
    }

    std::vector<ServiceRequest> waiting_shells() const {
        std::vector<ServiceRequest> shells;
        for (RequestId r : waiting_unassigned) {
            ServiceRequest s;
            s.id = r;
            s.origin = spawns[r].origin;
            s.created_at = spawns[r].time;
            shells.push_back(s);
        }
        return shells;
    }

    void erase_assigned_from_waiting() {
        waiting_unassigned.erase(
            std::remove_if(waiting_unassigned.begin(), waiting_unassigned.end(),
                           [&](RequestId r) { return customers[r].taxi.has_value(); }),
            waiting_unassigned.end());
    }

    void dispatch_greedy(NearestMode mode) {
        std::vector<Vehicle> idle;
        for (const Vehicle& v : vehicles) {
            if (v.idle()) idle.push_back(v);
        }
        std::vector<ServiceRequest> waiting = waiting_shells();
        Assignment a = nearest_rule(waiting, idle, mode);
        for (const auto& [vi, ri] : a.pairs) {
            assign(idle[vi].id, waiting[ri].id);
        }
        erase_assigned_from_waiting();
    }

    void dispatch_dynra() {
        DynraInput input;
        for (const Vehicle& v : vehicles) {
            if (v.assigned()) {
                const SpawnEvent& s = spawns[*v.request];
                input.current.push_back(
                    {{v.id, v.position}, {s.id, s.origin, s.trip_m, s.time}});
            } else if (v.idle()) {
                input.idle.push_back({v.id, v.position});
            }
        }
        for (RequestId r : waiting_unassigned) {
            const SpawnEvent& s = spawns[r];
            input.waiting.push_back({s.id, s.origin, s.trip_m, s.time});
        }

        DynraResult res = dynra_step(input, cfg.economics, ledger, now);
        if (res.committed_new) {
            ++commits;
            for (const CompensationRecord& rec : res.applied) {
                driver_cash[rec.vehicle] += rec.c;
                all_compensations.push_back(rec);
                ev_hash.mix(kHashCompensation).mix(rec.vehicle).mix(rec.c);
                double shortfall = rec.earn_old - rec.effective_income_new;
                if (shortfall > rationality_max_shortfall) {
                    rationality_max_shortfall = shortfall;
                }
                if (shortfall > 1e-9) ++rationality_violations;
            }
        } else {
            ++rejections;
        }
        ledger_min = std::min(ledger_min, ledger.earning());
        for (const auto& [veh, req] : res.assignment) {
            assign(veh, req);
        }
        erase_assigned_from_waiting();
    }

    RunMetrics finish() {
        RunMetrics m;
        m.scenario = to_string(cfg.scenario);
        m.strategy = to_string(cfg.strategy);
        m.seed = seed;
        m.request_columns = {"request_id", "created_s", "pickup_s", "wait_s",
                             "trip_m",     "price_eur", "served"};
        double nan = std::numeric_limits<double>::quiet_NaN();
        int picked = 0;
        double wait_sum = 0.0;
        for (size_t i = 0; i < spawns.size(); ++i) {
            const CustomerRecord& rec = customers[i];
            bool ok = rec.pickup_arrival.has_value();
            double wait = ok ? *rec.pickup_arrival - spawns[i].time : nan;
            if (ok) {
                ++picked;
                wait_sum += wait;
            }
            m.request_rows.push_back({static_cast<double>(i), spawns[i].time,
                                      ok ? *rec.pickup_arrival : nan, wait, spawns[i].trip_m,
                                      rec.completed_at ? price(spawns[i].trip_m, cfg.economics)
                                                       : nan,
                                      ok ? 1.0 : 0.0});
        }
        double km_total = 0.0;
        Euros cash_total = 0.0;
        Euros net_total = 0.0;
        for (size_t i = 0; i < vehicles.size(); ++i) {
            m.vehicle_distance_m.push_back(mover[i].moved_m);
            km_total += mover[i].moved_m / 1000.0;
            cash_total += driver_cash[i];
            net_total += driver_cash[i] - cfg.economics.vcost_per_m() * mover[i].moved_m;
        }
        double balance_gap = std::abs(client_payments + cfg.economics.initial_ledger -
                                      (cash_total + ledger.earning()));
        m.summary["requests_total"] = static_cast<double>(spawns.size());
        m.summary["requests_picked_up"] = picked;
        m.summary["requests_completed"] =
            std::count_if(customers.begin(), customers.end(),
                          [](const CustomerRecord& r) { return r.completed_at.has_value(); });
        m.summary["mean_wait_s"] = picked ? wait_sum / picked : 0.0;
        m.summary["vehicle_distance_km_total"] = km_total;
        m.summary["vehicle_distance_km_mean"] = km_total / vehicles.size();
        m.summary["client_payments_eur"] = client_payments;
        m.summary["driver_cash_total_eur"] = cash_total;
        m.summary["driver_net_total_eur"] = net_total;
        m.summary["mediator_earning_eur"] = ledger.earning();
        m.summary["mediator_ledger_min_eur"] = ledger_min;
        m.summary["money_balance_gap_eur"] = balance_gap;
        m.summary["reassignment_commits"] = commits;
        m.summary["reassignment_rejections"] = rejections;
        m.summary["zero_comp_rejections"] = ledger.zero_compensation_rejections();
        m.summary["rationality_violations"] = rationality_violations;
        m.summary["rationality_max_shortfall_eur"] = rationality_max_shortfall;
        m.summary["compensations_applied"] = static_cast<double>(all_compensations.size());
        m.compensations = all_compensations;
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
            if (trigger) {
                trigger = false;
                switch (cfg.strategy) {
                    case Strategy::Fcfs: dispatch_greedy(NearestMode::FCFS); break;
                    case Strategy::Nvnr: dispatch_greedy(NearestMode::NVNR); break;
                    case Strategy::Dynra: dispatch_dynra(); break;
                    default: break;
                }
            }
        }
        return finish();
    }
};

}  // namespace

RunMetrics run_taxi(const ScenarioConfig& cfg, uint64_t seed) {
    return TaxiSim(cfg, seed).run();
}

}  // namespace fleetsim
