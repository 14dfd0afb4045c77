#include "fleetsim/angioplasty.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

namespace fleetsim {

namespace {

Seconds travel(const Point2D& from, const Point2D& to, double speed) {
    return expected_travel_time(from, to, speed);
}

}  // namespace

AngioPlan three_level_assign(const AngioSnapshot& state) {
    AngioPlan plan;

    // Level 1: ambulances to patients, minimizing t(a,p). In-situ time is a
    // patient constant and stays out of the optimization.
    if (!state.ambulances.empty() && !state.awaiting_ambulance.empty()) {
        CostMatrix costs(static_cast<int>(state.ambulances.size()),
                         static_cast<int>(state.awaiting_ambulance.size()));
        for (size_t i = 0; i < state.ambulances.size(); ++i) {
            for (size_t j = 0; j < state.awaiting_ambulance.size(); ++j) {
                costs.at(static_cast<int>(i), static_cast<int>(j)) =
                    travel(state.ambulances[i].position, state.awaiting_ambulance[j].position,
                           state.ambulances[i].speed_mps);
            }
        }
        for (const auto& [ai, pj] : solve_optimal_exact(costs).pairs) {
            plan.ambulance_to_patient.emplace_back(state.ambulances[ai].id,
                                                   state.awaiting_ambulance[pj].id);
        }
    }

    // Level 2: patients to hospitals on the tail cost max(t(p,h), lab wait).
    // Queue-aware rounds so every patient gets a destination even when
    // patients outnumber hospitals.
    std::map<int, Seconds> busy;
    std::map<int, int> demand;  // patients needing a team per hospital
    for (const auto& h : state.hospitals) {
        busy[h.id] = h.busy_until;
        demand[h.id] = h.arrived_waiting;
    }
    if (!state.hospitals.empty()) {
        std::vector<const AngioSnapshot::PatientNeedingHospital*> pool;
        for (const auto& p : state.awaiting_hospital) pool.push_back(&p);
        while (!pool.empty()) {
            CostMatrix costs(static_cast<int>(pool.size()),
                             static_cast<int>(state.hospitals.size()));
            for (size_t i = 0; i < pool.size(); ++i) {
                for (size_t j = 0; j < state.hospitals.size(); ++j) {
                    Seconds transport = travel(pool[i]->position, state.hospitals[j].position,
                                               state.ambulance_speed_mps);
                    Seconds wait = std::max(0.0, busy[state.hospitals[j].id] - state.now);
                    costs.at(static_cast<int>(i), static_cast<int>(j)) =
                        std::max(transport, wait);
                }
            }
            Assignment match = solve_optimal_exact(costs);
            std::vector<char> matched(pool.size(), 0);
            for (const auto& [pi, hj] : match.pairs) {
                const auto& hospital = state.hospitals[hj];
                plan.patient_to_hospital.emplace_back(pool[pi]->id, hospital.id);
                Seconds arrival = state.now + travel(pool[pi]->position, hospital.position,
                                                     state.ambulance_speed_mps);
                busy[hospital.id] = std::max(busy[hospital.id], arrival) + state.procedure_s;
                demand[hospital.id] += 1;
                matched[pi] = 1;
            }
            std::vector<const AngioSnapshot::PatientNeedingHospital*> rest;
            for (size_t i = 0; i < pool.size(); ++i) {
                if (!matched[i]) rest.push_back(pool[i]);
            }
            if (rest.size() == pool.size()) break;  // no progress (no hospitals matched)
            pool = std::move(rest);
        }
    }

    // Level 3: teams to hospitals with unmet demand, minimizing t(c,h),
    // again in rounds so a hospital with a deep queue can attract several
    // teams.
    std::vector<const AngioSnapshot::TeamView*> team_pool;
    for (const auto& t : state.teams) team_pool.push_back(&t);
    while (!team_pool.empty()) {
        std::vector<int> needy;
        for (const auto& h : state.hospitals) {
            if (demand[h.id] > 0) needy.push_back(h.id);
        }
        if (needy.empty()) break;
        std::map<int, const AngioSnapshot::HospitalView*> by_id;
        for (const auto& h : state.hospitals) by_id[h.id] = &h;

        CostMatrix costs(static_cast<int>(team_pool.size()), static_cast<int>(needy.size()));
        for (size_t i = 0; i < team_pool.size(); ++i) {
            for (size_t j = 0; j < needy.size(); ++j) {
                costs.at(static_cast<int>(i), static_cast<int>(j)) =
                    travel(team_pool[i]->position, by_id[needy[j]]->position,
                           team_pool[i]->speed_mps);
            }
        }
        Assignment match = solve_optimal_exact(costs);
        std::vector<char> used(team_pool.size(), 0);
        for (const auto& [ti, hj] : match.pairs) {
            plan.team_to_hospital.emplace_back(team_pool[ti]->id, needy[hj]);
            demand[needy[hj]] -= 1;
            used[ti] = 1;
        }
        std::vector<const AngioSnapshot::TeamView*> rest;
        for (size_t i = 0; i < team_pool.size(); ++i) {
            if (!used[i]) rest.push_back(team_pool[i]);
        }
        team_pool = std::move(rest);
    }

    return plan;
}

AngioPlan fcfs_benchmark_assign(const AngioSnapshot& state) {
    AngioPlan plan;

    // Call order.
    std::vector<const AngioSnapshot::PatientNeedingAmbulance*> order;
    for (const auto& p : state.awaiting_ambulance) order.push_back(&p);
    std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
        if (a->created_at != b->created_at) return a->created_at < b->created_at;
        return a->id < b->id;
    });

    std::vector<char> used(state.ambulances.size(), 0);
    for (const auto* p : order) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < state.ambulances.size(); ++i) {
            if (used[i] || state.ambulances[i].current) continue;  // idle only, no revisions
            double d = euclidean_distance(state.ambulances[i].position, p->position);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        if (best < 0) break;
        used[best] = 1;
        plan.ambulance_to_patient.emplace_back(state.ambulances[best].id, p->id);
    }

    // Nearest hospital and that hospital's own team for every patient that
    // just finished diagnosis.
    for (const auto& p : state.awaiting_hospital) {
        if (p.hospital) continue;  // already committed
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (const auto& h : state.hospitals) {
            double d = euclidean_distance(p.position, h.position);
            if (d < best_d) {
                best_d = d;
                best = h.id;
            }
        }
        if (best < 0) continue;
        plan.patient_to_hospital.emplace_back(p.id, best);
        for (const auto& t : state.teams) {
            if (t.home_hospital == best) {
                plan.team_to_hospital.emplace_back(t.id, best);
            }
        }
    }
    return plan;
}

Seconds patient_delay(const DelayPlanInputs& in) {
    if (in.t1 < 0 || in.ambulance_to_patient < 0 || in.in_situ < 0 || in.transport < 0 ||
        in.team_to_hospital < 0 || in.hospital_free_in < 0) {
        throw std::invalid_argument("patient_delay: negative component");
    }
    Seconds arrival_plus_wait =
        in.transport + std::max(0.0, in.hospital_free_in - in.transport);
    Seconds tail = std::max(arrival_plus_wait, in.team_to_hospital);
    return in.t1 + in.ambulance_to_patient + in.in_situ + tail;
}

double performance_P(Seconds t_fcfs, Seconds t_or) {
    if (!(t_fcfs > 0.0)) {
        throw std::invalid_argument("performance_P: benchmark time must be positive");
    }
    return (t_fcfs - t_or) / t_fcfs * 100.0;
}

}  // namespace fleetsim
