#include "fleetsim/ems_dispatch.hpp"

#include <algorithm>
#include <stdexcept>

namespace fleetsim {

namespace {

bool has_ambulance(const EmsState& state, RequestId request) {
    for (const Vehicle& v : state.vehicles) {
        if (v.request == std::optional<RequestId>(request)) return true;
    }
    return false;
}

// Oldest waiting patient nobody is driving to yet.
const ServiceRequest* oldest_unattended(const EmsState& state) {
    const ServiceRequest* oldest = nullptr;
    for (const ServiceRequest& r : state.waiting) {
        if (has_ambulance(state, r.id)) continue;
        if (!oldest || r.created_at < oldest->created_at ||
            (r.created_at == oldest->created_at && r.id < oldest->id)) {
            oldest = &r;
        }
    }
    return oldest;
}

int nearest_idle_vehicle(const EmsState& state, const Point2D& where) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < state.vehicles.size(); ++i) {
        if (!state.vehicles[i].idle()) continue;
        double d = euclidean_distance(state.vehicles[i].position, where);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

std::vector<const Vehicle*> idle_not_touched(const EmsState& state,
                                             const DispatchDecision& decision) {
    std::vector<const Vehicle*> idle;
    for (const Vehicle& v : state.vehicles) {
        if (!v.idle()) continue;
        bool touched = false;
        for (const auto& [veh, req] : decision.assignment_changes) {
            if (veh == v.id) {
                touched = true;
                break;
            }
        }
        if (!touched) idle.push_back(&v);
    }
    return idle;
}

}  // namespace

DispatchDecision static_dispatch(const EmsState& state, const EmsEvent& event) {
    DispatchDecision decision;
    if (const auto* np = std::get_if<NewPatient>(&event)) {
        const ServiceRequest* patient = nullptr;
        for (const ServiceRequest& r : state.waiting) {
            if (r.id == np->patient) patient = &r;
        }
        if (!patient || has_ambulance(state, patient->id)) return decision;
        int v = nearest_idle_vehicle(state, patient->origin);
        if (v >= 0) {
            decision.assignment_changes.emplace_back(state.vehicles[v].id, patient->id);
        }
        return decision;
    }
    if (const auto* fin = std::get_if<AmbulanceFinished>(&event)) {
        const Vehicle* vehicle = nullptr;
        for (const Vehicle& v : state.vehicles) {
            if (v.id == fin->vehicle) vehicle = &v;
        }
        if (!vehicle || !vehicle->idle()) return decision;
        if (const ServiceRequest* next = oldest_unattended(state)) {
            decision.assignment_changes.emplace_back(vehicle->id, next->id);
        } else if (vehicle->home_station) {
            decision.redeploy_targets[vehicle->id] = *vehicle->home_station;
        }
        return decision;
    }
    throw std::logic_error("static_dispatch: only NewPatient and AmbulanceFinished are handled");
}

DispatchDecision drard_dispatch(const EmsState& state, const EmsEvent& event,
                                const DensityGrid& grid, Meters move_threshold) {
    DispatchDecision decision;

    bool reassign = std::holds_alternative<NewPatient>(event) ||
                    std::holds_alternative<AmbulanceFinished>(event);
    bool redeploy = std::holds_alternative<AmbulanceFinished>(event) ||
                    std::holds_alternative<Deassigned>(event) ||
                    std::holds_alternative<IdleToAssigned>(event) ||
                    std::holds_alternative<DistributionChange>(event);

    if (reassign) {
        // Optimal re-match over A^A u A^I and the waiting patients.
        std::vector<int> candidates;
        for (size_t i = 0; i < state.vehicles.size(); ++i) {
            if (!state.vehicles[i].occupied()) candidates.push_back(static_cast<int>(i));
        }
        if (!candidates.empty() && !state.waiting.empty()) {
            CostMatrix costs(static_cast<int>(candidates.size()),
                             static_cast<int>(state.waiting.size()));
            for (size_t i = 0; i < candidates.size(); ++i) {
                const Vehicle& v = state.vehicles[candidates[i]];
                for (size_t j = 0; j < state.waiting.size(); ++j) {
                    costs.at(static_cast<int>(i), static_cast<int>(j)) =
                        expected_travel_time(v.position, state.waiting[j].origin, v.speed_mps);
                }
            }
            Assignment match = solve_optimal_exact(costs);
            std::vector<std::optional<RequestId>> target(candidates.size());
            for (const auto& [vi, rj] : match.pairs) {
                target[vi] = state.waiting[rj].id;
            }
            for (size_t i = 0; i < candidates.size(); ++i) {
                const Vehicle& v = state.vehicles[candidates[i]];
                if (target[i] != v.request) {
                    decision.assignment_changes.emplace_back(v.id, target[i]);
                }
            }
        } else {
            // No patients: any still-assigned candidate gets de-assigned.
            for (const Vehicle& v : state.vehicles) {
                if (v.assigned() && state.waiting.empty()) {
                    decision.assignment_changes.emplace_back(v.id, std::nullopt);
                }
            }
        }
    }

    if (redeploy) {
        std::vector<Vehicle> idle;
        for (const Vehicle* v : idle_not_touched(state, decision)) idle.push_back(*v);
        for (const auto& [veh, point] : recommend_positions(idle, grid, move_threshold)) {
            decision.redeploy_targets[veh] = point;
        }
    }
    return decision;
}

Seconds response_time(const EmsPatientRecord& record) {
    if (!record.ambulance_arrived_at) {
        throw std::logic_error("response_time: patient was never reached");
    }
    return *record.ambulance_arrived_at - record.created_at;
}

}  // namespace fleetsim
