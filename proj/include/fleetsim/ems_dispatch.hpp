#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "fleetsim/assignment.hpp"
#include "fleetsim/core.hpp"
#include "fleetsim/redeployment.hpp"

namespace fleetsim {

struct NewPatient {
    RequestId patient;
};
struct AmbulanceFinished {
    VehicleId vehicle;
};
struct Deassigned {
    VehicleId vehicle;
};
struct IdleToAssigned {
    VehicleId vehicle;
};
struct DistributionChange {
    int grid_index;
};

using EmsEvent = std::variant<NewPatient, AmbulanceFinished, Deassigned, IdleToAssigned,
                              DistributionChange>;

// A vehicle appears at most once across both lists; occupied vehicles never
// appear. De-assignments are (vehicle, nullopt); the engine turns them into
// Deassigned events whose handling supplies the redeploy target.
struct DispatchDecision {
    std::vector<std::pair<VehicleId, std::optional<RequestId>>> assignment_changes;
    std::map<VehicleId, Point2D> redeploy_targets;

    bool empty() const { return assignment_changes.empty() && redeploy_targets.empty(); }
};

struct EmsState {
    std::vector<Vehicle> vehicles;
    std::vector<ServiceRequest> waiting;  // dispatchable, not yet reached by an ambulance
};

// SUMMA baseline: irrevocable nearest-idle FCFS on NewPatient; finished
// ambulances serve the oldest queued patient or return to their station.
DispatchDecision static_dispatch(const EmsState& state, const EmsEvent& event);

// DRARD: NewPatient/AmbulanceFinished re-solve the optimal assignment over
// all non-occupied ambulances and waiting patients (expected-travel-time
// costs); the four redeployment triggers recompute CVT recommendations for
// idle vehicles.
DispatchDecision drard_dispatch(const EmsState& state, const EmsEvent& event,
                                const DensityGrid& grid,
                                Meters move_threshold = kDefaultMoveThreshold);

struct EmsPatientRecord {
    RequestId id = -1;
    Seconds created_at = 0.0;                      // call start
    std::optional<Seconds> ambulance_arrived_at;   // medical staff on scene
    std::optional<Seconds> completed_at;           // delivered to hospital
};

// Time between the start of the call and the ambulance reaching the patient.
// Throws if the patient was never reached.
Seconds response_time(const EmsPatientRecord& record);

}  // namespace fleetsim
