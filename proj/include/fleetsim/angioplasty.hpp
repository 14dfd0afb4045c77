#pragma once

#include <optional>
#include <vector>

#include "fleetsim/assignment.hpp"
#include "fleetsim/core.hpp"

namespace fleetsim {

struct Hospital {
    int id = -1;
    Point2D position;
    Seconds free_at = 0.0;           // earliest a catheterization lab frees for a new patient
    std::vector<RequestId> queue;    // arrived patients awaiting their procedure, FIFO
};

enum class TeamState { Available, EnRoute, Operating };

struct CardiologyTeam {
    int id = -1;
    Point2D position;
    TeamState state = TeamState::Available;
    std::optional<int> target_hospital;
    int home_hospital = -1;  // FCFS benchmark alerts a hospital's own team
};

// Planner view of one coordination snapshot. Ambulances listed here are
// re-assignable (idle or en route to a patient); teams listed are not
// operating; hospital busy_until already accounts for patients physically
// at the hospital.
struct AngioSnapshot {
    struct AmbulanceView {
        VehicleId id;
        Point2D position;
        double speed_mps;
        std::optional<RequestId> current;  // patient currently assigned
    };
    struct PatientNeedingAmbulance {
        RequestId id;
        Point2D position;
        Seconds created_at;
    };
    struct PatientNeedingHospital {
        RequestId id;
        Point2D position;               // origin during in-situ, ambulance position in transport
        std::optional<int> hospital;    // current destination, if any
        Seconds created_at;
    };
    struct HospitalView {
        int id;
        Point2D position;
        Seconds busy_until;   // when the fixed (arrived/operating) load clears
        int arrived_waiting;  // patients at the hospital still needing a team
    };
    struct TeamView {
        int id;
        Point2D position;
        double speed_mps;
        int home_hospital;
    };

    std::vector<AmbulanceView> ambulances;
    std::vector<PatientNeedingAmbulance> awaiting_ambulance;
    std::vector<PatientNeedingHospital> awaiting_hospital;
    std::vector<HospitalView> hospitals;
    std::vector<TeamView> teams;
    Seconds now = 0.0;
    Seconds procedure_s = 3600.0;
    double ambulance_speed_mps = 1.0;  // carries patients to hospitals
};

struct AngioPlan {
    std::vector<std::pair<VehicleId, RequestId>> ambulance_to_patient;
    std::vector<std::pair<RequestId, int>> patient_to_hospital;
    std::vector<std::pair<int, int>> team_to_hospital;
};

// Three-level decomposition: ambulances->patients on t(a,p), then
// patients->hospitals on the tail max(transport, lab wait) with queue-aware
// rounds when patients outnumber hospitals, then teams->hospitals on t(c,h)
// driven by per-hospital demand.
AngioPlan three_level_assign(const AngioSnapshot& state);

// Conventional baseline: per patient in call order, nearest idle ambulance,
// nearest hospital, and that hospital's own team; decisions are final, so
// the snapshot must only contain uncommitted needs.
AngioPlan fcfs_benchmark_assign(const AngioSnapshot& state);

struct DelayBreakdown {
    Seconds t1 = 0;  // call response and decision
    Seconds t2 = 0;  // ambulance mobilization and transit
    Seconds t3 = 0;  // in-situ assistance
    Seconds t4 = 0;  // transport to hospital
    Seconds t5 = 0;  // team lateness past transport start
    Seconds t6 = 0;  // residual lab/queue wait
    Seconds total() const { return t1 + t2 + t3 + std::max(t4, t5) + t6; }
};

struct DelayPlanInputs {
    Seconds t1 = 0;
    Seconds ambulance_to_patient = 0;  // t(a,p)
    Seconds in_situ = 0;               // t(p)
    Seconds transport = 0;             // t(p,h)
    Seconds team_to_hospital = 0;      // t(c,h), from the transport-start clock
    Seconds hospital_free_in = 0;      // lab frees this long after transport start
};

// Expected patient delay for a complete plan:
// t1 + t(a,p) + t(p) + max(t(p,h) + wait-after-arrival, t(c,h)).
Seconds patient_delay(const DelayPlanInputs& in);

// P = (t_fcfs - t_or) / t_fcfs * 100
double performance_P(Seconds t_fcfs, Seconds t_or);

}  // namespace fleetsim
