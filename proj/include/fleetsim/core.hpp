#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace fleetsim {

using Seconds = double;
using Meters = double;
using Euros = double;

using VehicleId = int;
using RequestId = int;

struct Point2D {
    Meters x = 0.0;
    Meters y = 0.0;
};

inline bool operator==(const Point2D& a, const Point2D& b) {
    return a.x == b.x && a.y == b.y;
}

inline Meters euclidean_distance(const Point2D& a, const Point2D& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Straight-line travel at constant speed. Throws on non-positive speed.
inline Seconds expected_travel_time(const Point2D& from, const Point2D& to, double speed_mps) {
    if (!(speed_mps > 0.0)) {
        throw std::invalid_argument("expected_travel_time: speed must be positive");
    }
    return euclidean_distance(from, to) / speed_mps;
}

enum class VehiclePhase { Idle, Assigned, Occupied };

enum class VehicleKind { Ambulance, Taxi };

// Lifecycle: Idle -> Assigned -> Occupied -> Idle, plus Assigned -> Idle on
// de-assignment. Violations indicate an engine bug and throw.
struct Vehicle {
    VehicleId id = -1;
    Point2D position;
    VehiclePhase phase = VehiclePhase::Idle;
    std::optional<RequestId> request;
    double speed_mps = 1.0;
    std::optional<Point2D> home_station;
    VehicleKind kind = VehicleKind::Ambulance;

    bool idle() const { return phase == VehiclePhase::Idle; }
    bool assigned() const { return phase == VehiclePhase::Assigned; }
    bool occupied() const { return phase == VehiclePhase::Occupied; }

    void assign(RequestId r) {
        if (phase == VehiclePhase::Occupied) {
            throw std::logic_error("vehicle " + std::to_string(id) + ": occupied vehicles cannot be assigned");
        }
        phase = VehiclePhase::Assigned;
        request = r;
    }

    void occupy() {
        if (phase != VehiclePhase::Assigned) {
            throw std::logic_error("vehicle " + std::to_string(id) + ": only assigned vehicles become occupied");
        }
        phase = VehiclePhase::Occupied;
    }

    void release() {
        phase = VehiclePhase::Idle;
        request.reset();
    }
};

enum class RequestState { Waiting, PickedUp, Completed };

struct ServiceRequest {
    RequestId id = -1;
    Point2D origin;
    std::optional<Point2D> destination;
    Seconds created_at = 0.0;
    RequestState state = RequestState::Waiting;
    std::optional<Seconds> urgency_deadline;
};

}  // namespace fleetsim
