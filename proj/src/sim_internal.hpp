#pragma once

#include <optional>

#include "fleetsim/core.hpp"
#include "fleetsim/event_hash.hpp"
#include "fleetsim/metrics.hpp"
#include "fleetsim/scenario.hpp"

namespace fleetsim {

// Straight-line motion toward a target at constant speed; returns true on
// arrival (snapped to the target). Distance driven accumulates in moved_m.
struct Mover {
    std::optional<Point2D> target;
    double moved_m = 0.0;

    bool step(Point2D& pos, double speed_mps, Seconds dt) {
        if (!target) return false;
        double d = euclidean_distance(pos, *target);
        double reach = speed_mps * dt;
        if (d <= reach) {
            moved_m += d;
            pos = *target;
            target.reset();
            return true;
        }
        pos.x += (target->x - pos.x) / d * reach;
        pos.y += (target->y - pos.y) / d * reach;
        moved_m += reach;
        return false;
    }
};

RunMetrics run_ems(const ScenarioConfig& cfg, uint64_t seed);
RunMetrics run_taxi(const ScenarioConfig& cfg, uint64_t seed);
RunMetrics run_angioplasty(const ScenarioConfig& cfg, uint64_t seed);

}  // namespace fleetsim
