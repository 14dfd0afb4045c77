#include <doctest.h>

#include "fleetsim/ems_dispatch.hpp"
#include "fleetsim/rng.hpp"

using namespace fleetsim;

namespace {

Vehicle ambulance(VehicleId id, Point2D pos, std::optional<Point2D> home = std::nullopt) {
    Vehicle v;
    v.id = id;
    v.position = pos;
    v.speed_mps = 10.0;
    v.home_station = home;
    return v;
}

ServiceRequest patient(RequestId id, Point2D origin, Seconds created) {
    ServiceRequest r;
    r.id = id;
    r.origin = origin;
    r.created_at = created;
    return r;
}

double assignment_ett(const EmsState& state) {
    double total = 0.0;
    for (const Vehicle& v : state.vehicles) {
        if (!v.assigned()) continue;
        for (const ServiceRequest& r : state.waiting) {
            if (r.id == *v.request) {
                total += expected_travel_time(v.position, r.origin, v.speed_mps);
            }
        }
    }
    return total;
}

void apply_assignments(EmsState& state, const DispatchDecision& d) {
    for (const auto& [veh, req] : d.assignment_changes) {
        for (Vehicle& v : state.vehicles) {
            if (v.id != veh) continue;
            if (req) {
                v.assign(*req);
            } else {
                v.release();
            }
        }
    }
}

}  // namespace

TEST_CASE("static dispatch") {
    DensityGrid grid = DensityGrid::uniform(4, 4, 250.0);

    SUBCASE("new patient gets the nearest idle ambulance") {
        EmsState state;
        state.vehicles = {ambulance(0, {900, 0}), ambulance(1, {100, 0})};
        state.waiting = {patient(0, {0, 0}, 0.0)};
        DispatchDecision d = static_dispatch(state, NewPatient{0});
        REQUIRE(d.assignment_changes.size() == 1);
        CHECK(d.assignment_changes[0].first == 1);
        CHECK(*d.assignment_changes[0].second == 0);
    }

    SUBCASE("finished ambulance returns to its station") {
        EmsState state;
        state.vehicles = {ambulance(0, {500, 500}, Point2D{100, 100})};
        DispatchDecision d = static_dispatch(state, AmbulanceFinished{0});
        REQUIRE(d.redeploy_targets.count(0) == 1);
        CHECK(d.redeploy_targets[0] == Point2D{100, 100});
    }

    SUBCASE("queued patients are served in call order when ambulances free up") {
        EmsState state;
        state.vehicles = {ambulance(0, {0, 0})};
        state.vehicles[0].assign(5);
        state.vehicles[0].occupy();
        state.waiting = {patient(1, {100, 0}, 50.0), patient(2, {10, 0}, 20.0)};

        // all busy: nothing to do for a new patient
        DispatchDecision d = static_dispatch(state, NewPatient{1});
        CHECK(d.empty());

        // the freed ambulance serves the older patient 2 first
        state.vehicles[0].release();
        d = static_dispatch(state, AmbulanceFinished{0});
        REQUIRE(d.assignment_changes.size() == 1);
        CHECK(*d.assignment_changes[0].second == 2);
    }

    SUBCASE("an already attended patient is not assigned twice") {
        EmsState state;
        state.vehicles = {ambulance(0, {10, 0}), ambulance(1, {20, 0})};
        state.vehicles[0].assign(0);
        state.waiting = {patient(0, {0, 0}, 0.0)};
        DispatchDecision d = static_dispatch(state, NewPatient{0});
        CHECK(d.empty());
    }

    SUBCASE("other events are a contract violation") {
        EmsState state;
        CHECK_THROWS_AS(static_dispatch(state, Deassigned{0}), std::logic_error);
    }
}

TEST_CASE("drard dispatch") {
    DensityGrid grid = DensityGrid::uniform(4, 4, 250.0);

    SUBCASE("fixes the greedy cross assignment") {
        // v0 near p0 and p1; FCFS gives p0 (older) the shared nearest vehicle
        // and pushes p1 far away; the optimum crosses.
        EmsState state;
        state.vehicles = {ambulance(0, {100, 0}), ambulance(1, {400, 0})};
        state.waiting = {patient(0, {150, 0}, 0.0), patient(1, {90, 0}, 1.0)};
        DispatchDecision d = drard_dispatch(state, NewPatient{1}, grid);
        apply_assignments(state, d);
        CHECK(assignment_ett(state) ==
              doctest::Approx(brute_force_optimal([&] {
                                  CostMatrix c(2, 2);
                                  c.at(0, 0) = 5.0;   // 50 m / 10 mps
                                  c.at(0, 1) = 1.0;
                                  c.at(1, 0) = 25.0;
                                  c.at(1, 1) = 31.0;
                                  return c;
                              }())
                                  .total_cost));
        // p1 -> v0, p0 -> v1
        CHECK(state.vehicles[0].request == 1);
        CHECK(state.vehicles[1].request == 0);
    }

    SUBCASE("re-assignment when a closer ambulance frees up") {
        EmsState state;
        state.vehicles = {ambulance(0, {1000, 0}), ambulance(1, {100, 0})};
        state.vehicles[0].assign(0);  // far vehicle en route
        state.waiting = {patient(0, {0, 0}, 0.0)};
        DispatchDecision d = drard_dispatch(state, AmbulanceFinished{1}, grid);
        apply_assignments(state, d);
        CHECK(state.vehicles[1].request == 0);
        CHECK(state.vehicles[0].idle());
    }

    SUBCASE("no waiting patients: redeploy only") {
        EmsState state;
        state.vehicles = {ambulance(0, {10, 10}), ambulance(1, {990, 990})};
        DispatchDecision d = drard_dispatch(state, AmbulanceFinished{0}, grid, 0.0);
        CHECK(d.assignment_changes.empty());
        CHECK(d.redeploy_targets.size() == 2);
    }

    SUBCASE("optimal ETT matches the oracle on random snapshots") {
        Rng rng(99);
        for (int trial = 0; trial < 30; ++trial) {
            EmsState state;
            int n = rng.uniform_int(1, 6);
            int m = rng.uniform_int(1, 6);
            for (int i = 0; i < n; ++i) {
                state.vehicles.push_back(
                    ambulance(i, {rng.uniform(0, 1000), rng.uniform(0, 1000)}));
            }
            for (int j = 0; j < m; ++j) {
                state.waiting.push_back(
                    patient(j, {rng.uniform(0, 1000), rng.uniform(0, 1000)}, j));
            }
            CostMatrix costs(n, m);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < m; ++j) {
                    costs.at(i, j) = expected_travel_time(state.vehicles[i].position,
                                                          state.waiting[j].origin, 10.0);
                }
            }
            DispatchDecision d = drard_dispatch(state, NewPatient{0}, grid);
            apply_assignments(state, d);
            CHECK(assignment_ett(state) ==
                  doctest::Approx(brute_force_optimal(costs).total_cost).epsilon(1e-6));

            // one ambulance per patient and vice versa
            std::vector<int> seen;
            for (const Vehicle& v : state.vehicles) {
                if (v.assigned()) seen.push_back(*v.request);
            }
            std::sort(seen.begin(), seen.end());
            CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
        }
    }

    SUBCASE("occupied ambulances are never touched") {
        EmsState state;
        state.vehicles = {ambulance(0, {100, 0}), ambulance(1, {200, 0})};
        state.vehicles[0].assign(7);
        state.vehicles[0].occupy();
        state.waiting = {patient(0, {0, 0}, 0.0)};
        DispatchDecision d = drard_dispatch(state, NewPatient{0}, grid);
        for (const auto& [veh, req] : d.assignment_changes) CHECK(veh != 0);
        CHECK(d.redeploy_targets.count(0) == 0);
    }
}

TEST_CASE("response time") {
    EmsPatientRecord rec;
    rec.id = 0;
    rec.created_at = 100.0;

    SUBCASE("unserved patients are flagged") {
        CHECK_THROWS_AS(response_time(rec), std::logic_error);
    }

    SUBCASE("adjacent ambulance: response is the call duration") {
        rec.ambulance_arrived_at = 100.0 + 120.0;
        CHECK(response_time(rec) == doctest::Approx(120.0));
    }

    SUBCASE("call plus travel") {
        // 4722 m at 17 km/h after a 2 min call
        rec.ambulance_arrived_at = 100.0 + 120.0 + 4722.0 / (17.0 / 3.6);
        CHECK(response_time(rec) == doctest::Approx(1120.0).epsilon(0.001));
    }

    SUBCASE("the clock runs from the first call even after de-assignments") {
        rec.ambulance_arrived_at = 100.0 + 900.0;  // served much later
        CHECK(response_time(rec) == doctest::Approx(900.0));
    }
}
