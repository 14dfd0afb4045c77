#include <doctest.h>

#include "fleetsim/core.hpp"
#include "fleetsim/rng.hpp"

using namespace fleetsim;

TEST_CASE("euclidean distance basics") {
    CHECK(euclidean_distance({0, 0}, {0, 0}) == 0.0);
    CHECK(euclidean_distance({0, 0}, {3, 4}) == doctest::Approx(5.0));
    CHECK(euclidean_distance({1, 1}, {4, 5}) == doctest::Approx(5.0));
}

TEST_CASE("distance metric axioms on sampled pairs") {
    Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        Point2D a{rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4)};
        Point2D b{rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4)};
        Point2D c{rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4)};
        double ab = euclidean_distance(a, b);
        double ba = euclidean_distance(b, a);
        CHECK(ab == ba);
        CHECK(ab >= 0.0);
        CHECK(euclidean_distance(a, a) == 0.0);
        CHECK(euclidean_distance(a, c) <= ab + euclidean_distance(b, c) + 1e-9);
    }
}

TEST_CASE("expected travel time") {
    CHECK(expected_travel_time({5, 5}, {5, 5}, 3.0) == 0.0);
    // 17 km/h over 4722 m is roughly 1000 s
    CHECK(expected_travel_time({0, 0}, {4722, 0}, 17.0 / 3.6) ==
          doctest::Approx(1000.0).epsilon(0.001));
    CHECK(expected_travel_time({0, 0}, {1000, 0}, 10.0) == doctest::Approx(100.0));
    CHECK_THROWS_AS(expected_travel_time({0, 0}, {1, 0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(expected_travel_time({0, 0}, {1, 0}, -2.0), std::invalid_argument);
}

TEST_CASE("travel time is linear in distance and inverse in speed") {
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        Point2D a{rng.uniform(0, 1e4), rng.uniform(0, 1e4)};
        Point2D b{rng.uniform(0, 1e4), rng.uniform(0, 1e4)};
        double v = rng.uniform(0.5, 40.0);
        double t = expected_travel_time(a, b, v);
        CHECK(t == doctest::Approx(euclidean_distance(a, b) / v));
        CHECK(expected_travel_time(a, b, 2 * v) == doctest::Approx(t / 2));
        Point2D mid{(a.x + b.x) / 2, (a.y + b.y) / 2};
        CHECK(expected_travel_time(a, mid, v) == doctest::Approx(t / 2));
    }
}

TEST_CASE("vehicle lifecycle transitions") {
    Vehicle v;
    v.id = 3;
    CHECK(v.idle());
    v.assign(9);
    CHECK(v.assigned());
    CHECK(v.request == 9);
    v.assign(11);  // re-assignment while en route
    CHECK(v.request == 11);
    v.occupy();
    CHECK(v.occupied());
    CHECK_THROWS_AS(v.assign(12), std::logic_error);
    v.release();
    CHECK(v.idle());
    CHECK(!v.request);

    Vehicle w;
    CHECK_THROWS_AS(w.occupy(), std::logic_error);  // idle -> occupied is not a transition
    w.assign(1);
    w.release();  // de-assignment
    CHECK(w.idle());
}
