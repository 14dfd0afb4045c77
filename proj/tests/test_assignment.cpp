#include <doctest.h>

#include <algorithm>

#include "fleetsim/assignment.hpp"
#include "fleetsim/rng.hpp"

using namespace fleetsim;

namespace {

CostMatrix random_int_matrix(Rng& rng, int n, int m, int max_cost = 100) {
    CostMatrix costs(n, m);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            costs.at(i, j) = rng.uniform_int(0, max_cost);
        }
    }
    return costs;
}

}  // namespace

TEST_CASE("solve_optimal on pinned instances") {
    CostMatrix single(1, 1);
    single.at(0, 0) = 5;
    Assignment a = solve_optimal(single, 0.5);
    CHECK(a.pairs == std::vector<std::pair<int, int>>{{0, 0}});
    CHECK(a.total_cost == doctest::Approx(5.0));

    CostMatrix two(2, 2);
    two.at(0, 0) = 1;
    two.at(0, 1) = 100;
    two.at(1, 0) = 100;
    two.at(1, 1) = 1;
    a = solve_optimal(two, 1.0 / 3.0);
    CHECK(a.pairs == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});
    CHECK(a.total_cost == doctest::Approx(2.0));

    // 3 vehicles, 2 requests: the best size-2 injection
    CostMatrix rect(3, 2);
    rect.at(0, 0) = 1;
    rect.at(0, 1) = 2;
    rect.at(1, 0) = 3;
    rect.at(1, 1) = 1;
    rect.at(2, 0) = 2;
    rect.at(2, 1) = 2;
    a = solve_optimal(rect, 1.0 / 3.0);
    CHECK(a.pairs == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});
    CHECK(a.total_cost == doctest::Approx(2.0));
}

TEST_CASE("brute force oracle on pinned instances") {
    CostMatrix single(1, 1);
    single.at(0, 0) = 5;
    CHECK(brute_force_optimal(single).total_cost == doctest::Approx(5.0));

    CostMatrix two(2, 2);
    two.at(0, 0) = 1;
    two.at(0, 1) = 100;
    two.at(1, 0) = 100;
    two.at(1, 1) = 1;
    CHECK(brute_force_optimal(two).total_cost == doctest::Approx(2.0));

    Rng rng(101);
    CostMatrix five = random_int_matrix(rng, 5, 5);
    CHECK(brute_force_optimal(five).total_cost ==
          doctest::Approx(solve_optimal_exact(five).total_cost));

    CHECK_THROWS_AS(brute_force_optimal(CostMatrix(9, 9, 1.0)), std::invalid_argument);
}

TEST_CASE("auction equals brute force over 500 random instances") {
    Rng rng(2024);
    for (int trial = 0; trial < 500; ++trial) {
        int n = rng.uniform_int(1, 6);
        int m = rng.uniform_int(1, 6);
        CostMatrix costs = random_int_matrix(rng, n, m);
        double epsilon = 1.0 / (std::min(n, m) + 1);
        Assignment fast = solve_optimal(costs, epsilon);
        Assignment exact = brute_force_optimal(costs);
        REQUIRE(fast.total_cost == exact.total_cost);
        REQUIRE(static_cast<int>(fast.pairs.size()) == std::min(n, m));
    }
}

TEST_CASE("greedy FCFS never beats the optimum") {
    Rng rng(55);
    for (int trial = 0; trial < 100; ++trial) {
        int n = rng.uniform_int(1, 5);
        int m = rng.uniform_int(1, 5);
        std::vector<Vehicle> vehicles(n);
        std::vector<ServiceRequest> requests(m);
        for (int i = 0; i < n; ++i) {
            vehicles[i].id = i;
            vehicles[i].position = {rng.uniform(0, 1000), rng.uniform(0, 1000)};
        }
        for (int j = 0; j < m; ++j) {
            requests[j].id = j;
            requests[j].created_at = j;
            requests[j].origin = {rng.uniform(0, 1000), rng.uniform(0, 1000)};
        }
        CostMatrix costs(n, m);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < m; ++j) {
                costs.at(i, j) = euclidean_distance(vehicles[i].position, requests[j].origin);
            }
        }
        Assignment greedy = nearest_rule(requests, vehicles, NearestMode::FCFS);
        Assignment best = solve_optimal_exact(costs);
        CHECK(greedy.total_cost >= best.total_cost - 1e-6);
    }
}

TEST_CASE("permutation equivariance on unique-optimum instances") {
    Rng rng(77);
    int tested = 0;
    while (tested < 50) {
        int n = rng.uniform_int(2, 5);
        CostMatrix costs = random_int_matrix(rng, n, n, 1000);
        if (brute_force_optimum_count(costs) != 1) continue;
        ++tested;

        std::vector<int> rows(n), cols(n);
        for (int i = 0; i < n; ++i) rows[i] = cols[i] = i;
        for (int i = n - 1; i > 0; --i) {
            std::swap(rows[i], rows[rng.uniform_int(0, i)]);
            std::swap(cols[i], cols[rng.uniform_int(0, i)]);
        }
        CostMatrix shuffled(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                shuffled.at(i, j) = costs.at(rows[i], cols[j]);
            }
        }
        Assignment base = solve_optimal_exact(costs);
        Assignment perm = solve_optimal_exact(shuffled);
        std::vector<std::pair<int, int>> mapped;
        for (auto [i, j] : perm.pairs) mapped.emplace_back(rows[i], cols[j]);
        std::sort(mapped.begin(), mapped.end());
        CHECK(mapped == base.pairs);
    }
}

TEST_CASE("infeasible and invalid inputs are rejected") {
    CostMatrix costs(2, 2);
    costs.at(0, 0) = kForbidden;
    costs.at(0, 1) = kForbidden;
    costs.at(1, 0) = 1;
    costs.at(1, 1) = 1;
    CHECK_THROWS_AS(solve_optimal(costs, 0.25), InfeasibleAssignment);
    CHECK_THROWS_AS(brute_force_optimal(costs), InfeasibleAssignment);

    CostMatrix ok(1, 1, 1.0);
    CHECK_THROWS_AS(solve_optimal(ok, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_optimal(ok, -1.0), std::invalid_argument);
}

TEST_CASE("forbidden pairs are avoided when a full matching exists") {
    CostMatrix costs(2, 2);
    costs.at(0, 0) = kForbidden;
    costs.at(0, 1) = 7;
    costs.at(1, 0) = 3;
    costs.at(1, 1) = 1;  // tempting but forces vehicle 0 onto the forbidden pair
    Assignment a = solve_optimal_exact(costs);
    CHECK(a.pairs == std::vector<std::pair<int, int>>{{0, 1}, {1, 0}});
    CHECK(a.total_cost == doctest::Approx(10.0));
}

TEST_CASE("nearest rule") {
    std::vector<Vehicle> vehicles(2);
    vehicles[0].id = 0;
    vehicles[0].position = {200, 0};
    vehicles[1].id = 1;
    vehicles[1].position = {100, 0};
    std::vector<ServiceRequest> one(1);
    one[0].id = 0;
    one[0].origin = {0, 0};

    SUBCASE("dominance: the nearer vehicle is chosen") {
        Assignment a = nearest_rule(one, vehicles, NearestMode::FCFS);
        REQUIRE(a.pairs.size() == 1);
        CHECK(a.pairs[0] == std::pair<int, int>{1, 0});
    }

    SUBCASE("older request wins the contested vehicle") {
        std::vector<ServiceRequest> two(2);
        two[0].id = 0;
        two[0].created_at = 10.0;  // newer
        two[0].origin = {90, 0};
        two[1].id = 1;
        two[1].created_at = 5.0;  // older
        two[1].origin = {110, 0};
        Assignment a = nearest_rule(two, vehicles, NearestMode::FCFS);
        REQUIRE(a.pairs.size() == 2);
        // both nearest to vehicle 1; the older request (index 1) gets it
        CHECK(a.pairs == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});
    }

    SUBCASE("no idle vehicles -> empty assignment") {
        Assignment a = nearest_rule(one, {}, NearestMode::FCFS);
        CHECK(a.pairs.empty());
    }

    SUBCASE("NVNR iterates vehicles when requests outnumber them") {
        std::vector<ServiceRequest> three(3);
        for (int j = 0; j < 3; ++j) {
            three[j].id = j;
            three[j].created_at = j;
        }
        three[0].origin = {0, 0};
        three[1].origin = {95, 0};
        three[2].origin = {205, 0};
        Assignment a = nearest_rule(three, vehicles, NearestMode::NVNR);
        REQUIRE(a.pairs.size() == 2);
        // vehicle 0 (at 200) takes request 2 (at 205); vehicle 1 takes request 1
        CHECK(a.pairs == std::vector<std::pair<int, int>>{{0, 2}, {1, 1}});

        // FCFS on the same instance serves in call order instead
        Assignment f = nearest_rule(three, vehicles, NearestMode::FCFS);
        CHECK(f.pairs == std::vector<std::pair<int, int>>{{0, 1}, {1, 0}});
    }
}
