#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "fleetsim/core.hpp"

namespace fleetsim {

constexpr double kForbidden = std::numeric_limits<double>::infinity();

// Dense vehicle x request cost matrix. Entries are costs (seconds, meters or
// composite); kForbidden marks pairs that must not be matched.
class CostMatrix {
public:
    CostMatrix(int rows, int cols, double fill = 0.0);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& at(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    double at(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

private:
    int rows_;
    int cols_;
    std::vector<double> data_;
};

struct Assignment {
    std::vector<std::pair<int, int>> pairs;  // (vehicle index, request index)
    double total_cost = 0.0;
};

struct InfeasibleAssignment : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bertsekas' auction algorithm with epsilon scaling. Costs are scaled to
// integers (factor 1000) internally; with integer costs and
// epsilon < 1/min(n,m) the result is exactly optimal. Rectangular instances
// are padded to square with zero-cost dummies; the matching returned has
// cardinality min(n,m). Throws InfeasibleAssignment if no full matching
// exists among finite entries.
Assignment solve_optimal(const CostMatrix& costs, double epsilon);

// solve_optimal with an epsilon small enough to be exact at the solver's
// milliresolution for arbitrary real costs.
Assignment solve_optimal_exact(const CostMatrix& costs);

// Exhaustive oracle, min(n,m) <= 8. Ties keep the lexicographically first
// matching (lowest vehicle index, then lowest request index).
Assignment brute_force_optimal(const CostMatrix& costs);

// Number of distinct optimal matchings found by the exhaustive oracle
// (cost ties compared with the given tolerance).
int brute_force_optimum_count(const CostMatrix& costs, double tol = 1e-9);

enum class NearestMode { FCFS, NVNR };

// Greedy rules. FCFS walks requests in created_at order and takes the
// nearest remaining idle vehicle. NVNR does the same unless requests
// outnumber vehicles, in which case it walks vehicles (in index order) and
// takes the nearest remaining request. Returned pairs index into the input
// vectors; total_cost is the summed Euclidean distance.
Assignment nearest_rule(const std::vector<ServiceRequest>& requests,
                        const std::vector<Vehicle>& idle_vehicles,
                        NearestMode mode);

}  // namespace fleetsim
