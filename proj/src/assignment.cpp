#include "fleetsim/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fleetsim {

namespace {

constexpr double kScale = 1000.0;  // milliunit resolution for exact integer solving

struct ScaledProblem {
    int n = 0;           // real rows
    int m = 0;           // real cols
    int size = 0;        // padded square size
    double max_abs = 0;  // largest |scaled| finite entry
    double big = 0;      // forbidden-pair penalty
    std::vector<double> value;  // size x size, maximization values (integers)

    double at(int i, int j) const { return value[static_cast<size_t>(i) * size + j]; }
};

// Pads to square with zero-value dummies and negates scaled costs so the
// auction maximizes. Forbidden pairs get a penalty large enough that any
// matching avoiding them beats any matching using one.
ScaledProblem scale_and_pad(const CostMatrix& costs) {
    ScaledProblem p;
    p.n = costs.rows();
    p.m = costs.cols();
    p.size = std::max(p.n, p.m);

    for (int i = 0; i < p.n; ++i) {
        for (int j = 0; j < p.m; ++j) {
            double c = costs.at(i, j);
            if (std::isfinite(c)) {
                p.max_abs = std::max(p.max_abs, std::abs(std::llround(c * kScale)) * 1.0);
            }
        }
    }
    p.big = (2.0 * p.max_abs + 1.0) * (p.size + 1.0);

    p.value.assign(static_cast<size_t>(p.size) * p.size, 0.0);
    for (int i = 0; i < p.n; ++i) {
        for (int j = 0; j < p.m; ++j) {
            double c = costs.at(i, j);
            p.value[static_cast<size_t>(i) * p.size + j] =
                std::isfinite(c) ? -static_cast<double>(std::llround(c * kScale)) : -p.big;
        }
    }
    return p;
}

// One forward-auction phase at fixed epsilon. Prices persist across phases;
// the assignment restarts empty. Unassigned persons are processed lowest
// index first and object scans favor the lowest index on ties.
void auction_phase(const ScaledProblem& p, double eps, std::vector<double>& price,
                   std::vector<int>& owner, std::vector<int>& object_of) {
    const int size = p.size;
    std::fill(owner.begin(), owner.end(), -1);
    std::fill(object_of.begin(), object_of.end(), -1);

    std::vector<int> pending(size);
    for (int i = 0; i < size; ++i) pending[i] = size - 1 - i;

    while (!pending.empty()) {
        int person = pending.back();
        pending.pop_back();

        const double* row = &p.value[static_cast<size_t>(person) * size];
        int best = 0;
        double best_value = row[0] - price[0];
        double second_value = -std::numeric_limits<double>::infinity();
        for (int j = 1; j < size; ++j) {
            double v = row[j] - price[j];
            if (v > best_value) {
                second_value = best_value;
                best_value = v;
                best = j;
            } else if (v > second_value) {
                second_value = v;
            }
        }
        if (!std::isfinite(second_value)) second_value = best_value;  // single object

        price[best] += best_value - second_value + eps;
        int previous = owner[best];
        if (previous >= 0) {
            object_of[previous] = -1;
            pending.push_back(previous);
        }
        owner[best] = person;
        object_of[person] = best;
    }
}

}  // namespace

CostMatrix::CostMatrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("CostMatrix: needs at least one row and one column");
    }
}

Assignment solve_optimal(const CostMatrix& costs, double epsilon) {
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("solve_optimal: epsilon must be positive");
    }
    ScaledProblem p = scale_and_pad(costs);

    // Cap so the N*eps suboptimality bound stays below one scaled unit per
    // the padded size, which also covers rectangular instances.
    double eps_final = kScale * std::min(epsilon, 1.0 / (p.size + 1.0));
    double eps = std::max(p.max_abs / 2.0, eps_final);

    std::vector<double> price(p.size, 0.0);
    std::vector<int> owner(p.size, -1);
    std::vector<int> object_of(p.size, -1);
    while (true) {
        auction_phase(p, eps, price, owner, object_of);
        if (eps <= eps_final) break;
        eps = std::max(eps / 4.0, eps_final);
    }

    Assignment result;
    for (int i = 0; i < p.n; ++i) {
        int j = object_of[i];
        if (j < p.m) {
            if (!std::isfinite(costs.at(i, j))) {
                throw InfeasibleAssignment("solve_optimal: no full matching among finite entries");
            }
            result.pairs.emplace_back(i, j);
            result.total_cost += costs.at(i, j);
        }
    }
    return result;
}

Assignment solve_optimal_exact(const CostMatrix& costs) {
    int size = std::max(costs.rows(), costs.cols());
    return solve_optimal(costs, 1.0 / (kScale * (size + 1.0)));
}

namespace {

struct BruteForceSearch {
    const CostMatrix& costs;
    bool rows_smaller;
    int small_n;
    int large_n;
    std::vector<char> used;
    std::vector<int> partner;  // per small-side index
    std::vector<int> best_partner;
    double best_cost = std::numeric_limits<double>::infinity();
    int optimum_count = 0;
    double tol;

    BruteForceSearch(const CostMatrix& c, double tolerance)
        : costs(c),
          rows_smaller(c.rows() <= c.cols()),
          small_n(std::min(c.rows(), c.cols())),
          large_n(std::max(c.rows(), c.cols())),
          used(large_n, 0),
          partner(small_n, -1),
          best_partner(small_n, -1),
          tol(tolerance) {}

    double entry(int small_idx, int large_idx) const {
        return rows_smaller ? costs.at(small_idx, large_idx) : costs.at(large_idx, small_idx);
    }

    // No branch-and-bound pruning: entries may be negative (composite
    // reassignment costs), so partial sums do not bound the total.
    void recurse(int depth, double cost_so_far) {
        if (depth == small_n) {
            if (cost_so_far < best_cost - tol) {
                best_cost = cost_so_far;
                best_partner = partner;
                optimum_count = 1;
            } else if (cost_so_far <= best_cost + tol) {
                optimum_count += 1;
                if (cost_so_far < best_cost) {
                    best_cost = cost_so_far;
                    best_partner = partner;
                }
            }
            return;
        }
        for (int j = 0; j < large_n; ++j) {
            if (used[j]) continue;
            double c = entry(depth, j);
            if (!std::isfinite(c)) continue;
            used[j] = 1;
            partner[depth] = j;
            recurse(depth + 1, cost_so_far + c);
            used[j] = 0;
        }
    }
};

BruteForceSearch run_brute_force(const CostMatrix& costs, double tol) {
    if (std::min(costs.rows(), costs.cols()) > 8) {
        throw std::invalid_argument("brute_force_optimal: min(n,m) must be <= 8");
    }
    BruteForceSearch search(costs, tol);
    search.recurse(0, 0.0);
    if (search.optimum_count == 0) {
        throw InfeasibleAssignment("brute_force_optimal: no full matching among finite entries");
    }
    return search;
}

}  // namespace

Assignment brute_force_optimal(const CostMatrix& costs) {
    BruteForceSearch search = run_brute_force(costs, 1e-12);
    Assignment result;
    result.total_cost = search.best_cost;
    for (int d = 0; d < search.small_n; ++d) {
        int j = search.best_partner[d];
        if (search.rows_smaller) {
            result.pairs.emplace_back(d, j);
        } else {
            result.pairs.emplace_back(j, d);
        }
    }
    std::sort(result.pairs.begin(), result.pairs.end());
    return result;
}

int brute_force_optimum_count(const CostMatrix& costs, double tol) {
    return run_brute_force(costs, tol).optimum_count;
}

Assignment nearest_rule(const std::vector<ServiceRequest>& requests,
                        const std::vector<Vehicle>& idle_vehicles,
                        NearestMode mode) {
    Assignment result;
    if (requests.empty() || idle_vehicles.empty()) return result;

    std::vector<int> request_order(requests.size());
    std::iota(request_order.begin(), request_order.end(), 0);
    std::stable_sort(request_order.begin(), request_order.end(), [&](int a, int b) {
        if (requests[a].created_at != requests[b].created_at) {
            return requests[a].created_at < requests[b].created_at;
        }
        return requests[a].id < requests[b].id;
    });

    std::vector<char> vehicle_used(idle_vehicles.size(), 0);
    std::vector<char> request_used(requests.size(), 0);

    if (mode == NearestMode::NVNR && requests.size() > idle_vehicles.size()) {
        // Scarce vehicles: each vehicle grabs its nearest waiting request.
        for (size_t v = 0; v < idle_vehicles.size(); ++v) {
            int best = -1;
            double best_dist = std::numeric_limits<double>::infinity();
            for (int r : request_order) {
                if (request_used[r]) continue;
                double d = euclidean_distance(idle_vehicles[v].position, requests[r].origin);
                if (d < best_dist) {
                    best_dist = d;
                    best = r;
                }
            }
            if (best < 0) break;
            request_used[best] = 1;
            result.pairs.emplace_back(static_cast<int>(v), best);
            result.total_cost += best_dist;
        }
    } else {
        for (int r : request_order) {
            int best = -1;
            double best_dist = std::numeric_limits<double>::infinity();
            for (size_t v = 0; v < idle_vehicles.size(); ++v) {
                if (vehicle_used[v]) continue;
                double d = euclidean_distance(idle_vehicles[v].position, requests[r].origin);
                if (d < best_dist) {
                    best_dist = d;
                    best = static_cast<int>(v);
                }
            }
            if (best < 0) break;
            vehicle_used[best] = 1;
            result.pairs.emplace_back(best, r);
            result.total_cost += best_dist;
        }
    }
    std::sort(result.pairs.begin(), result.pairs.end());
    return result;
}

}  // namespace fleetsim
