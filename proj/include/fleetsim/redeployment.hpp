#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fleetsim/core.hpp"

namespace fleetsim {

// Discretized region with a per-cell probability of a request appearing
// there. Cells are square and represented by their centers; weights are
// normalized to sum to 1 on construction/load.
class DensityGrid {
public:
    DensityGrid(int x_cells, int y_cells, Meters cell_size, Point2D origin,
                std::vector<double> weights);

    static DensityGrid uniform(int x_cells, int y_cells, Meters cell_size, Point2D origin = {});

    // CSV format: header "x_cells,y_cells,cell_size_m,origin_x,origin_y",
    // then one weight per cell in row-major order.
    static DensityGrid load_csv(const std::string& path);
    void save_csv(const std::string& path) const;

    int x_cells() const { return x_cells_; }
    int y_cells() const { return y_cells_; }
    int cell_count() const { return x_cells_ * y_cells_; }
    Meters cell_size() const { return cell_size_; }
    Point2D origin() const { return origin_; }
    Meters width() const { return x_cells_ * cell_size_; }
    Meters height() const { return y_cells_ * cell_size_; }

    double prob(int cell) const { return prob_[cell]; }
    const std::vector<double>& probs() const { return prob_; }

    Point2D cell_center(int cell) const {
        int ix = cell % x_cells_;
        int iy = cell / x_cells_;
        return {origin_.x + (ix + 0.5) * cell_size_, origin_.y + (iy + 0.5) * cell_size_};
    }

    bool contains(const Point2D& p) const {
        return p.x >= origin_.x && p.x <= origin_.x + width() && p.y >= origin_.y &&
               p.y <= origin_.y + height();
    }

private:
    int x_cells_;
    int y_cells_;
    Meters cell_size_;
    Point2D origin_;
    std::vector<double> prob_;
};

struct Tessellation {
    std::vector<Point2D> generators;
    std::vector<int> owner;  // per cell, nearest generator (ties -> lowest index)
};

Tessellation voronoi_partition(const std::vector<Point2D>& generators, const DensityGrid& grid);

// F(S) = sum_cells prob(c) * |center(c) - s_owner(c)|^2
double cvt_cost(const std::vector<Point2D>& generators, const DensityGrid& grid);

// Moves each generator to the density-weighted centroid of its region.
// Generators whose region carries zero probability stay put. Output order
// matches input order.
std::vector<Point2D> lloyd_step(const std::vector<Point2D>& generators, const DensityGrid& grid);

// Iterates lloyd_step, stopping early once no generator moves more than 1e-6 m.
std::vector<Point2D> run_lloyd(std::vector<Point2D> generators, const DensityGrid& grid,
                               int iterations);

constexpr int kLloydIterations = 50;
constexpr Meters kDefaultMoveThreshold = 500.0;

// Runs 50 Lloyd iterations from the idle vehicles' current positions and
// recommends the converged point for every vehicle further than
// move_threshold from it. Index i of the result pairs with idle_vehicles[i].
std::map<VehicleId, Point2D> recommend_positions(const std::vector<Vehicle>& idle_vehicles,
                                                 const DensityGrid& grid,
                                                 Meters move_threshold);

}  // namespace fleetsim
