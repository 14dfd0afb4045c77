#include "fleetsim/redeployment.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fleetsim {

DensityGrid::DensityGrid(int x_cells, int y_cells, Meters cell_size, Point2D origin,
                         std::vector<double> weights)
    : x_cells_(x_cells), y_cells_(y_cells), cell_size_(cell_size), origin_(origin),
      prob_(std::move(weights)) {
    if (x_cells < 1 || y_cells < 1 || !(cell_size > 0.0)) {
        throw std::invalid_argument("DensityGrid: invalid dimensions");
    }
    if (prob_.size() != static_cast<size_t>(x_cells) * y_cells) {
        throw std::invalid_argument("DensityGrid: weight count does not match cell count");
    }
    double total = 0.0;
    for (double w : prob_) {
        if (!(w >= 0.0)) throw std::invalid_argument("DensityGrid: negative or NaN weight");
        total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("DensityGrid: all weights zero");
    for (double& w : prob_) w /= total;
}

DensityGrid DensityGrid::uniform(int x_cells, int y_cells, Meters cell_size, Point2D origin) {
    std::vector<double> w(static_cast<size_t>(x_cells) * y_cells, 1.0);
    return DensityGrid(x_cells, y_cells, cell_size, origin, std::move(w));
}

DensityGrid DensityGrid::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("DensityGrid: cannot open " + path);
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    int xc = 0, yc = 0;
    double cell = 0, ox = 0, oy = 0;
    char comma;
    if (!(hs >> xc >> comma >> yc >> comma >> cell >> comma >> ox >> comma >> oy)) {
        throw std::runtime_error("DensityGrid: bad header in " + path);
    }
    std::vector<double> weights;
    weights.reserve(static_cast<size_t>(xc) * yc);
    double w;
    while (in >> w) weights.push_back(w);
    return DensityGrid(xc, yc, cell, {ox, oy}, std::move(weights));
}

void DensityGrid::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("DensityGrid: cannot write " + path);
    out.precision(17);
    out << x_cells_ << "," << y_cells_ << "," << cell_size_ << "," << origin_.x << ","
        << origin_.y << "\n";
    for (double w : prob_) out << w << "\n";
}

namespace {

inline double sq_dist(const Point2D& a, const Point2D& b) {
    double dx = a.x - b.x;
    double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

}  // namespace

Tessellation voronoi_partition(const std::vector<Point2D>& generators, const DensityGrid& grid) {
    if (generators.empty()) {
        throw std::invalid_argument("voronoi_partition: empty generator set");
    }
    Tessellation t;
    t.generators = generators;
    t.owner.resize(grid.cell_count());
    for (int c = 0; c < grid.cell_count(); ++c) {
        Point2D center = grid.cell_center(c);
        int best = 0;
        double best_d = sq_dist(center, generators[0]);
        for (size_t g = 1; g < generators.size(); ++g) {
            double d = sq_dist(center, generators[g]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(g);
            }
        }
        t.owner[c] = best;
    }
    return t;
}

double cvt_cost(const std::vector<Point2D>& generators, const DensityGrid& grid) {
    Tessellation t = voronoi_partition(generators, grid);
    double cost = 0.0;
    for (int c = 0; c < grid.cell_count(); ++c) {
        cost += grid.prob(c) * sq_dist(grid.cell_center(c), generators[t.owner[c]]);
    }
    return cost;
}

std::vector<Point2D> lloyd_step(const std::vector<Point2D>& generators, const DensityGrid& grid) {
    Tessellation t = voronoi_partition(generators, grid);
    size_t k = generators.size();
    std::vector<double> mass(k, 0.0), sx(k, 0.0), sy(k, 0.0);
    for (int c = 0; c < grid.cell_count(); ++c) {
        double w = grid.prob(c);
        if (w == 0.0) continue;
        Point2D center = grid.cell_center(c);
        int g = t.owner[c];
        mass[g] += w;
        sx[g] += w * center.x;
        sy[g] += w * center.y;
    }
    std::vector<Point2D> next(k);
    for (size_t g = 0; g < k; ++g) {
        next[g] = mass[g] > 0.0 ? Point2D{sx[g] / mass[g], sy[g] / mass[g]} : generators[g];
    }
    return next;
}

std::vector<Point2D> run_lloyd(std::vector<Point2D> generators, const DensityGrid& grid,
                               int iterations) {
    if (iterations < 0) throw std::invalid_argument("run_lloyd: negative iteration count");
    for (int it = 0; it < iterations; ++it) {
        std::vector<Point2D> next = lloyd_step(generators, grid);
        double max_move = 0.0;
        for (size_t g = 0; g < generators.size(); ++g) {
            max_move = std::max(max_move, euclidean_distance(generators[g], next[g]));
        }
        generators = std::move(next);
        if (max_move <= 1e-6) break;
    }
    return generators;
}

std::map<VehicleId, Point2D> recommend_positions(const std::vector<Vehicle>& idle_vehicles,
                                                 const DensityGrid& grid,
                                                 Meters move_threshold) {
    std::map<VehicleId, Point2D> out;
    if (idle_vehicles.empty()) return out;
    std::vector<Point2D> generators;
    generators.reserve(idle_vehicles.size());
    for (const Vehicle& v : idle_vehicles) generators.push_back(v.position);
    std::vector<Point2D> target = run_lloyd(std::move(generators), grid, kLloydIterations);
    for (size_t i = 0; i < idle_vehicles.size(); ++i) {
        if (euclidean_distance(idle_vehicles[i].position, target[i]) > move_threshold) {
            out[idle_vehicles[i].id] = target[i];
        }
    }
    return out;
}

}  // namespace fleetsim
