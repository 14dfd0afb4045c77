#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace fleetsim {

// mt19937_64 with hand-rolled transforms so sampled streams are bit-exact
// across standard libraries (std distributions are implementation-defined).
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    double uniform01() { return (gen_() >> 11) * 0x1.0p-53; }  // [0,1)

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // inclusive bounds
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(gen_() % static_cast<uint64_t>(hi - lo + 1));
    }

    // Box-Muller, always two draws.
    double normal(double mean, double sd) {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    // index into a cumulative weight vector (last entry = total)
    size_t discrete(const std::vector<double>& cumulative) {
        double x = uniform01() * cumulative.back();
        size_t lo = 0, hi = cumulative.size() - 1;
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (cumulative[mid] <= x) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        return lo;
    }

private:
    std::mt19937_64 gen_;
};

// Derives independent stream seeds from a master seed (splitmix64 step).
inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
    uint64_t z = master + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace fleetsim
