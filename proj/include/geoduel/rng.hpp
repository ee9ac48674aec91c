#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace geoduel {

// splitmix64: the documented point-sampling generator. Scenario sampling is
// reproducible across implementations from the seed alone:
//   state += 0x9E3779B97F4A7C15
//   z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   z ^= z >> 31
// and uniform doubles take the top 53 bits: (z >> 11) * 2^-53.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::vector<double> point_in_box(std::span<const std::pair<double, double>> box) {
        std::vector<double> p;
        p.reserve(box.size());
        for (const auto& [lo, hi] : box) p.push_back(uniform(lo, hi));
        return p;
    }

  private:
    uint64_t state_;
};

} // namespace geoduel
