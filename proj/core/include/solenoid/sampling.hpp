#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "solenoid/errors.hpp"

namespace solenoid {

// Uniform double in [0, 1) from the top 53 bits; avoids the
// implementation-defined std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Draws indices proportionally to a fixed weight table (inverse CDF).
class WeightedSampler {
 public:
  explicit WeightedSampler(std::span<const double> weights) : cdf_(weights.size()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += std::max(0.0, weights[i]);
      cdf_[i] = acc;
    }
    if (weights.empty() || !(acc > 0.0)) throw PreconditionError("weighted sampler needs positive total weight");
  }

  std::size_t operator()(std::mt19937_64& rng) const {
    const double target = uniform01(rng) * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

  std::size_t size() const { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

}  // namespace solenoid
