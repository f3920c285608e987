#pragma once

#include "cosq/cf_core.hpp"
#include "cosq/cos_engine.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cosq::cli {

/// Counter-based uniform generator: draw i is a SplitMix64 hash of
/// seed + (i + 1) * golden-gamma, mapped to the open interval (0, 1).
/// Draws depend only on (seed, i), never on call order.
class CounterUniform {
 public:
  explicit CounterUniform(std::uint64_t seed) : seed_(seed) {}

  double operator()(std::uint64_t index) const;
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

struct SampleSet {
  std::vector<double> uniforms;
  std::vector<double> values;
  std::size_t resampled = 0;  // draws replaced because they fell within eps of 0 or 1
  double eps_used = 0.0;
  std::size_t terms = 0;
  int refinements = 0;
  double max_bound = 0.0;
  bool certified = false;  // every draw has bound <= delta
  bool monotone = true;
};

/// Inverse-transform sampling through one shared, refined COS build.
///
/// Draws that lie within the current eps of 0 or 1 drive further refinement
/// while eps is above `resample_below`; once eps is below it they are
/// replaced by fresh counter draws.
SampleSet sample(const CharacteristicFunctionSpec& spec, std::size_t count, std::uint64_t seed, double delta,
                 const ToleranceConfig& cfg, double resample_below = 1e-6);

}  // namespace cosq::cli
