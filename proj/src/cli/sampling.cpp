#include "cosq/cli/sampling.hpp"

#include "cosq/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

namespace cosq::cli {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// H_COS tabulated on a uniform grid; narrows the initial bisection bracket.
class BracketTable {
 public:
  BracketTable(const CosApproximation& cos, std::size_t cells) : ys_(cells + 1), hs_(cells + 1) {
    for (std::size_t j = 0; j <= cells; ++j) {
      ys_[j] = cos.a() + cos.width() * static_cast<double>(j) / static_cast<double>(cells);
      hs_[j] = cos.cdf(ys_[j]);
    }
    sorted_ = std::is_sorted(hs_.begin(), hs_.end());
  }

  // Returns [lo, hi] with H(lo) < u <= H(hi).
  std::pair<double, double> bracket(double u) const {
    if (!sorted_) return {ys_.front(), ys_.back()};
    const auto it = std::lower_bound(hs_.begin(), hs_.end(), u);
    const auto j = static_cast<std::size_t>(it - hs_.begin());
    if (j == 0 || j == hs_.size()) return {ys_.front(), ys_.back()};
    return {ys_[j - 1], ys_[j]};
  }

 private:
  std::vector<double> ys_;
  std::vector<double> hs_;
  bool sorted_ = false;
};

}  // namespace

double CounterUniform::operator()(std::uint64_t index) const {
  const std::uint64_t bits = splitmix64(seed_ + (index + 1) * 0x9e3779b97f4a7c15ULL);
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

SampleSet sample(const CharacteristicFunctionSpec& spec, std::size_t count, std::uint64_t seed, double delta,
                 const ToleranceConfig& cfg, double resample_below) {
  if (count == 0) throw std::invalid_argument("sample: count must be at least 1");
  if (!(delta > 0.0)) throw std::invalid_argument("sample: delta must be positive");
  cfg.validate();

  const CounterUniform uniform(seed);
  SampleSet out;
  out.uniforms.resize(count);
  out.values.assign(count, 0.0);
  for (std::size_t i = 0; i < count; ++i) out.uniforms[i] = uniform(i);
  std::uint64_t next_counter = count;

  ToleranceConfig current = cfg;
  for (int k = 0;; ++k) {
    auto cos = std::make_shared<const CosApproximation>(build_cos(spec, current));
    const BracketTable table(*cos, 1024);
    const auto cdf = [&cos](double y) { return cos->cdf(y); };
    const double eps = current.eps;
    const bool may_refine = k < kMaxRefinements;
    double proposal = eps;
    bool all_within = true;
    double max_bound = 0.0;

    for (std::size_t i = 0; i < count; ++i) {
      double& u = out.uniforms[i];
      const auto outside = [eps](double v) { return !(v - eps > 0.0 && v + eps < 1.0); };
      if (outside(u)) {
        const double gap = 0.5 * std::min(u, 1.0 - u);
        if (eps > resample_below && may_refine && gap >= resample_below) {
          all_within = false;
          proposal = std::min(proposal, snap_down_125(gap));
          continue;
        }
        while (outside(u)) {
          u = uniform(next_counter++);
          ++out.resampled;
        }
      }
      const auto [lo, hi] = table.bracket(u);
      const double y = bisect(cdf, lo, hi, u, eps);
      const ErrorBound eb = error_bound(*cos, y, eps);
      out.values[i] = y;
      max_bound = std::max(max_bound, eb.bound);
      if (eb.bound > delta) {
        all_within = false;
        proposal = std::min(proposal, next_eps(eps, eb.h_min, delta));
      }
    }

    out.eps_used = eps;
    out.terms = cos->terms();
    out.refinements = k;
    out.max_bound = max_bound;
    out.monotone = cdf_is_monotone(*cos);
    if (all_within || !may_refine) {
      out.certified = all_within;
      return out;
    }
    current.eps = proposal;
  }
}

}  // namespace cosq::cli
