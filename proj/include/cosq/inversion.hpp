#pragma once

#include "cosq/cos_engine.hpp"
#include "cosq/errors.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cosq {

/// Bisection for an increasing function on [lo, hi] with f(lo) < target <= f(hi).
///
/// Halves the bracket until its width is at most `tol` and returns the last
/// evaluated midpoint. That point is an endpoint of the final bracket, so it
/// lies within `tol` of the root. Takes ceil(log2((hi - lo) / tol)) steps.
/// Throws BracketError when the initial bracket does not straddle `target`.
template <class F>
double bisect(F&& f, double lo, double hi, double target, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("bisect: tolerance must be positive");
  if (!(f(lo) < target && target <= f(hi))) {
    throw BracketError("bisect: target is not bracketed; the function is not monotone on the interval");
  }
  double mid = 0.5 * (lo + hi);
  while (hi - lo > tol) {
    mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket is down to adjacent doubles
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

/// y with |H_COS^{-1}(p) - y| <= eps, by bisection started on (a, b).
double bisect_quantile(const CosApproximation& cos, double p, double eps);

struct ErrorBound {
  double h_min = 0.0;  // min{h_COS(y - eps), h_COS(y + eps)}
  double bound = 0.0;  // 2 eps / h_min + 2 eps, +inf when h_min <= 0
};

/// Computable quantile error bound 2 eps / min{h(y +- eps)} + 2 eps.
ErrorBound error_bound(const CosApproximation& cos, double y, double eps);

/// True when H_COS is nondecreasing (to 1e-12) on `points` equispaced points of [a, b].
bool cdf_is_monotone(const CosApproximation& cos, int points = 101);

struct QuantileResult {
  double p = 0.0;
  double y = 0.0;
  double eps_used = 0.0;
  double h_min = 0.0;
  double bound = 0.0;
  int refinements = 0;
  bool monotone = true;  // pre-scan outcome for the build that produced y
  std::vector<double> eps_history;
  std::shared_ptr<const CosApproximation> cos;
};

/// The refinement budget ran out before the bound met delta.
class RefinementError : public std::runtime_error {
 public:
  RefinementError(const std::string& what, QuantileResult last)
      : std::runtime_error(what), last_(std::move(last)) {}
  const QuantileResult& last() const { return last_; }

 private:
  QuantileResult last_;
};

inline constexpr int kMaxRefinements = 10;

/// Largest value of the form {1, 2, 5} x 10^k not exceeding x.
double snap_down_125(double x);

/// Next CDF tolerance after a bound that exceeded delta:
/// 0.9 delta / (2/h_min + 2), or eps/10 when h_min <= 0, snapped down to
/// the 1-2-5 grid.
double next_eps(double eps, double h_min, double delta);

/// Quantile and bound for a single build, no refinement.
/// Throws std::invalid_argument unless 0 < p - eps and p + eps < 1.
QuantileResult quantile_on_build(std::shared_ptr<const CosApproximation> cos, double p);

/// Builds at cfg.eps and reduces eps until the bound is at most delta.
QuantileResult quantile_with_tolerance(const CharacteristicFunctionSpec& spec, double p, double delta,
                                       const ToleranceConfig& cfg);

struct QuantileFailure {
  double p = 0.0;
  std::string reason;
};

using BatchEntry = std::variant<QuantileResult, QuantileFailure>;

/// Quantiles for many probabilities sharing the most refined build. Entries
/// fail individually; output order follows `ps`.
std::vector<BatchEntry> quantile_batch(const CharacteristicFunctionSpec& spec, const std::vector<double>& ps,
                                       double delta, const ToleranceConfig& cfg);

}  // namespace cosq
