#include "cosq/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace cosq {

namespace {

void require_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("probability must lie in (0, 1)");
}

void require_interior(double p, double eps) {
  if (!(p - eps > 0.0 && p + eps < 1.0)) {
    std::ostringstream msg;
    msg << "p = " << p << " is within eps = " << eps
        << " of 0 or 1; the error bound needs 0 < p - eps and p + eps < 1, use a smaller eps";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

double bisect_quantile(const CosApproximation& cos, double p, double eps) {
  require_probability(p);
  if (!(eps > 0.0)) throw std::invalid_argument("bisect_quantile: eps must be positive");
  return bisect([&cos](double y) { return cos.cdf(y); }, cos.a(), cos.b(), p, eps);
}

ErrorBound error_bound(const CosApproximation& cos, double y, double eps) {
  ErrorBound out;
  out.h_min = std::min(cos.density(y - eps), cos.density(y + eps));
  out.bound = out.h_min > 0.0 ? 2.0 * eps / out.h_min + 2.0 * eps : std::numeric_limits<double>::infinity();
  return out;
}

bool cdf_is_monotone(const CosApproximation& cos, int points) {
  double previous = cos.cdf(cos.a());
  for (int i = 1; i < points; ++i) {
    const double y = cos.a() + cos.width() * i / (points - 1);
    const double value = cos.cdf(y);
    if (value < previous - 1e-12) return false;
    previous = value;
  }
  return true;
}

double snap_down_125(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("snap_down_125: x must be positive");
  const double decade = std::pow(10.0, std::floor(std::log10(x)));
  // Guard against log10 rounding just below an exact power of ten.
  double best = decade / 10.0 * 5.0;
  for (double mantissa : {1.0, 2.0, 5.0, 10.0}) {
    const double candidate = mantissa * decade;
    if (candidate <= x * (1.0 + 1e-12)) best = candidate;
  }
  return best;
}

double next_eps(double eps, double h_min, double delta) {
  const double proposal = h_min > 0.0 ? 0.9 * delta / (2.0 / h_min + 2.0) : eps / 10.0;
  double next = snap_down_125(proposal);
  if (next >= eps) next = snap_down_125(eps * (1.0 - 1e-9));
  if (next >= eps) next = eps / 2.0;
  return next;
}

QuantileResult quantile_on_build(std::shared_ptr<const CosApproximation> cos, double p) {
  require_probability(p);
  const double eps = cos->eps();
  if (!(eps > 0.0)) throw std::invalid_argument("quantile_on_build: build carries no eps");
  require_interior(p, eps);
  QuantileResult r;
  r.p = p;
  r.eps_used = eps;
  r.y = bisect_quantile(*cos, p, eps);
  const ErrorBound eb = error_bound(*cos, r.y, eps);
  r.h_min = eb.h_min;
  r.bound = eb.bound;
  r.monotone = cdf_is_monotone(*cos);
  r.eps_history = {eps};
  r.cos = std::move(cos);
  return r;
}

QuantileResult quantile_with_tolerance(const CharacteristicFunctionSpec& spec, double p, double delta,
                                       const ToleranceConfig& cfg) {
  cfg.validate();
  require_probability(p);
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  require_interior(p, cfg.eps);

  ToleranceConfig current = cfg;
  std::vector<double> history;
  for (int k = 0;; ++k) {
    auto cos = std::make_shared<const CosApproximation>(build_cos(spec, current));
    QuantileResult r = quantile_on_build(std::move(cos), p);
    history.push_back(current.eps);
    r.eps_history = history;
    r.refinements = k;
    if (r.bound <= delta) return r;
    if (k == kMaxRefinements) {
      std::ostringstream msg;
      msg << "refinement budget exhausted for p = " << p << ": bound " << r.bound << " > delta " << delta
          << " at eps " << current.eps;
      throw RefinementError(msg.str(), std::move(r));
    }
    current.eps = next_eps(current.eps, r.h_min, delta);
  }
}

std::vector<BatchEntry> quantile_batch(const CharacteristicFunctionSpec& spec, const std::vector<double>& ps,
                                       double delta, const ToleranceConfig& cfg) {
  cfg.validate();
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");

  const std::size_t n = ps.size();
  std::vector<std::optional<QuantileFailure>> failures(n);
  std::vector<std::optional<QuantileResult>> results(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = ps[i];
    if (!(p > 0.0 && p < 1.0)) {
      failures[i] = QuantileFailure{p, "probability must lie in (0, 1)"};
    } else if (!(p - cfg.eps > 0.0 && p + cfg.eps < 1.0)) {
      failures[i] = QuantileFailure{p, "p is within eps of 0 or 1; use a smaller eps"};
    }
  }

  ToleranceConfig current = cfg;
  std::vector<double> history;
  for (int k = 0;; ++k) {
    auto cos = std::make_shared<const CosApproximation>(build_cos(spec, current));
    history.push_back(current.eps);
    bool all_within = true;
    double proposal = current.eps;
    for (std::size_t i = 0; i < n; ++i) {
      if (failures[i]) continue;
      QuantileResult r = quantile_on_build(cos, ps[i]);
      r.refinements = k;
      r.eps_history = history;
      const bool within = r.bound <= delta;
      if (!within) {
        all_within = false;
        proposal = std::min(proposal, next_eps(current.eps, r.h_min, delta));
      }
      // Keep an earlier certified result over an uncertified one.
      if (within || !results[i] || results[i]->bound > delta) results[i] = std::move(r);
    }
    if (all_within) break;
    if (k == kMaxRefinements) break;
    current.eps = proposal;
  }

  std::vector<BatchEntry> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (failures[i]) {
      out.emplace_back(*failures[i]);
    } else if (results[i]->bound > delta) {
      std::ostringstream msg;
      msg << "refinement budget exhausted: bound " << results[i]->bound << " > delta " << delta;
      out.emplace_back(QuantileFailure{ps[i], msg.str()});
    } else {
      out.emplace_back(std::move(*results[i]));
    }
  }
  return out;
}

}  // namespace cosq
