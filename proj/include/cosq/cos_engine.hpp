#pragma once

#include "cosq/cf_core.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace cosq {

struct ToleranceConfig {
  double eps = 0.005;    // sup-norm tolerance on the CDF
  double delta = 0.1;    // tolerance on the quantile
  int moment_order = 8;  // even n used for the truncation range
  int smoothness = 39;   // odd s used for the term count
  std::optional<std::size_t> terms_override;

  /// Throws std::invalid_argument unless 0 < eps < 1/2, delta > 0,
  /// moment_order is even and >= 2, smoothness is odd and >= 1.
  void validate() const;
};

struct TruncationRange {
  double a = 0.0;
  double b = 0.0;
  double ell = 0.0;  // half-width before clamping to the support

  double width() const { return b - a; }
};

/// mu -/+ (2 E[(X-mu)^n] / eps)^{1/n}, clamped to the support.
/// Throws DegenerateRangeError if the clamped interval is empty.
TruncationRange truncation_range(const CharacteristicFunctionSpec& spec, const ToleranceConfig& cfg);

struct TermCount {
  std::size_t terms = 0;
  bool overridden = false;   // cfg.terms_override was used, formula bypassed
  double bound = 0.0;        // un-rounded value of the formula (0 when overridden)
};

/// Number of cosine terms for half-width `half_width` of the truncation range.
/// The bound is evaluated in log form; 2^{s+5/2} L^{s+2} overflows for s = 39
/// on wide ranges otherwise.
TermCount choose_terms(const CharacteristicFunctionSpec& spec, const ToleranceConfig& cfg, double half_width);

/// Immutable Fourier-cosine expansion of a density on [a, b].
class CosApproximation {
 public:
  /// Expansion with N = terms on the given interval. Coefficients are
  /// c_k = 2/(b-a) Re{phi(k pi/(b-a)) exp(-i k a pi/(b-a))}, k = 0..N,
  /// each from an independent CF evaluation.
  CosApproximation(const CharacteristicFunctionSpec& spec, double a, double b, std::size_t terms,
                   double eps = 0.0, double ell = 0.0, bool terms_overridden = false);

  double a() const { return a_; }
  double b() const { return b_; }
  double width() const { return b_ - a_; }
  std::size_t terms() const { return coeffs_.size() - 1; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  double mu() const { return mu_; }
  double ell() const { return ell_; }
  double eps() const { return eps_; }
  bool terms_overridden() const { return terms_overridden_; }
  const CharacteristicFunctionSpec& spec() const { return spec_; }

  /// h_COS(x); zero outside [a, b]. Not clipped, so it may be slightly
  /// negative where the truncated series oscillates.
  double density(double x) const;

  /// H_COS(y): 0 for y <= a, 1 for y >= b.
  double cdf(double y) const;

 private:
  CharacteristicFunctionSpec spec_;
  double a_;
  double b_;
  double mu_;
  double ell_;
  double eps_;
  bool terms_overridden_;
  std::vector<double> coeffs_;
  std::vector<double> sine_weights_;  // c_k (b-a) / (k pi), index 0 unused
};

/// Truncation range, term count and coefficients for `cfg`.
CosApproximation build_cos(const CharacteristicFunctionSpec& spec, const ToleranceConfig& cfg);

double density_eval(const CosApproximation& cos, double x);
double cdf_eval(const CosApproximation& cos, double y);

}  // namespace cosq
