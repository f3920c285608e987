#include "cosq/reference_oracle.hpp"

#include "cosq/errors.hpp"
#include "cosq/inversion.hpp"
#include "cosq/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cosq {

std::string to_string(ReferenceMethod method) {
  switch (method) {
    case ReferenceMethod::GilPelaez: return "gil-pelaez";
    case ReferenceMethod::ClosedForm: return "closed-form";
    case ReferenceMethod::CosHighPrecision: return "cos-high-precision";
  }
  return "unknown";
}

namespace {

constexpr double kMaxCutoff = 1e6;
constexpr int kMaxOrder = 1024;

}  // namespace

CdfReference gil_pelaez_cdf(const CharacteristicFunctionSpec& spec, double y, double tol) {
  if (!(tol >= 1e-12)) throw std::invalid_argument("gil_pelaez_cdf: tol must be >= 1e-12");
  if (!std::isfinite(y)) throw std::invalid_argument("gil_pelaez_cdf: y must be finite");

  CdfReference out;
  out.y = y;
  out.method = ReferenceMethod::GilPelaez;
  const SupportInterval& support = spec.support();
  if (support.lower_bounded() && y <= support.lower) {
    out.value = 0.0;
    out.est_error = tol;
    return out;
  }
  if (support.upper_bounded() && y >= support.upper) {
    out.value = 1.0;
    out.est_error = tol;
    return out;
  }

  const bool positive = support.lower_bounded();
  const double shift = positive ? support.lower : 0.0;
  const double z = y - shift;
  const double mu = spec.cumulants().front();
  const double base = positive ? 0.0 : 0.5;
  const double prefactor = positive ? 2.0 / std::numbers::pi : -1.0 / std::numbers::pi;

  const auto integrand = [&](double u) -> double {
    if (u == 0.0) return positive ? z : mu - y;
    if (positive) {
      const Complex psi = spec(u) * std::exp(Complex(0.0, -u * shift));
      return psi.real() * std::sin(z * u) / u;
    }
    return (spec(u) * std::exp(Complex(0.0, -u * y))).imag() / u;
  };

  // Truncation: |integrand| <= |phi(u)| / u, and with |phi(u)| <= C e^{-c u}
  // beyond U the remainder is at most |phi(U)| / (c U). The rate is fitted on
  // [U/2, U] and halved.
  const double variance = spec.cumulants().size() > 1 ? spec.cumulants()[1] : 1.0;
  double cutoff = std::isfinite(variance) && variance > 0.0 ? 4.0 / std::sqrt(variance) : 4.0;
  double tail = 0.0;
  for (;;) {
    const double log_far = spec.log_abs(cutoff);
    const double log_near = spec.log_abs(0.5 * cutoff);
    if (log_far == -kInf) {
      tail = 0.0;
      break;
    }
    const double rate = 0.5 * (log_near - log_far) / (0.5 * cutoff);
    if (rate > 0.0) {
      tail = std::abs(prefactor) * std::exp(log_far) / (rate * cutoff);
      if (tail < 0.5 * tol) break;
    }
    cutoff *= 2.0;
    if (cutoff > kMaxCutoff) {
      throw ConvergenceError("gil_pelaez_cdf: truncation bound not reached below U = 1e6");
    }
  }

  const double max_panel = std::numbers::pi / std::max(std::abs(z), 1.0);
  const auto panels = static_cast<std::size_t>(std::ceil(cutoff / max_panel));
  const double panel = cutoff / static_cast<double>(panels);

  const auto integrate = [&](int order) {
    const auto rule = quadrature::gauss_legendre(order);
    double total = 0.0;
    for (std::size_t j = 0; j < panels; ++j) {
      const double lo = panel * static_cast<double>(j);
      const double half = 0.5 * panel;
      const double centre = lo + half;
      double acc = 0.0;
      for (int i = 0; i < order; ++i) acc += rule.weights[i] * integrand(centre + half * rule.nodes[i]);
      total += half * acc;
    }
    return total;
  };

  double previous = integrate(8);
  for (int order = 16; order <= kMaxOrder; order *= 2) {
    const double current = integrate(order);
    const double change = std::abs(prefactor) * std::abs(current - previous);
    if (change < 0.5 * tol) {
      out.value = std::clamp(base + prefactor * current, 0.0, 1.0);
      out.est_error = std::max(tail + change, 1e-15);
      return out;
    }
    previous = current;
  }
  throw ConvergenceError("gil_pelaez_cdf: quadrature did not settle under order doubling");
}

double normal_cdf(double y) { return 0.5 * std::erfc(-y / std::numbers::sqrt2); }

namespace {

// Rational approximation with relative error about 1.15e-9 (P. J. Acklam).
double normal_quantile_initial(double p) {
  static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                              -2.759285104469687e+02, 1.383577518672690e+02,
                                              -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                              -1.556989798598866e+02, 6.680131188771972e+01,
                                              -1.328068155288572e+01};
  static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                              -2.400758277161838e+00, -2.549732539343734e+00,
                                              4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must lie in (0, 1)");
  // Work in the lower half, where Phi(x) - p keeps its relative accuracy.
  if (p > 0.5) return -normal_quantile(1.0 - p);
  double x = normal_quantile_initial(p);
  for (int i = 0; i < 2; ++i) {
    const double density = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    x -= (normal_cdf(x) - p) / density;
  }
  return x;
}

std::shared_ptr<const CosApproximation> high_precision_build(const CharacteristicFunctionSpec& spec,
                                                             const HighPrecisionOptions& options) {
  ToleranceConfig cfg;
  cfg.eps = options.eps;
  cfg.terms_override = options.terms;
  const TruncationRange range = truncation_range(spec, cfg);
  return std::make_shared<const CosApproximation>(spec, range.a, range.b, options.terms, options.eps, range.ell,
                                                  true);
}

HighPrecisionReference high_precision_reference(const CosApproximation& build, double p, double gil_pelaez_tol) {
  HighPrecisionReference out;
  out.p = p;
  out.quantile = bisect_quantile(build, p, build.eps());
  out.cos_cdf = {out.quantile, build.cdf(out.quantile), ReferenceMethod::CosHighPrecision, build.eps()};
  out.gil_pelaez = gil_pelaez_cdf(build.spec(), out.quantile, gil_pelaez_tol);
  out.agrees = std::abs(out.cos_cdf.value - out.gil_pelaez.value) <= build.eps() + out.gil_pelaez.est_error;
  return out;
}

HighPrecisionReference high_precision_reference(const CharacteristicFunctionSpec& spec, double p,
                                                const HighPrecisionOptions& options) {
  const auto build = high_precision_build(spec, options);
  return high_precision_reference(*build, p, options.gil_pelaez_tol);
}

BuildValidation validate_build(const CosApproximation& cos, int points, double tol) {
  if (points < 1) throw std::invalid_argument("validate_build: need at least one point");
  // Points spread over mu +- 6 sd inside (a, b); wide builds put most of [a, b] in the far tails.
  const double sd = std::sqrt(cos.spec().cumulants()[1]);
  double lo = cos.a();
  double hi = cos.b();
  if (std::isfinite(sd) && sd > 0.0) {
    lo = std::max(lo, cos.mu() - 6.0 * sd);
    hi = std::min(hi, cos.mu() + 6.0 * sd);
  }
  BuildValidation out;
  for (int i = 1; i <= points; ++i) {
    const double y = lo + (hi - lo) * i / (points + 1);
    const double d = std::abs(cos.cdf(y) - gil_pelaez_cdf(cos.spec(), y, tol).value);
    out.points.push_back(y);
    out.discrepancies.push_back(d);
    out.max_discrepancy = std::max(out.max_discrepancy, d);
  }
  out.within_eps = out.max_discrepancy <= cos.eps();
  return out;
}

}  // namespace cosq
