#include "cosq/cos_engine.hpp"

#include "cosq/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cosq {

namespace {

// Terms per exact re-anchor of (cos k theta, sin k theta).
constexpr std::size_t kBlock = 128;
// Independent rotation chains per block; each advances by kChains * theta.
constexpr std::size_t kChains = 8;

// sum_{k=1}^{N} w_k f(k theta) with f = cos or sin.
//
// Each block of kBlock terms is anchored with std::cos / std::sin and then
// advanced by complex rotation on kChains interleaved chains, which keeps the
// phase error within a few dozen ulps and breaks the serial dependency of a
// single rotation.
template <bool kSine>
double trig_series(const std::vector<double>& w, double theta) {
  const std::size_t n = w.size();  // w[0] unused
  std::array<double, kChains + 1> rc{};
  std::array<double, kChains + 1> rs{};
  for (std::size_t j = 0; j <= kChains; ++j) {
    rc[j] = std::cos(static_cast<double>(j) * theta);
    rs[j] = std::sin(static_cast<double>(j) * theta);
  }
  const double step_c = rc[kChains];
  const double step_s = rs[kChains];

  std::array<double, kChains> acc{};
  for (std::size_t k0 = 1; k0 < n; k0 += kBlock) {
    const double angle = static_cast<double>(k0) * theta;
    const double c0 = std::cos(angle);
    const double s0 = std::sin(angle);
    std::array<double, kChains> c{};
    std::array<double, kChains> s{};
    for (std::size_t j = 0; j < kChains; ++j) {
      c[j] = c0 * rc[j] - s0 * rs[j];
      s[j] = s0 * rc[j] + c0 * rs[j];
    }
    const std::size_t end = std::min(n, k0 + kBlock);
    std::size_t k = k0;
    for (; k + kChains <= end; k += kChains) {
      for (std::size_t j = 0; j < kChains; ++j) {
        acc[j] += w[k + j] * (kSine ? s[j] : c[j]);
        const double next_c = c[j] * step_c - s[j] * step_s;
        s[j] = s[j] * step_c + c[j] * step_s;
        c[j] = next_c;
      }
    }
    for (std::size_t j = 0; k < end; ++k, ++j) acc[j] += w[k] * (kSine ? s[j] : c[j]);
  }
  double total = 0.0;
  for (double a : acc) total += a;
  return total;
}

}  // namespace

void ToleranceConfig::validate() const {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("eps must lie in (0, 1/2)");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (moment_order < 2 || moment_order % 2 != 0) throw std::invalid_argument("moment order n must be even and >= 2");
  if (smoothness < 1 || smoothness % 2 == 0) throw std::invalid_argument("smoothness s must be odd and >= 1");
  if (terms_override && *terms_override == 0) throw std::invalid_argument("N override must be positive");
}

TruncationRange truncation_range(const CharacteristicFunctionSpec& spec, const ToleranceConfig& cfg) {
  cfg.validate();
  const double mu = mean(spec);
  const double moment = central_moment(spec, cfg.moment_order);
  TruncationRange range;
  range.ell = std::pow(2.0 * moment / cfg.eps, 1.0 / cfg.moment_order);
  range.a = std::max(mu - range.ell, spec.support().lower);
  range.b = std::min(mu + range.ell, spec.support().upper);
  if (!(range.a < range.b)) {
    throw DegenerateRangeError("truncation range collapsed: eps = " + std::to_string(cfg.eps) +
                               " is too large for the scale of " + spec.label());
  }
  return range;
}

TermCount choose_terms(const CharacteristicFunctionSpec& spec, const ToleranceConfig& cfg, double half_width) {
  cfg.validate();
  if (cfg.terms_override) return {*cfg.terms_override, true, 0.0};
  if (!(half_width > 0.0)) throw std::invalid_argument("choose_terms: half-width must be positive");
  const int s = cfg.smoothness;
  const double log_integral = abs_cf_tail_integral(spec, s).log_value;
  const double log_pi = std::log(std::numbers::pi);
  // N >= (I)^{1/s} (2^{s+5/2} L^{s+2} 12 / (s pi^{s+1} eps))^{1/s}
  const double log_rhs = (s + 2.5) * std::log(2.0) + (s + 2) * std::log(half_width) + std::log(12.0) -
                         std::log(static_cast<double>(s)) - (s + 1) * log_pi - std::log(cfg.eps);
  const double bound = std::exp((log_integral + log_rhs) / s);
  if (!std::isfinite(bound)) throw ConvergenceError("choose_terms: term-count bound is not finite");
  TermCount out;
  out.bound = bound;
  out.terms = static_cast<std::size_t>(std::max(1.0, std::ceil(bound)));
  return out;
}

CosApproximation::CosApproximation(const CharacteristicFunctionSpec& spec, double a, double b, std::size_t terms,
                                   double eps, double ell, bool terms_overridden)
    : spec_(spec), a_(a), b_(b), mu_(mean(spec)), ell_(ell), eps_(eps), terms_overridden_(terms_overridden) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("CosApproximation: need finite a < b");
  }
  if (terms == 0) throw std::invalid_argument("CosApproximation: N must be positive");
  const double width = b - a;
  coeffs_.resize(terms + 1);
  sine_weights_.assign(terms + 1, 0.0);
  for (std::size_t k = 0; k <= terms; ++k) {
    const double u = static_cast<double>(k) * std::numbers::pi / width;
    const Complex shifted = spec(u) * std::exp(Complex(0.0, -u * a));
    coeffs_[k] = 2.0 / width * shifted.real();
  }
  for (std::size_t k = 1; k <= terms; ++k) {
    sine_weights_[k] = coeffs_[k] * width / (static_cast<double>(k) * std::numbers::pi);
  }
}

double CosApproximation::density(double x) const {
  if (x < a_ || x > b_) return 0.0;
  const double theta = std::numbers::pi * (x - a_) / (b_ - a_);
  return 0.5 * coeffs_[0] + trig_series<false>(coeffs_, theta);
}

double CosApproximation::cdf(double y) const {
  if (y <= a_) return 0.0;
  if (y >= b_) return 1.0;
  const double theta = std::numbers::pi * (y - a_) / (b_ - a_);
  return 0.5 * coeffs_[0] * (y - a_) + trig_series<true>(sine_weights_, theta);
}

CosApproximation build_cos(const CharacteristicFunctionSpec& spec, const ToleranceConfig& cfg) {
  const TruncationRange range = truncation_range(spec, cfg);
  const TermCount n = choose_terms(spec, cfg, 0.5 * range.width());
  return CosApproximation(spec, range.a, range.b, n.terms, cfg.eps, range.ell, n.overridden);
}

double density_eval(const CosApproximation& cos, double x) { return cos.density(x); }
double cdf_eval(const CosApproximation& cos, double y) { return cos.cdf(y); }

}  // namespace cosq
