#include "cosq/cf_core.hpp"

#include "cosq/errors.hpp"
#include "cosq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace cosq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::vector<double> tempered_stable_cumulants(const TemperedStableParams& p) {
  // K(t) = c d - c (A - 2t)^kappa with A = d^{1/kappa}; the j-th derivative at 0
  // is -c kappa (kappa-1) ... (kappa-j+1) A^{kappa-j} (-2)^j.
  std::vector<double> k(kMaxCumulantOrder, kNaN);
  if (p.d == 0.0) return k;  // stable subordinator: no finite moments
  const double a = std::pow(p.d, 1.0 / p.kappa);
  double falling = 1.0;
  for (int j = 1; j <= kMaxCumulantOrder; ++j) {
    falling *= p.kappa - (j - 1);
    k[j - 1] = -p.c * falling * std::pow(a, p.kappa - j) * std::pow(-2.0, j);
  }
  return k;
}

std::vector<double> nig_cumulants(const NigParams& p) {
  // K(t) = -nu (sqrt(S(t)) - sqrt(S(0))), S(t) = gamma^2 - (theta + t)^2.
  // Taylor coefficients of sqrt(S) by the power-series square root.
  const int n = kMaxCumulantOrder;
  std::vector<double> s(n + 1, 0.0);
  s[0] = p.gamma * p.gamma - p.theta * p.theta;
  s[1] = -2.0 * p.theta;
  s[2] = -1.0;
  std::vector<double> r(n + 1, 0.0);
  r[0] = std::sqrt(s[0]);
  for (int j = 1; j <= n; ++j) {
    double acc = s[j];
    for (int i = 1; i < j; ++i) acc -= r[i] * r[j - i];
    r[j] = acc / (2.0 * r[0]);
  }
  std::vector<double> k(n);
  for (int j = 1; j <= n; ++j) k[j - 1] = -p.nu * r[j] * factorial(j);
  return k;
}

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::Normal: return "normal";
    case Family::TemperedStable: return "ts";
    case Family::NIG: return "nig";
    case Family::Custom: return "custom";
  }
  return "unknown";
}

CharacteristicFunctionSpec CharacteristicFunctionSpec::normal(double mean, double sd) {
  require(std::isfinite(mean), "normal: mean must be finite");
  require(std::isfinite(sd) && sd > 0.0, "normal: sd must be positive");
  CharacteristicFunctionSpec spec;
  spec.family_ = Family::Normal;
  spec.params_ = NormalParams{mean, sd};
  spec.support_ = {-kInf, kInf};
  spec.cumulants_.assign(kMaxCumulantOrder, 0.0);
  spec.cumulants_[0] = mean;
  spec.cumulants_[1] = sd * sd;
  spec.label_ = "N(" + std::to_string(mean) + "," + std::to_string(sd) + ")";
  if (mean == 0.0 && sd == 1.0) spec.label_ = "N(0,1)";
  return spec;
}

CharacteristicFunctionSpec CharacteristicFunctionSpec::tempered_stable(double c, double d, double kappa) {
  require(std::isfinite(c) && c > 0.0, "tempered_stable: c must be positive");
  require(std::isfinite(d) && d >= 0.0, "tempered_stable: d must be non-negative");
  require(kappa > 0.0 && kappa < 1.0, "tempered_stable: kappa must lie in (0,1)");
  CharacteristicFunctionSpec spec;
  spec.family_ = Family::TemperedStable;
  spec.params_ = TemperedStableParams{c, d, kappa};
  spec.support_ = {0.0, kInf};
  spec.cumulants_ = tempered_stable_cumulants(std::get<TemperedStableParams>(spec.params_));
  spec.label_ = "TS";
  return spec;
}

CharacteristicFunctionSpec CharacteristicFunctionSpec::nig(double gamma, double theta, double nu) {
  require(std::isfinite(gamma) && gamma > 0.0, "nig: gamma must be positive");
  require(std::isfinite(theta) && std::abs(theta) < gamma, "nig: theta must lie in (-gamma, gamma)");
  require(std::isfinite(nu) && nu > 0.0, "nig: nu must be positive");
  CharacteristicFunctionSpec spec;
  spec.family_ = Family::NIG;
  spec.params_ = NigParams{gamma, theta, nu};
  spec.support_ = {-kInf, kInf};
  spec.cumulants_ = nig_cumulants(std::get<NigParams>(spec.params_));
  spec.label_ = "NIG";
  return spec;
}

CharacteristicFunctionSpec CharacteristicFunctionSpec::custom(std::function<Complex(double)> cf,
                                                              SupportInterval support,
                                                              std::vector<double> cumulants,
                                                              std::string label) {
  require(static_cast<bool>(cf), "custom: characteristic function is empty");
  require(support.lower < support.upper, "custom: support must satisfy lower < upper");
  require(cumulants.size() >= 2, "custom: at least two cumulants are required");
  require(std::isfinite(cumulants[0]) && std::isfinite(cumulants[1]) && cumulants[1] > 0.0,
          "custom: mean must be finite and variance positive");
  const Complex at_zero = cf(0.0);
  require(std::abs(at_zero - Complex(1.0, 0.0)) <= 1e-12, "custom: phi(0) must equal 1");
  CharacteristicFunctionSpec spec;
  spec.family_ = Family::Custom;
  spec.params_ = CustomParams{std::move(cf)};
  spec.support_ = support;
  cumulants.resize(kMaxCumulantOrder, kNaN);
  spec.cumulants_ = std::move(cumulants);
  spec.label_ = std::move(label);
  return spec;
}

Complex CharacteristicFunctionSpec::operator()(double u) const {
  if (!std::isfinite(u)) throw std::invalid_argument("cf_eval: u must be finite");
  if (u == 0.0) return {1.0, 0.0};
  switch (family_) {
    case Family::Normal: {
      const auto& p = std::get<NormalParams>(params_);
      return std::exp(Complex(-0.5 * p.sd * p.sd * u * u, p.mean * u));
    }
    case Family::TemperedStable: {
      const auto& p = std::get<TemperedStableParams>(params_);
      const double a = std::pow(p.d, 1.0 / p.kappa);
      return std::exp(p.c * p.d - p.c * std::pow(Complex(a, -2.0 * u), p.kappa));
    }
    case Family::NIG: {
      const auto& p = std::get<NigParams>(params_);
      const Complex w(p.theta, u);
      const Complex root = std::sqrt(p.gamma * p.gamma - w * w);
      return std::exp(-p.nu * (root - std::sqrt(p.gamma * p.gamma - p.theta * p.theta)));
    }
    case Family::Custom:
      return std::get<CustomParams>(params_).cf(u);
  }
  return {kNaN, kNaN};
}

double CharacteristicFunctionSpec::log_abs(double u) const {
  if (!std::isfinite(u)) throw std::invalid_argument("cf_eval: u must be finite");
  switch (family_) {
    case Family::Normal: {
      const auto& p = std::get<NormalParams>(params_);
      return -0.5 * p.sd * p.sd * u * u;
    }
    case Family::TemperedStable: {
      const auto& p = std::get<TemperedStableParams>(params_);
      const double a = std::pow(p.d, 1.0 / p.kappa);
      return p.c * p.d - p.c * std::pow(Complex(a, -2.0 * u), p.kappa).real();
    }
    case Family::NIG: {
      const auto& p = std::get<NigParams>(params_);
      const Complex w(p.theta, u);
      const Complex root = std::sqrt(p.gamma * p.gamma - w * w);
      return -p.nu * (root.real() - std::sqrt(p.gamma * p.gamma - p.theta * p.theta));
    }
    case Family::Custom:
      return std::log(std::abs(std::get<CustomParams>(params_).cf(u)));
  }
  return kNaN;
}

Complex cf_eval(const CharacteristicFunctionSpec& spec, double u) { return spec(u); }

double mean(const CharacteristicFunctionSpec& spec) { return spec.cumulants().front(); }

std::vector<double> central_moments_from_cumulants(const std::vector<double>& cumulants, int n) {
  std::vector<double> m(n + 1, 0.0);
  m[0] = 1.0;
  for (int k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (int j = 2; j <= k; ++j) acc += binomial(k - 1, j - 1) * cumulants[j - 1] * m[k - j];
    m[k] = acc;
  }
  return m;
}

double central_moment(const CharacteristicFunctionSpec& spec, int n) {
  if (n < 2 || n > kMaxCumulantOrder || n % 2 != 0) {
    throw std::invalid_argument("central_moment: order must be even and in [2, " +
                                std::to_string(kMaxCumulantOrder) + "]");
  }
  const auto& k = spec.cumulants();
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(k[j])) {
      throw std::domain_error("central_moment: cumulant of order " + std::to_string(j + 1) +
                              " is not available for " + spec.label());
    }
  }
  return central_moments_from_cumulants(k, n)[n];
}

MomentReport moment_report(const CharacteristicFunctionSpec& spec, int n) {
  MomentReport report;
  report.mean = mean(spec);
  for (int k = 2; k <= n; k += 2) report.central_moments[k] = central_moment(spec, k);
  return report;
}

double skewness(const CharacteristicFunctionSpec& spec) {
  const auto& k = spec.cumulants();
  return k[2] / std::pow(k[1], 1.5);
}

double kurtosis(const CharacteristicFunctionSpec& spec) {
  const auto& k = spec.cumulants();
  return k[3] / (k[1] * k[1]) + 3.0;
}

namespace {

double log_sum_exp(const std::vector<double>& terms) {
  const double top = *std::max_element(terms.begin(), terms.end());
  if (!std::isfinite(top)) return top;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - top);
  return top + std::log(acc);
}

TailIntegral laguerre_tail_integral(const CharacteristicFunctionSpec& spec, int s) {
  const auto log_integrand = [&](double u) { return (s + 1) * std::log(u) + spec.log_abs(u); };

  // Rescale so that the integrand peaks where the Laguerre weight does.
  double peak_u = 0.0;
  double peak = -kInf;
  constexpr int kScan = 600;
  const double lo = std::log(1e-4);
  const double hi = std::log(1e7);
  int peak_index = -1;
  for (int i = 0; i <= kScan; ++i) {
    const double u = std::exp(lo + (hi - lo) * i / kScan);
    const double v = log_integrand(u);
    if (std::isfinite(v) && v > peak) {
      peak = v;
      peak_u = u;
      peak_index = i;
    }
  }
  if (peak_index < 0 || peak_index == kScan) {
    throw ConvergenceError("abs_cf_tail_integral: |phi| does not decay fast enough for s = " +
                           std::to_string(s));
  }
  const double scale = peak_u / (s + 1);

  double previous = kNaN;
  for (int n = 16; n <= 256; n *= 2) {
    const auto rule = quadrature::gauss_laguerre_log_scaled(n);
    std::vector<double> terms(n);
    for (int i = 0; i < n; ++i) {
      terms[i] = rule.weights[i] + std::log(scale) + log_integrand(scale * rule.nodes[i]);
    }
    const double current = log_sum_exp(terms);
    if (std::isfinite(previous) && std::abs(std::expm1(current - previous)) <= 1e-6) {
      TailIntegral out;
      out.log_value = current - std::log(std::numbers::pi);
      out.value = std::exp(out.log_value);
      out.nodes = n;
      return out;
    }
    previous = current;
  }
  throw ConvergenceError("abs_cf_tail_integral: Gauss-Laguerre estimate unstable under node doubling");
}

}  // namespace

TailIntegral abs_cf_tail_integral(const CharacteristicFunctionSpec& spec, int s, TailIntegralMethod method) {
  if (s < 1 || s % 2 == 0) throw std::invalid_argument("abs_cf_tail_integral: s must be odd and positive");
  const double log_pi = std::log(std::numbers::pi);
  if (method == TailIntegralMethod::Auto) {
    if (spec.family() == Family::Normal) {
      // int_0^inf u^{s+1} e^{-sd^2 u^2 / 2} du = 2^{s/2} Gamma(s/2 + 1) / sd^{s+2}
      const double sd = spec.params<NormalParams>().sd;
      TailIntegral out;
      out.log_value = 0.5 * s * std::log(2.0) + std::lgamma(0.5 * s + 1.0) - (s + 2) * std::log(sd) - log_pi;
      out.value = std::exp(out.log_value);
      out.closed_form = true;
      return out;
    }
    if (spec.family() == Family::NIG && spec.params<NigParams>().theta == 0.0) {
      // |phi(u)| = e^{nu gamma} e^{-nu sqrt(gamma^2 + u^2)} and, with k = (s+1)/2,
      // int_0^inf u^{2k} e^{-nu sqrt(gamma^2+u^2)} du
      //   = Gamma(k + 1/2) / sqrt(pi) (2 gamma / nu)^k gamma K_{k+1}(nu gamma).
      const auto& p = spec.params<NigParams>();
      const int k = (s + 1) / 2;
      const double bessel = std::cyl_bessel_k(static_cast<double>(k + 1), p.nu * p.gamma);
      if (std::isfinite(bessel) && bessel > 0.0) {
        TailIntegral out;
        out.log_value = std::lgamma(k + 0.5) - 0.5 * log_pi + k * std::log(2.0 * p.gamma / p.nu) +
                        std::log(p.gamma) + std::log(bessel) + p.nu * p.gamma - log_pi;
        out.value = std::exp(out.log_value);
        out.closed_form = true;
        return out;
      }
    }
  }
  return laguerre_tail_integral(spec, s);
}

}  // namespace cosq
