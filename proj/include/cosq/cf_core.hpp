#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace cosq {

using Complex = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Number of cumulants carried by every spec.
inline constexpr int kMaxCumulantOrder = 12;

/// Open interval (lower, upper) on which the density is positive.
/// Endpoints may be infinite.
struct SupportInterval {
  double lower = -kInf;
  double upper = kInf;

  bool lower_bounded() const { return lower > -kInf; }
  bool upper_bounded() const { return upper < kInf; }
};

enum class Family { Normal, TemperedStable, NIG, Custom };

std::string to_string(Family family);

struct NormalParams {
  double mean = 0.0;
  double sd = 1.0;
};

/// CF u -> exp(c d - c (d^{1/kappa} - 2iu)^kappa), support (0, inf).
struct TemperedStableParams {
  double c = 1.0;
  double d = 1.0;
  double kappa = 0.75;
};

/// CF u -> exp(-nu (sqrt(gamma^2 - (theta + iu)^2) - sqrt(gamma^2 - theta^2))).
struct NigParams {
  double gamma = 1.0;
  double theta = 0.0;
  double nu = 1.0;
};

struct CustomParams {
  std::function<Complex(double)> cf;
};

/// Analytic characteristic function of a real random variable together with
/// its support and its first kMaxCumulantOrder cumulants.
///
/// Instances are immutable; construct them through the named factories,
/// which validate parameters and throw std::invalid_argument on violation.
class CharacteristicFunctionSpec {
 public:
  static CharacteristicFunctionSpec normal(double mean, double sd);
  static CharacteristicFunctionSpec tempered_stable(double c, double d, double kappa);
  static CharacteristicFunctionSpec nig(double gamma, double theta, double nu);

  /// User-supplied CF. `cumulants` holds kappa_1, kappa_2, ... (at least two
  /// entries); missing higher orders are treated as unavailable.
  static CharacteristicFunctionSpec custom(std::function<Complex(double)> cf,
                                           SupportInterval support,
                                           std::vector<double> cumulants,
                                           std::string label = "custom");

  Family family() const { return family_; }
  const SupportInterval& support() const { return support_; }
  const std::string& label() const { return label_; }

  /// kappa_1 .. kappa_n (index 0 holds kappa_1). Non-finite entries mark
  /// cumulants that do not exist.
  const std::vector<double>& cumulants() const { return cumulants_; }

  template <class T>
  const T& params() const {
    return std::get<T>(params_);
  }

  /// phi(u). Throws std::invalid_argument for non-finite u.
  Complex operator()(double u) const;

  /// log|phi(u)| without forming phi, so that deep tails do not underflow.
  double log_abs(double u) const;

 private:
  CharacteristicFunctionSpec() = default;

  Family family_ = Family::Custom;
  std::variant<NormalParams, TemperedStableParams, NigParams, CustomParams> params_;
  SupportInterval support_;
  std::vector<double> cumulants_;
  std::string label_;
};

Complex cf_eval(const CharacteristicFunctionSpec& spec, double u);

/// First cumulant.
double mean(const CharacteristicFunctionSpec& spec);

/// E[(X - mu)^n] for even n in [2, kMaxCumulantOrder], from the cumulants.
double central_moment(const CharacteristicFunctionSpec& spec, int n);

/// Central moments of orders 0..n from cumulants kappa_2..kappa_n with the
/// first cumulant taken as zero: m_k = sum_j C(k-1, j-1) kappa_j m_{k-j}.
std::vector<double> central_moments_from_cumulants(const std::vector<double>& cumulants, int n);

enum class MomentMethod { AnalyticCumulant, FiniteDifference };

struct MomentReport {
  double mean = 0.0;
  std::map<int, double> central_moments;  // even orders 2..n
  MomentMethod method = MomentMethod::AnalyticCumulant;

  double variance() const { return central_moments.at(2); }
};

MomentReport moment_report(const CharacteristicFunctionSpec& spec, int n);

/// Standardised third and fourth moments.
double skewness(const CharacteristicFunctionSpec& spec);
double kurtosis(const CharacteristicFunctionSpec& spec);

enum class TailIntegralMethod {
  Auto,          // closed form when one exists, Gauss-Laguerre otherwise
  GaussLaguerre  // always use quadrature
};

struct TailIntegral {
  double log_value = 0.0;  // log of the integral, finite even where value overflows
  double value = 0.0;
  bool closed_form = false;
  int nodes = 0;  // quadrature nodes of the accepted estimate, 0 for closed form
};

/// (1/pi) * int_0^inf u^{s+1} |phi(u)| du for odd s >= 1.
/// Throws ConvergenceError if Gauss-Laguerre fails the node-doubling check.
TailIntegral abs_cf_tail_integral(const CharacteristicFunctionSpec& spec, int s,
                                  TailIntegralMethod method = TailIntegralMethod::Auto);

}  // namespace cosq
