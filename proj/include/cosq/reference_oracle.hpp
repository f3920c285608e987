#pragma once

#include "cosq/cf_core.hpp"
#include "cosq/cos_engine.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace cosq {

enum class ReferenceMethod { GilPelaez, ClosedForm, CosHighPrecision };

std::string to_string(ReferenceMethod method);

struct CdfReference {
  double y = 0.0;
  double value = 0.0;
  ReferenceMethod method = ReferenceMethod::GilPelaez;
  double est_error = 0.0;
};

/// F(y) by Gil-Pelaez inversion.
///
/// Full support: F(y) = 1/2 - (1/pi) int_0^inf Im{phi(u) e^{-iuy}} / u du.
/// Support bounded below by alpha: F(y) = (2/pi) int_0^inf Re{psi(u)} sin((y-alpha)u) / u du
/// with psi the CF of X - alpha, and F(y) = 0 for y <= alpha.
///
/// The integral is truncated at U, doubled until an exponential tail bound
/// fitted to |phi| on [U/2, U] drops below tol/2, and integrated with
/// panel-wise Gauss-Legendre (one oscillation per panel), doubling the order
/// until successive estimates differ by less than tol/2.
/// Throws ConvergenceError if U would exceed 1e6 or the order exceeds 1024.
CdfReference gil_pelaez_cdf(const CharacteristicFunctionSpec& spec, double y, double tol = 1e-12);

/// Standard normal CDF, 0.5 erfc(-y / sqrt 2).
double normal_cdf(double y);

/// Standard normal quantile: rational approximation polished by two
/// Newton steps on normal_cdf. Throws std::invalid_argument outside (0, 1).
double normal_quantile(double p);

struct HighPrecisionOptions {
  double eps = 1e-9;
  std::size_t terms = 100000;  // 10'000'000 for the full reference setting
  double gil_pelaez_tol = 1e-12;
};

/// High-accuracy COS build used as the reference CDF (range for eps, N fixed).
std::shared_ptr<const CosApproximation> high_precision_build(const CharacteristicFunctionSpec& spec,
                                                             const HighPrecisionOptions& options = {});

struct HighPrecisionReference {
  double p = 0.0;
  double quantile = 0.0;
  CdfReference cos_cdf;         // COS value at the quantile
  CdfReference gil_pelaez;      // independent value at the quantile
  bool agrees = true;           // |cos - gil_pelaez| within the combined tolerance
};

/// Reference quantile by bisection at options.eps on the high-precision
/// build, with the CDF at that point cross-checked by Gil-Pelaez.
HighPrecisionReference high_precision_reference(const CharacteristicFunctionSpec& spec, double p,
                                                const HighPrecisionOptions& options = {});

/// Same, reusing an existing high-precision build.
HighPrecisionReference high_precision_reference(const CosApproximation& build, double p,
                                                double gil_pelaez_tol = 1e-12);

struct BuildValidation {
  std::vector<double> points;
  std::vector<double> discrepancies;
  double max_discrepancy = 0.0;
  bool within_eps = true;
};

/// Post-hoc check of the sup-norm hypothesis: |H_COS - F_GilPelaez| at
/// `points` equispaced interior points of [a, b], compared with the build's eps.
BuildValidation validate_build(const CosApproximation& cos, int points = 11, double tol = 1e-12);

}  // namespace cosq
