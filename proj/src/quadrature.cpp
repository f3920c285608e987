#include "cosq/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cosq::quadrature {

Rule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

namespace {

// log|L_m(x)| and sign via the three-term recurrence with rescaling.
double log_abs_laguerre(int m, double x) {
  double p0 = 1.0;
  double p1 = 1.0 - x;
  double log_scale = 0.0;
  if (m == 0) return 0.0;
  for (int k = 1; k < m; ++k) {
    const double p2 = ((2.0 * k + 1.0 - x) * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
    const double mag = std::abs(p1);
    if (mag > 1e150) {
      p0 /= mag;
      p1 /= mag;
      log_scale += std::log(mag);
    }
  }
  return log_scale + std::log(std::abs(p1));
}

}  // namespace

Rule gauss_laguerre_log_scaled(int n) {
  if (n < 1) throw std::invalid_argument("gauss_laguerre: n must be positive");
  // Golub-Welsch: Jacobi matrix with diagonal 2k+1 and off-diagonal k.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 1);
  for (int k = 0; k < n; ++k) diag[k] = 2.0 * k + 1.0;
  for (int k = 1; k < n; ++k) sub[k - 1] = k;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  if (n > 1) {
    solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
  }
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = n > 1 ? solver.eigenvalues()[i] : 1.0;
    // w_i = x_i / ((n+1)^2 L_{n+1}(x_i)^2)
    const double log_w = std::log(x) - 2.0 * std::log(n + 1.0) - 2.0 * log_abs_laguerre(n + 1, x);
    rule.nodes[i] = x;
    rule.weights[i] = log_w + x;
  }
  return rule;
}

}  // namespace cosq::quadrature
