#pragma once

#include <vector>

namespace cosq::quadrature {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
Rule gauss_legendre(int n);

/// n-point Gauss-Laguerre rule for int_0^inf e^{-x} g(x) dx.
/// `weights` holds log(w_i) + x_i, i.e. the log of the weight applied to
/// g(x_i) e^{x_i}, so that large nodes neither overflow nor underflow.
Rule gauss_laguerre_log_scaled(int n);

}  // namespace cosq::quadrature
