#pragma once

#include <cmath>
#include <functional>

#include "somnograph/error.hpp"
#include "somnograph/tensor.hpp"

namespace somnograph {

// Central-difference gradient of a scalar field: (f(x+h e_i) - f(x-h e_i)) / 2h.
// f must be pure; the probe points are restored before returning.
inline Tensor finite_diff_grad(const std::function<double(const Tensor&)>& f, Tensor x,
                               double h) {
  if (h <= 0.0) throw ArgumentError("finite_diff_grad: h must be positive");
  Tensor grad(x.shape());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double fp = f(x);
    x[i] = saved - h;
    const double fm = f(x);
    x[i] = saved;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw NumericError("finite_diff_grad: non-finite function value at coordinate " +
                         std::to_string(i));
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

// Largest coordinate-wise relative error between two gradients. Coordinates
// where both magnitudes fall below floor compare as equal.
inline double max_relative_error(const Tensor& a, const Tensor& b, double floor = 1e-7) {
  if (!a.same_shape(b)) throw ArgumentError("max_relative_error: shape mismatch");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double denom = std::max({std::abs(a[i]), std::abs(b[i]), floor});
    worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
  }
  return worst;
}

}  // namespace somnograph
