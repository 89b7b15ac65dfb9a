// Test-only reference implementations, independent of the library's
// estimator paths.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "classtab/norms.hpp"
#include "classtab/types.hpp"

namespace oracles {

using classtab::Label;
using classtab::Mat;
using classtab::NormP;
using classtab::Vec;

/// Linear-scan nearest neighbour among differently labelled points.
inline double brute_force_nn(const Mat& points, const std::vector<Label>& labels,
                             const Vec& x, Label own, const NormP& p) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (labels[static_cast<std::size_t>(i)] == own) continue;
    best = std::min(best, p.distance(x, points.row(i).transpose()));
  }
  return best;
}

/// Composite Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int n) {
  if (n % 2 != 0) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Distance from x in [-1,1] to the nearest differently labelled point of
/// the step-with-isolated-flips field, by direct case analysis of the
/// flip set {0} and the isolated points at +-1/2.
inline double f2_distance(double x) {
  if (x == 0.5 || x == -0.5 || x == 0.0) return 0.0;
  if (x > 0.0) return std::min(x, std::abs(x - 0.5));
  return std::min(-x, std::abs(x + 0.5));
}

/// Closed-form integral of f2_distance over [-1,1] by piecewise
/// integration: 2 * (int_0^0.25 x + int_0.25^0.5 (0.5-x) + int_0.5^1 (x-0.5)).
inline double f2_stability_closed_form() {
  return 2.0 * (0.03125 + 0.03125 + 0.125);
}

/// log Gamma at integer or half-integer arguments via the recurrences
/// lgamma(z+1) = log z + lgamma(z), lgamma(1/2) = log sqrt(pi).
inline double lgamma_half_integer(double z) {
  const bool half = std::abs(z - std::floor(z) - 0.5) < 1e-15;
  double acc = 0.0;
  double w = z;
  while (w > 1.0 + 1e-15) {
    w -= 1.0;
    acc += std::log(w);
  }
  if (half) return acc + 0.5 * std::log(M_PI);  // down at 1/2: shifted to 0.5+1
  return acc;                                   // down at 1: lgamma(1) = 0
}

}  // namespace oracles
