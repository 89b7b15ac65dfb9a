#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "classtab/types.hpp"

namespace classtab {

/// An L^p norm with 1 <= p <= infinity. p = infinity selects the
/// max-coordinate norm.
class NormP {
 public:
  explicit NormP(double p) : p_(p) {
    if (!(p >= 1.0)) throw std::invalid_argument("NormP: p must satisfy p >= 1");
  }

  static NormP inf() { return NormP(std::numeric_limits<double>::infinity()); }

  double p() const { return p_; }
  bool is_inf() const { return std::isinf(p_); }

  double norm(const VecCRef& v) const {
    if (is_inf()) return v.cwiseAbs().maxCoeff();
    if (p_ == 1.0) return v.cwiseAbs().sum();
    if (p_ == 2.0) return v.norm();
    return std::pow(v.cwiseAbs().array().pow(p_).sum(), 1.0 / p_);
  }

  double distance(const VecCRef& x, const VecCRef& y) const {
    return norm(x - y);
  }

 private:
  double p_;
};

}  // namespace classtab
