#include "classtab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "classtab/special.hpp"

namespace classtab {

Domain Domain::box(Vec lo, Vec hi) {
  if (lo.size() != hi.size() || lo.size() == 0)
    throw std::invalid_argument("Domain::box: lo/hi dimension mismatch");
  for (Eigen::Index i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i]))
      throw std::invalid_argument("Domain::box: requires lo < hi componentwise");
  Domain d;
  d.kind_ = Kind::box;
  d.dim_ = static_cast<int>(lo.size());
  d.lo_ = std::move(lo);
  d.hi_ = std::move(hi);
  return d;
}

Domain Domain::ball(Vec center, double radius) {
  if (center.size() == 0) throw std::invalid_argument("Domain::ball: empty center");
  if (!(radius > 0.0)) throw std::invalid_argument("Domain::ball: radius must be > 0");
  Domain d;
  d.kind_ = Kind::ball;
  d.dim_ = static_cast<int>(center.size());
  d.center_ = std::move(center);
  d.radius_ = radius;
  return d;
}

Domain Domain::finite_set(std::vector<Vec> points) {
  if (points.empty()) throw std::invalid_argument("Domain::finite_set: needs >= 1 point");
  const Eigen::Index d0 = points.front().size();
  for (const auto& p : points)
    if (p.size() != d0)
      throw std::invalid_argument("Domain::finite_set: inconsistent dimensions");
  Domain d;
  d.kind_ = Kind::finite_set;
  d.dim_ = static_cast<int>(d0);
  d.points_ = std::move(points);
  return d;
}

double Domain::volume() const {
  switch (kind_) {
    case Kind::box:
      return (hi_ - lo_).prod();
    case Kind::ball: {
      const double n = dim_;
      return std::exp(0.5 * n * std::log(M_PI) - log_gamma(0.5 * n + 1.0) +
                      n * std::log(radius_));
    }
    case Kind::finite_set:
      // counting measure: one unit of mass per point
      return static_cast<double>(points_.size());
  }
  return 0.0;
}

bool Domain::contains(const VecCRef& x) const {
  if (x.size() != dim_) return false;
  switch (kind_) {
    case Kind::box:
      return (x.array() >= lo_.array()).all() && (x.array() <= hi_.array()).all();
    case Kind::ball:
      return (x - center_).norm() <= radius_;
    case Kind::finite_set: {
      for (const auto& p : points_)
        if ((x - p).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + p.cwiseAbs().maxCoeff()))
          return true;
      return false;
    }
  }
  return false;
}

Vec Domain::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::box: {
      Vec x(dim_);
      for (int i = 0; i < dim_; ++i) x[i] = rng.uniform(lo_[i], hi_[i]);
      return x;
    }
    case Kind::ball:
      return sample_p_ball(rng, center_, radius_, NormP(2.0));
    case Kind::finite_set:
      return points_[static_cast<std::size_t>(rng.uniform_index(points_.size()))];
  }
  return Vec();
}

double Domain::diameter(const NormP& p) const {
  switch (kind_) {
    case Kind::box:
      return p.norm(hi_ - lo_);
    case Kind::ball: {
      if (p.is_inf() || p.p() >= 2.0) return 2.0 * radius_;
      // widest p-norm chord of an L2 ball runs along the diagonal
      return 2.0 * radius_ * std::pow(dim_, 1.0 / p.p() - 0.5);
    }
    case Kind::finite_set: {
      double d = 0.0;
      for (std::size_t i = 0; i < points_.size(); ++i)
        for (std::size_t j = i + 1; j < points_.size(); ++j)
          d = std::max(d, p.distance(points_[i], points_[j]));
      return d;
    }
  }
  return 0.0;
}

double Domain::boundary_distance(const VecCRef& x, const NormP& p) const {
  switch (kind_) {
    case Kind::box: {
      // nearest exit is straight through the closest face, in every p-norm
      double d = std::numeric_limits<double>::infinity();
      for (int i = 0; i < dim_; ++i)
        d = std::min({d, x[i] - lo_[i], hi_[i] - x[i]});
      return std::max(0.0, d);
    }
    case Kind::ball: {
      if (!(p.p() == 2.0))
        throw std::invalid_argument(
            "Domain::boundary_distance: ball domains support p = 2 only");
      return std::max(0.0, radius_ - (x - center_).norm());
    }
    case Kind::finite_set:
      return 0.0;  // finite sets have no interior
  }
  return 0.0;
}

double Domain::distance_to(const VecCRef& x, const NormP& p) const {
  switch (kind_) {
    case Kind::box: {
      Vec clamped = x.cwiseMax(lo_).cwiseMin(hi_);
      return p.distance(x, clamped);
    }
    case Kind::ball: {
      if (!(p.p() == 2.0))
        throw std::invalid_argument("Domain::distance_to: ball domains support p = 2 only");
      return std::max(0.0, (x - center_).norm() - radius_);
    }
    case Kind::finite_set: {
      double d = std::numeric_limits<double>::infinity();
      for (const auto& q : points_) d = std::min(d, p.distance(x, q));
      return d;
    }
  }
  return 0.0;
}

Domain Domain::scaled(double c) const {
  if (!(c > 0.0)) throw std::invalid_argument("Domain::scaled: c must be > 0");
  switch (kind_) {
    case Kind::box:
      return box(c * lo_, c * hi_);
    case Kind::ball:
      return ball(c * center_, c * radius_);
    case Kind::finite_set: {
      std::vector<Vec> pts = points_;
      for (auto& q : pts) q *= c;
      return finite_set(std::move(pts));
    }
  }
  return *this;
}

std::pair<Vec, Vec> Domain::bounding_box(double margin) const {
  Vec lo, hi;
  switch (kind_) {
    case Kind::box:
      lo = lo_;
      hi = hi_;
      break;
    case Kind::ball:
      lo = center_.array() - radius_;
      hi = center_.array() + radius_;
      break;
    case Kind::finite_set: {
      lo = points_.front();
      hi = points_.front();
      for (const auto& q : points_) {
        lo = lo.cwiseMin(q);
        hi = hi.cwiseMax(q);
      }
      break;
    }
  }
  return {lo.array() - margin, hi.array() + margin};
}

bool Domain::subset_of(const Domain& other) const {
  if (dim_ != other.dim_) return false;
  if (kind_ == Kind::finite_set) {
    for (const auto& q : points_)
      if (!other.contains(q)) return false;
    return true;
  }
  if (other.kind_ == Kind::box) {
    auto [lo, hi] = bounding_box();
    return (lo.array() >= other.lo_.array()).all() &&
           (hi.array() <= other.hi_.array()).all();
  }
  if (other.kind_ == Kind::ball) {
    if (kind_ == Kind::ball)
      return (center_ - other.center_).norm() + radius_ <= other.radius_;
    // box in ball: every corner inside
    const auto [lo, hi] = bounding_box();
    const int d = dim_;
    for (std::uint64_t mask = 0; mask < (1ULL << d); ++mask) {
      Vec corner(d);
      for (int i = 0; i < d; ++i) corner[i] = (mask >> i) & 1 ? hi[i] : lo[i];
      if (!other.contains(corner)) return false;
    }
    return true;
  }
  return false;
}

const Vec& Domain::lo() const {
  if (kind_ != Kind::box) throw std::logic_error("Domain::lo: not a box");
  return lo_;
}
const Vec& Domain::hi() const {
  if (kind_ != Kind::box) throw std::logic_error("Domain::hi: not a box");
  return hi_;
}
const Vec& Domain::center() const {
  if (kind_ != Kind::ball) throw std::logic_error("Domain::center: not a ball");
  return center_;
}
double Domain::radius() const {
  if (kind_ != Kind::ball) throw std::logic_error("Domain::radius: not a ball");
  return radius_;
}
const std::vector<Vec>& Domain::points() const {
  if (kind_ != Kind::finite_set) throw std::logic_error("Domain::points: not a finite set");
  return points_;
}

}  // namespace classtab
