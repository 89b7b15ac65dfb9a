#pragma once

#include <utility>
#include <vector>

#include "classtab/norms.hpp"
#include "classtab/rng.hpp"
#include "classtab/types.hpp"

namespace classtab {

/// Integration region: an axis-aligned box, an L2 ball, or a finite
/// point set. Provides the uniform sampler and the volume used by the
/// stability integrals (finite sets carry counting measure).
class Domain {
 public:
  enum class Kind { box, ball, finite_set };

  /// Placeholder (dim 0); assign a real region before use.
  Domain() = default;

  static Domain box(Vec lo, Vec hi);
  static Domain ball(Vec center, double radius);
  static Domain finite_set(std::vector<Vec> points);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }

  double volume() const;
  bool contains(const VecCRef& x) const;
  Vec sample(Rng& rng) const;

  /// Diameter of the region in the given norm.
  double diameter(const NormP& p) const;

  /// Distance from an interior point to the complement of the region.
  /// Exact for boxes in every p-norm; balls support p = 2 only.
  double boundary_distance(const VecCRef& x, const NormP& p) const;

  /// Distance from any point to the region (0 inside).
  double distance_to(const VecCRef& x, const NormP& p) const;

  /// The region scaled about the origin by c > 0.
  Domain scaled(double c) const;

  /// Axis-aligned bounding box, inflated by `margin` on every side.
  std::pair<Vec, Vec> bounding_box(double margin = 0.0) const;

  /// Conservative containment test against another region.
  bool subset_of(const Domain& other) const;

  // box accessors
  const Vec& lo() const;
  const Vec& hi() const;
  // ball accessors
  const Vec& center() const;
  double radius() const;
  // finite set accessor
  const std::vector<Vec>& points() const;

 private:
  Kind kind_ = Kind::box;
  int dim_ = 0;
  Vec lo_, hi_;              // box
  Vec center_;               // ball
  double radius_ = 0.0;      // ball
  std::vector<Vec> points_;  // finite set
};

}  // namespace classtab
