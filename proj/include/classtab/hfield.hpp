#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "classtab/distance.hpp"
#include "classtab/label_field.hpp"

namespace classtab {

/// First index attaining the maximum of v (1-based). Throws on empty v.
int class_prediction(const VecCRef& v);

/// The vector field H: coordinate slot_of(f(x)) carries h(x), all other
/// coordinates are zero. Slots order the extended label set ascending,
/// so -1 always occupies slot 1. H is 1-Lipschitz and its argmax
/// recovers the label wherever h > 0.
class HField {
 public:
  HField(ExtendedField field, NormP p, BoundaryMode boundary_mode,
         DistanceOptions opts = {});

  int q() const { return static_cast<int>(slots_.size()); }
  const std::vector<Label>& slot_labels() const { return slots_; }
  int slot_of(Label y) const;         // 1-based
  Label label_of(int slot) const;     // 1-based

  Vec operator()(const VecCRef& x) const;
  DistanceEstimate h(const VecCRef& x) const;
  const ExtendedField& field() const { return field_; }
  const NormP& p() const { return p_; }
  BoundaryMode boundary_mode() const { return bmode_; }

 private:
  ExtendedField field_;
  NormP p_;
  BoundaryMode bmode_;
  DistanceOptions opts_;
  std::vector<Label> slots_;
};

/// One-shot evaluation of the H vector.
Vec h_field(const ExtendedField& field, const VecCRef& x, const NormP& p,
            BoundaryMode boundary_mode = BoundaryMode::extension);

struct LipschitzWitness {
  double max_ratio = 0.0;
  Vec x, y;
  std::int64_t pairs_used = 0;
};

/// Empirical Lipschitz ratio of H over sampled pairs. Interior mode
/// samples inside the domain, extension mode from an inflated box.
LipschitzWitness lipschitz_check_H(const ExtendedField& field, const NormP& p,
                                   std::int64_t pair_count, std::uint64_t seed,
                                   BoundaryMode boundary_mode = BoundaryMode::interior,
                                   const DistanceOptions& opts = {});

/// The eps-stable set: grid points of M with h > eps (conservatively,
/// h - error_bound > eps).
struct StableSet {
  double epsilon = 0.0;
  Mat members;             // one row per member
  bool empty_warning = false;
  std::string provenance;
};

StableSet stable_set(const ExtendedField& field, double epsilon, const NormP& p,
                     BoundaryMode boundary_mode, const std::vector<int>& grid_cells,
                     const DistanceOptions& opts = {});

/// Hat function centred at integer i: 0 outside (i-1, i+1), rising to 1
/// at i, linear on both sides.
double omega(int i, double x);

/// G(x) = (omega_1(g(x)), ..., omega_q(g(x))): rounds a scalar field to a
/// one-hot-like vector whose argmax recovers integer labels.
Vec compose_G(const std::function<double(const VecCRef&)>& g, int q, const VecCRef& x);

/// Lower bound on the Lipschitz constant of the field's label values,
/// from uniform random pairs plus nearest-different-label pairs.
double empirical_lipschitz(const ExtendedField& field, std::int64_t pair_count,
                           const NormP& p, std::uint64_t seed);

/// Same for an arbitrary scalar function over a region.
double empirical_lipschitz(const std::function<double(const VecCRef&)>& fn,
                           const Domain& region, std::int64_t pair_count,
                           const NormP& p, std::uint64_t seed);

}  // namespace classtab
