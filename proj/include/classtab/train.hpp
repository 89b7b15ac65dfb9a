#pragma once

#include <cstdint>
#include <memory>
#include <utility>

#include "classtab/hfield.hpp"
#include "classtab/kdtree.hpp"
#include "classtab/net.hpp"
#include "classtab/stability.hpp"

namespace classtab {

struct TrainOptions {
  int width = 64;
  Activation activation = Activation::relu;
  std::int64_t budget = 5000;  // refinement iterations across restarts
  std::uint64_t seed = 0;
  double train_spacing = 0.0;  // 0 selects extent/128
  double meps_spacing = 0.0;   // 0 selects extent/200
  int depth_budget = 1;        // narrow-deep: hidden layers to grow to
  int max_restarts = 3;
  double ridge = 1e-8;
  // H-field target convention. Extension is the literal definition; the
  // interior variant is only continuous on M itself, so pair it with
  // K = M (it gives the argmax a full-size margin at the domain edge).
  BoundaryMode boundary_mode = BoundaryMode::extension;
  DistanceOptions dist;
};

struct TrainReport {
  double sup_error = 0.0;       // verification-grid max plus off-grid bound
  double grid_sup_error = 0.0;  // raw verification-grid max
  double off_grid_bound = 0.0;
  double target = 0.0;          // eps / 2
  std::int64_t iterations = 0;
  double interpolation_fraction = 0.0;
  std::int64_t stable_points = 0;  // M_eps grid points checked
  bool reached_target = false;
  bool vacuous = false;  // M_eps came out empty
};

/// Compact training box: the field's bounding box inflated by eps.
Domain default_training_box(const ExtendedField& field, double epsilon);

/// Fits one hidden layer of the given width to the H field on a grid
/// over K, minimizing the sup deviation (random features + least-squares
/// readout, then first-order refinement of every weight). The report
/// records the verified sup error and the argmax-interpolation fraction
/// on the eps-stable grid.
std::pair<Mlp, TrainReport> train_shallow(const ExtendedField& field, const Domain& K,
                                          const NormP& p, double epsilon,
                                          const TrainOptions& opts = {});

/// Fixed width d+q+2, depth grown up to opts.depth_budget hidden layers.
std::pair<Mlp, TrainReport> train_narrow_deep(const ExtendedField& field,
                                              const Domain& K, const NormP& p,
                                              double epsilon,
                                              const TrainOptions& opts = {});

/// Continuous scalar surrogate of the slot-index field: equals the slot
/// index on every xi-stable point and blends linearly across decision
/// boundaries (weights 1 - d/(2 xi) against the per-slot stable sets).
/// Composing it with the hat functions gives the rounding target whose
/// argmax recovers the field away from a xi-collar.
class LabelSurrogate {
 public:
  LabelSurrogate(const ExtendedField& field, double xi, const NormP& p,
                 double grid_spacing, const DistanceOptions& opts = {});
  double operator()(const VecCRef& x) const;
  int q() const { return q_; }

 private:
  ExtendedField field_;
  double xi_;
  int q_ = 0;
  std::vector<std::shared_ptr<const KdTree>> slot_trees_;  // may hold nulls
  NormP p_;
};

/// Trains a net against the rounded target G(x) = (omega_1(g(x)), ...,
/// omega_q(g(x))) for the surrogate g. The uniform-norm requirement is
/// the fixed margin 1/2, so reached_target reflects a grid sup below
/// 0.35 together with full argmax interpolation on the xi-stable grid.
std::pair<Mlp, TrainReport> train_rounding(const ExtendedField& field, const Domain& K,
                                           const NormP& p, double xi,
                                           const TrainOptions& opts = {});

/// The net's predicted-slot field over a region: labels are the output
/// slot indices 1..q, so the level sets are the argmax regions.
LabelField net_as_field(const Mlp& net, const Domain& domain,
                        std::vector<int> scan_resolution = {});

/// Class stability of the net's predicted-label field.
StabilityEstimate stability_of_net(const Mlp& net, const Domain& domain,
                                   const NormP& p, DistanceMode mode,
                                   BoundaryMode boundary_mode, Integrator integrator,
                                   const StabilityOptions& opts = {},
                                   std::vector<int> scan_resolution = {});

}  // namespace classtab
