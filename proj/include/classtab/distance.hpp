#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "classtab/label_field.hpp"
#include "classtab/norms.hpp"
#include "classtab/types.hpp"

namespace classtab {

enum class DistanceMethod { exact_nn, grid_scan, radius_bisection };
std::string to_string(DistanceMethod m);

/// Knobs for the estimators. The measure-mode defaults realize
/// "positive measure" as a sampled fraction above tau.
struct DistanceOptions {
  double tau = 1e-3;
  int samples_per_radius = 4096;
  int bisection_depth = 40;
  std::uint64_t seed = 0;
  std::vector<int> oracle_cells_per_axis;  // override the declared resolution
};

struct DistanceEstimate {
  double value = 0.0;
  double error_bound = 0.0;
  DistanceMethod method = DistanceMethod::exact_nn;
  DistanceMode mode = DistanceMode::pointwise;
  BoundaryMode boundary_mode = BoundaryMode::interior;
  bool saturated = false;  // measure mode found no violating radius
};

/// Distance from x (inside M) to the decision boundary. In extension
/// mode the complement of M counts as the label -1; interior mode only
/// considers label changes inside M. Exact for point clouds and for
/// oracles with a distance hook; grid-backed answers carry the cell
/// diagonal as error bound.
DistanceEstimate pointwise_distance(const ExtendedField& field, const VecCRef& x,
                                    const NormP& p, BoundaryMode boundary_mode,
                                    const DistanceOptions& opts = {});

/// As pointwise_distance but defined for every x: off M the value is the
/// distance to M itself. This is the h the H field is built from.
DistanceEstimate boundary_h(const ExtendedField& field, const VecCRef& x,
                            const NormP& p, BoundaryMode boundary_mode,
                            const DistanceOptions& opts = {});

/// Measure-theoretic distance: the smallest radius at which the sampled
/// fraction of differently-labelled points in the p-ball around x
/// exceeds tau, located by bisection over [0, diam(M)].
DistanceEstimate measure_distance(const ExtendedField& field, const VecCRef& x,
                                  const NormP& p, const DistanceOptions& opts = {},
                                  BoundaryMode boundary_mode = BoundaryMode::extension);

/// Batch evaluation; elementwise equal to the single-point calls.
/// Measure-mode RNG streams are derived from (seed, point index).
std::vector<DistanceEstimate> distance_profile(const ExtendedField& field,
                                               const Mat& points, const NormP& p,
                                               DistanceMode mode,
                                               BoundaryMode boundary_mode,
                                               const DistanceOptions& opts = {});

}  // namespace classtab
