#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "classtab/distance.hpp"
#include "classtab/domain.hpp"
#include "classtab/label_field.hpp"

namespace classtab {

enum class Integrator { monte_carlo, grid };
std::string to_string(Integrator i);

struct StabilityEstimate {
  double value = 0.0;      // length x volume units
  double std_error = 0.0;  // MC standard error, or the grid quadrature bound
  std::int64_t samples = 0;
  DistanceMode mode = DistanceMode::pointwise;
  BoundaryMode boundary_mode = BoundaryMode::interior;
  Integrator integrator = Integrator::monte_carlo;
};

struct StabilityOptions {
  std::int64_t mc_samples = 0;  // 0 selects 1e6 for d <= 3, 1e5 above
  std::vector<int> grid_cells;  // per-axis cells for the grid integrator
  std::uint64_t seed = 0;
  DistanceOptions dist;
  int workers = 0;
};

/// The class-stability integral of h over the region, S = int_M h dmu.
/// Monte Carlo returns volume(M) x mean h with the plain standard error;
/// the grid integrator returns midpoint quadrature with an error bound
/// from the 1-Lipschitz property of h. Finite-set regions are summed
/// exactly under counting measure.
StabilityEstimate class_stability(const ExtendedField& field, const Domain& region,
                                  const NormP& p, DistanceMode mode,
                                  BoundaryMode boundary_mode, Integrator integrator,
                                  const StabilityOptions& opts = {});

/// Convenience: integrate over the field's own domain.
StabilityEstimate class_stability(const ExtendedField& field, const NormP& p,
                                  DistanceMode mode, BoundaryMode boundary_mode,
                                  Integrator integrator,
                                  const StabilityOptions& opts = {});

/// Stability of the constant field on the cube [-a,a]^n: 2^n a^(n+1)/(n+1).
double cube_stability_closed_form(int n, double a);

/// Stability of the constant field on the L2 ball of radius R (p = 2):
/// 2 pi^(n/2)/Gamma(n/2) * R^(n+1)/(n(n+1)).
double ball_stability_closed_form(int n, double R);

/// Ball/cube stability ratio at equal volume: 2 Gamma(n/2+1)^(1/n)/sqrt(pi).
double volume_matched_ratio(int n);

/// Ball radius matching the volume of the cube [-a,a]^n.
double volume_matched_radius(int n, double a);

struct AccuracyEstimate {
  double measure = 0.0;   // volume(region) x agreement fraction
  double fraction = 0.0;  // normalized convenience value
  double std_error = 0.0;
  std::int64_t samples = 0;
};

/// Unnormalized agreement measure of a candidate labelling against a
/// reference field over a region.
AccuracyEstimate accuracy_measure(const std::function<Label(const VecCRef&)>& candidate,
                                  const ExtendedField& reference, const Domain& region,
                                  std::int64_t samples, std::uint64_t seed);

AccuracyEstimate accuracy_measure(const ExtendedField& candidate,
                                  const ExtendedField& reference, const Domain& region,
                                  std::int64_t samples, std::uint64_t seed);

}  // namespace classtab
