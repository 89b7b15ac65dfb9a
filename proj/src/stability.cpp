#include "classtab/stability.hpp"

#include <cmath>
#include <stdexcept>

#include "classtab/parallel.hpp"
#include "classtab/rng.hpp"
#include "classtab/special.hpp"

namespace classtab {

std::string to_string(Integrator i) {
  return i == Integrator::monte_carlo ? "monte_carlo" : "grid";
}

namespace {

constexpr std::int64_t kBlock = 16384;

double h_at(const ExtendedField& field, const VecCRef& x, const NormP& p,
            DistanceMode mode, BoundaryMode bmode, const DistanceOptions& dist,
            std::uint64_t point_stream) {
  if (mode == DistanceMode::pointwise)
    return boundary_h(field, x, p, bmode, dist).value;
  DistanceOptions per_point = dist;
  per_point.seed = dist.seed ^ (0x9e3779b97f4a7c15ULL * (point_stream + 1));
  return measure_distance(field, x, p, per_point, bmode).value;
}

StabilityEstimate finite_set_stability(const ExtendedField& field,
                                       const Domain& region, const NormP& p,
                                       BoundaryMode bmode,
                                       const StabilityOptions& opts) {
  // counting measure: the integral is the plain sum over atoms
  double sum = 0.0;
  for (const auto& x : region.points())
    sum += boundary_h(field, x, p, bmode, opts.dist).value;
  StabilityEstimate est;
  est.value = sum;
  est.std_error = 0.0;
  est.samples = static_cast<std::int64_t>(region.points().size());
  est.mode = DistanceMode::pointwise;
  est.boundary_mode = bmode;
  est.integrator = Integrator::grid;
  return est;
}

}  // namespace

StabilityEstimate class_stability(const ExtendedField& field, const Domain& region,
                                  const NormP& p, DistanceMode mode,
                                  BoundaryMode bmode, Integrator integrator,
                                  const StabilityOptions& opts) {
  if (region.dim() != field.dim())
    throw std::invalid_argument("class_stability: region dimension mismatch");
  if (!region.subset_of(field.domain()))
    throw std::invalid_argument("class_stability: region must lie inside the field domain");
  if (mode == DistanceMode::measure && field.base().is_cloud())
    throw std::invalid_argument("class_stability: measure mode is undefined on point clouds");

  if (region.kind() == Domain::Kind::finite_set)
    return finite_set_stability(field, region, p, bmode, opts);

  const int d = region.dim();
  StabilityEstimate est;
  est.mode = mode;
  est.boundary_mode = bmode;
  est.integrator = integrator;
  const double volume = region.volume();

  if (integrator == Integrator::monte_carlo) {
    std::int64_t n = opts.mc_samples > 0 ? opts.mc_samples
                                         : (d <= 3 ? 1000000 : 100000);
    if (n < 100)
      throw std::invalid_argument("class_stability: monte_carlo needs >= 100 samples");
    const std::int64_t n_blocks = (n + kBlock - 1) / kBlock;
    std::vector<double> sums(static_cast<std::size_t>(n_blocks), 0.0);
    std::vector<double> sqsums(static_cast<std::size_t>(n_blocks), 0.0);
    parallel_blocks(
        n, kBlock,
        [&](std::int64_t b, std::int64_t begin, std::int64_t end) {
          Rng rng(opts.seed, 0x73746162ULL + static_cast<std::uint64_t>(b));
          double s = 0.0, s2 = 0.0;
          for (std::int64_t i = begin; i < end; ++i) {
            const Vec x = region.sample(rng);
            const double h = h_at(field, x, p, mode, bmode, opts.dist,
                                  static_cast<std::uint64_t>(i));
            s += h;
            s2 += h * h;
          }
          sums[static_cast<std::size_t>(b)] = s;
          sqsums[static_cast<std::size_t>(b)] = s2;
        },
        opts.workers);
    const double sum = pairwise_sum(sums);
    const double sq = pairwise_sum(sqsums);
    const double mean = sum / static_cast<double>(n);
    const double var =
        std::max(0.0, (sq - static_cast<double>(n) * mean * mean) /
                          static_cast<double>(n > 1 ? n - 1 : 1));
    est.value = volume * mean;
    est.std_error = volume * std::sqrt(var / static_cast<double>(n));
    est.samples = n;
    return est;
  }

  // midpoint quadrature on a regular grid over the region's bounding box
  if (d > 4)
    throw std::invalid_argument("class_stability: grid integrator is limited to d <= 4");
  std::vector<int> cells = opts.grid_cells;
  if (cells.empty()) {
    const std::int64_t target = opts.mc_samples > 0 ? opts.mc_samples : 100000;
    const int per_axis = std::max(
        2, static_cast<int>(std::llround(std::pow(static_cast<double>(target),
                                                  1.0 / static_cast<double>(d)))));
    cells.assign(static_cast<std::size_t>(d), per_axis);
  }
  if (cells.size() == 1 && d > 1) cells.assign(static_cast<std::size_t>(d), cells[0]);
  if (cells.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("class_stability: one grid cell count per axis required");

  GridField mesh;
  auto [lo, hi] = region.bounding_box();
  mesh.box = Domain::box(lo, hi);
  mesh.resolution = cells;
  const std::int64_t n = mesh.cell_count();
  const Vec widths = mesh.cell_widths();
  const double cell_vol = widths.prod();
  const std::int64_t n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> sums(static_cast<std::size_t>(n_blocks), 0.0);
  std::vector<double> ebs(static_cast<std::size_t>(n_blocks), 0.0);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n_blocks), 0);
  parallel_blocks(
      n, kBlock,
      [&](std::int64_t b, std::int64_t begin, std::int64_t end) {
        double s = 0.0, e = 0.0;
        std::int64_t used = 0;
        for (std::int64_t i = begin; i < end; ++i) {
          const Vec c = mesh.center_of(i);
          if (!region.contains(c)) continue;
          if (mode == DistanceMode::pointwise) {
            const DistanceEstimate de = boundary_h(field, c, p, bmode, opts.dist);
            s += de.value;
            e += de.error_bound;
          } else {
            DistanceOptions per_point = opts.dist;
            per_point.seed =
                opts.dist.seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(i) + 1));
            const DistanceEstimate de = measure_distance(field, c, p, per_point, bmode);
            s += de.value;
            e += de.error_bound;
          }
          ++used;
        }
        sums[static_cast<std::size_t>(b)] = s;
        ebs[static_cast<std::size_t>(b)] = e;
        counts[static_cast<std::size_t>(b)] = used;
      },
      opts.workers);
  double sum = pairwise_sum(sums);
  double eb = pairwise_sum(ebs);
  std::int64_t used = 0;
  for (auto cnt : counts) used += cnt;
  est.value = sum * cell_vol;
  // h is 1-Lipschitz, so the midpoint rule is off by at most half a cell
  // diagonal per cell, plus the per-point estimator bounds
  est.std_error = volume * 0.5 * p.norm(widths) + eb * cell_vol;
  est.samples = used;
  return est;
}

StabilityEstimate class_stability(const ExtendedField& field, const NormP& p,
                                  DistanceMode mode, BoundaryMode bmode,
                                  Integrator integrator, const StabilityOptions& opts) {
  return class_stability(field, field.domain(), p, mode, bmode, integrator, opts);
}

double cube_stability_closed_form(int n, double a) {
  if (n < 1) throw std::invalid_argument("cube_stability_closed_form: n >= 1 required");
  if (!(a > 0.0)) throw std::invalid_argument("cube_stability_closed_form: a > 0 required");
  return std::pow(2.0, n) * std::pow(a, n + 1) / (n + 1);
}

double ball_stability_closed_form(int n, double R) {
  if (n < 1) throw std::invalid_argument("ball_stability_closed_form: n >= 1 required");
  if (!(R > 0.0)) throw std::invalid_argument("ball_stability_closed_form: R > 0 required");
  const double half_n = 0.5 * n;
  return std::exp(std::log(2.0) + half_n * std::log(M_PI) - log_gamma(half_n) +
                  (n + 1) * std::log(R) -
                  std::log(static_cast<double>(n) * (n + 1)));
}

double volume_matched_ratio(int n) {
  if (n < 1) throw std::invalid_argument("volume_matched_ratio: n >= 1 required");
  return 2.0 * std::exp(log_gamma(0.5 * n + 1.0) / n) / std::sqrt(M_PI);
}

double volume_matched_radius(int n, double a) {
  if (n < 1) throw std::invalid_argument("volume_matched_radius: n >= 1 required");
  if (!(a > 0.0)) throw std::invalid_argument("volume_matched_radius: a > 0 required");
  return 2.0 * a * std::exp((log_gamma(0.5 * n + 1.0) - 0.5 * n * std::log(M_PI)) / n);
}

AccuracyEstimate accuracy_measure(const std::function<Label(const VecCRef&)>& candidate,
                                  const ExtendedField& reference, const Domain& region,
                                  std::int64_t samples, std::uint64_t seed) {
  if (!region.subset_of(reference.domain()))
    throw std::invalid_argument("accuracy_measure: region must lie inside the reference domain");
  if (samples < 1) throw std::invalid_argument("accuracy_measure: samples >= 1 required");
  const std::int64_t n_blocks = (samples + kBlock - 1) / kBlock;
  std::vector<double> hits(static_cast<std::size_t>(n_blocks), 0.0);
  parallel_blocks(samples, kBlock,
                  [&](std::int64_t b, std::int64_t begin, std::int64_t end) {
                    Rng rng(seed, 0x61636375ULL + static_cast<std::uint64_t>(b));
                    double h = 0.0;
                    for (std::int64_t i = begin; i < end; ++i) {
                      const Vec x = region.sample(rng);
                      if (candidate(x) == reference.evaluate(x)) h += 1.0;
                    }
                    hits[static_cast<std::size_t>(b)] = h;
                  });
  const double agree = pairwise_sum(hits);
  const double frac = agree / static_cast<double>(samples);
  const double volume = region.volume();
  AccuracyEstimate est;
  est.fraction = frac;
  est.measure = volume * frac;
  est.std_error =
      volume * std::sqrt(std::max(0.0, frac * (1.0 - frac) / static_cast<double>(samples)));
  est.samples = samples;
  return est;
}

AccuracyEstimate accuracy_measure(const ExtendedField& candidate,
                                  const ExtendedField& reference, const Domain& region,
                                  std::int64_t samples, std::uint64_t seed) {
  return accuracy_measure(
      [&](const VecCRef& x) { return candidate.evaluate(x); }, reference, region,
      samples, seed);
}

}  // namespace classtab
