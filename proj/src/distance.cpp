#include "classtab/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "classtab/distance_caches.hpp"
#include "classtab/parallel.hpp"
#include "classtab/rng.hpp"

namespace classtab {

std::string to_string(DistanceMethod m) {
  switch (m) {
    case DistanceMethod::exact_nn: return "exact_nn";
    case DistanceMethod::grid_scan: return "grid_scan";
    case DistanceMethod::radius_bisection: return "radius_bisection";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::shared_ptr<const detail::RasterIndex> raster_index(
    const LabelField& field, const std::vector<int>& override_cells) {
  auto& caches = field.caches();
  std::lock_guard<std::mutex> lock(caches.mutex);
  if (caches.raster && override_cells.empty()) return caches.raster;

  const OracleField& o = field.oracle();
  std::vector<int> cells = override_cells.empty() ? o.scan_resolution : override_cells;
  if (cells.size() == 1 && field.dim() > 1)
    cells.assign(static_cast<std::size_t>(field.dim()), cells[0]);

  GridField probe;
  auto [lo, hi] = o.domain.bounding_box();
  probe.box = Domain::box(lo, hi);
  probe.resolution = cells;
  const std::int64_t n = probe.cell_count();
  auto idx = std::make_shared<detail::RasterIndex>();
  idx->cell_widths = probe.cell_widths();
  std::vector<Vec> centers;
  centers.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    Vec c = probe.center_of(i);
    if (!o.domain.contains(c)) continue;
    centers.push_back(std::move(c));
  }
  idx->centers.resize(static_cast<Eigen::Index>(centers.size()), field.dim());
  idx->labels.resize(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    idx->centers.row(static_cast<Eigen::Index>(i)) = centers[i].transpose();
    idx->labels[i] = o.evaluate(centers[i]);
  }
  if (override_cells.empty()) caches.raster = idx;
  return idx;
}

std::shared_ptr<const KdTree> complement_tree(const LabelField& field, Label y,
                                              const Mat& points,
                                              const std::vector<Label>& labels) {
  auto& caches = field.caches();
  {
    std::lock_guard<std::mutex> lock(caches.mutex);
    const auto it = caches.complement_trees.find(y);
    if (it != caches.complement_trees.end()) return it->second;
  }
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] != y) rows.push_back(static_cast<Eigen::Index>(i));
  Mat sub(static_cast<Eigen::Index>(rows.size()), points.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    sub.row(static_cast<Eigen::Index>(i)) = points.row(rows[i]);
  auto tree = std::make_shared<const KdTree>(std::move(sub));
  std::lock_guard<std::mutex> lock(caches.mutex);
  return caches.complement_trees.try_emplace(y, std::move(tree)).first->second;
}

/// distance to the nearest point of M carrying a different label, plus
/// the method/error pair that produced it
struct FlipDistance {
  double value = kInf;
  double error = 0.0;
  DistanceMethod method = DistanceMethod::exact_nn;
};

FlipDistance interior_flip(const ExtendedField& field, const VecCRef& x, Label fx,
                           const NormP& p, const DistanceOptions& opts) {
  const LabelField& base = field.base();
  if (base.is_cloud()) {
    const PointCloud& c = base.cloud();
    auto tree = complement_tree(base, fx, c.points, c.labels);
    if (tree->size() == 0) return {kInf, 0.0, DistanceMethod::exact_nn};
    return {tree->nearest_distance(x, p), 0.0, DistanceMethod::exact_nn};
  }
  if (base.is_grid()) {
    const GridField& g = base.grid();
    auto& caches = base.caches();
    std::shared_ptr<const detail::RasterIndex> idx;
    {
      std::lock_guard<std::mutex> lock(caches.mutex);
      idx = caches.raster;
    }
    if (!idx) {
      auto fresh = std::make_shared<detail::RasterIndex>();
      const std::int64_t n = g.cell_count();
      fresh->centers.resize(n, base.dim());
      fresh->labels.resize(static_cast<std::size_t>(n));
      for (std::int64_t i = 0; i < n; ++i) {
        fresh->centers.row(i) = g.center_of(i).transpose();
        fresh->labels[static_cast<std::size_t>(i)] = g.labels[static_cast<std::size_t>(i)];
      }
      fresh->cell_widths = g.cell_widths();
      std::lock_guard<std::mutex> lock(caches.mutex);
      if (!caches.raster) caches.raster = fresh;
      idx = caches.raster;
    }
    auto tree = complement_tree(base, fx, idx->centers, idx->labels);
    if (tree->size() == 0) return {kInf, 0.0, DistanceMethod::grid_scan};
    return {tree->nearest_distance(x, p), p.norm(idx->cell_widths),
            DistanceMethod::grid_scan};
  }
  const OracleField& o = base.oracle();
  if (o.interior_flip_distance) {
    const double v = o.interior_flip_distance(x, p);
    if (!std::isnan(v)) return {v, 0.0, DistanceMethod::exact_nn};
  }
  auto idx = raster_index(base, opts.oracle_cells_per_axis);
  std::shared_ptr<const KdTree> tree;
  if (opts.oracle_cells_per_axis.empty()) {
    tree = complement_tree(base, fx, idx->centers, idx->labels);
  } else {
    Mat sub(idx->centers.rows(), idx->centers.cols());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < idx->centers.rows(); ++i)
      if (idx->labels[static_cast<std::size_t>(i)] != fx)
        sub.row(k++) = idx->centers.row(i);
    tree = std::make_shared<const KdTree>(Mat(sub.topRows(k)));
  }
  if (tree->size() == 0) return {kInf, 0.0, DistanceMethod::grid_scan};
  return {tree->nearest_distance(x, p), p.norm(idx->cell_widths),
          DistanceMethod::grid_scan};
}

}  // namespace

DistanceEstimate boundary_h(const ExtendedField& field, const VecCRef& x,
                            const NormP& p, BoundaryMode boundary_mode,
                            const DistanceOptions& opts) {
  if (x.size() != field.dim())
    throw std::invalid_argument("boundary_h: dimension mismatch");
  DistanceEstimate est;
  est.mode = DistanceMode::pointwise;
  est.boundary_mode = boundary_mode;

  const Label fx = field.evaluate(x);
  if (fx == kOutsideLabel) {
    // off M every point of M carries a different label
    const LabelField& base = field.base();
    if (base.is_cloud()) {
      auto tree = complement_tree(base, kOutsideLabel, base.cloud().points,
                                  base.cloud().labels);
      est.value = tree->nearest_distance(x, p);
    } else {
      est.value = field.domain().distance_to(x, p);
    }
    est.method = DistanceMethod::exact_nn;
    return est;
  }

  const FlipDistance flip = interior_flip(field, x, fx, p, opts);
  est.value = flip.value;
  est.error_bound = std::isinf(flip.value) ? 0.0 : flip.error;
  est.method = flip.method;
  if (boundary_mode == BoundaryMode::extension) {
    const double edge = field.domain().boundary_distance(x, p);
    if (edge <= flip.value - flip.error) {
      // the (exact) edge distance decides
      est.value = edge;
      est.error_bound = 0.0;
      est.method = DistanceMethod::exact_nn;
    } else if (edge < flip.value) {
      // edge is smaller but within the flip's uncertainty
      est.value = edge;
      est.error_bound = flip.error;
      est.method = flip.method;
    }
  }
  return est;
}

DistanceEstimate pointwise_distance(const ExtendedField& field, const VecCRef& x,
                                    const NormP& p, BoundaryMode boundary_mode,
                                    const DistanceOptions& opts) {
  if (x.size() != field.dim())
    throw std::invalid_argument("pointwise_distance: dimension mismatch");
  if (field.evaluate(x) == kOutsideLabel)
    throw std::invalid_argument("pointwise_distance: x lies outside the domain");
  return boundary_h(field, x, p, boundary_mode, opts);
}

DistanceEstimate measure_distance(const ExtendedField& field, const VecCRef& x,
                                  const NormP& p, const DistanceOptions& opts,
                                  BoundaryMode boundary_mode) {
  if (field.base().is_cloud())
    throw std::invalid_argument(
        "measure_distance: undefined on point clouds (pointwise mode only)");
  if (!(opts.tau > 0.0 && opts.tau < 0.5))
    throw std::invalid_argument("measure_distance: tau must lie in (0, 0.5)");
  const Label fx = field.evaluate(x);
  if (fx == kOutsideLabel)
    throw std::invalid_argument("measure_distance: x lies outside the domain");

  const Domain& dom = field.domain();
  const double diam = dom.diameter(p);
  const bool d1 = field.dim() == 1;

  const auto differs_fraction = [&](double r, std::uint64_t stream) {
    Rng rng(opts.seed, 0x6d657375ULL ^ stream);
    int hits = 0;
    Vec z(field.dim());
    for (int i = 0; i < opts.samples_per_radius; ++i) {
      if (d1)
        z[0] = x[0] + rng.uniform(-r, r);
      else
        z = sample_p_ball(rng, x, r, p);
      const Label fz = field.evaluate(z);
      const bool diff = boundary_mode == BoundaryMode::extension
                            ? fz != fx
                            : (fz != kOutsideLabel && fz != fx);
      hits += diff ? 1 : 0;
    }
    return static_cast<double>(hits) / opts.samples_per_radius;
  };

  DistanceEstimate est;
  est.mode = DistanceMode::measure;
  est.boundary_mode = boundary_mode;
  est.method = DistanceMethod::radius_bisection;

  if (differs_fraction(diam, 0) <= opts.tau) {
    est.value = diam;
    est.saturated = true;
    return est;
  }
  double lo = 0.0, hi = diam;
  for (int it = 1; it <= opts.bisection_depth; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (differs_fraction(mid, static_cast<std::uint64_t>(it)) > opts.tau)
      hi = mid;
    else
      lo = mid;
  }
  est.value = 0.5 * (lo + hi);
  est.error_bound = hi - lo;
  return est;
}

std::vector<DistanceEstimate> distance_profile(const ExtendedField& field,
                                               const Mat& points, const NormP& p,
                                               DistanceMode mode,
                                               BoundaryMode boundary_mode,
                                               const DistanceOptions& opts) {
  const auto n = points.rows();
  std::vector<DistanceEstimate> out(static_cast<std::size_t>(n));
  std::vector<std::string> errors(static_cast<std::size_t>(n));

  parallel_blocks(n, 256, [&](std::int64_t, std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      try {
        const Vec x = points.row(i).transpose();
        if (mode == DistanceMode::pointwise) {
          out[static_cast<std::size_t>(i)] =
              pointwise_distance(field, x, p, boundary_mode, opts);
        } else {
          DistanceOptions per_point = opts;
          per_point.seed = opts.seed ^ (0x9e3779b97f4a7c15ULL * (i + 1));
          out[static_cast<std::size_t>(i)] =
              measure_distance(field, x, p, per_point, boundary_mode);
        }
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(i)] = e.what();
      }
    }
  });
  for (std::int64_t i = 0; i < n; ++i)
    if (!errors[static_cast<std::size_t>(i)].empty())
      throw std::invalid_argument("distance_profile: point " + std::to_string(i) +
                                  ": " + errors[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace classtab
