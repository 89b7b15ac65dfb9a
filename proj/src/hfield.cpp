#include "classtab/hfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "classtab/distance_caches.hpp"
#include "classtab/parallel.hpp"
#include "classtab/rng.hpp"

namespace classtab {

int class_prediction(const VecCRef& v) {
  if (v.size() == 0)
    throw std::invalid_argument("class_prediction: empty vector");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return static_cast<int>(best) + 1;
}

// ---------------------------------------------------------------------------
// HField
// ---------------------------------------------------------------------------

HField::HField(ExtendedField field, NormP p, BoundaryMode boundary_mode,
               DistanceOptions opts)
    : field_(std::move(field)),
      p_(p),
      bmode_(boundary_mode),
      opts_(std::move(opts)),
      slots_(field_.extended_labels()) {}

int HField::slot_of(Label y) const {
  const auto it = std::find(slots_.begin(), slots_.end(), y);
  if (it == slots_.end())
    throw std::invalid_argument("HField::slot_of: label not in the extended label set");
  return static_cast<int>(it - slots_.begin()) + 1;
}

Label HField::label_of(int slot) const {
  if (slot < 1 || slot > q())
    throw std::invalid_argument("HField::label_of: slot out of range");
  return slots_[static_cast<std::size_t>(slot - 1)];
}

DistanceEstimate HField::h(const VecCRef& x) const {
  return boundary_h(field_, x, p_, bmode_, opts_);
}

Vec HField::operator()(const VecCRef& x) const {
  Vec v = Vec::Zero(q());
  const Label fx = field_.evaluate(x);
  const DistanceEstimate est = h(x);
  v[slot_of(fx) - 1] = est.value;
  return v;
}

Vec h_field(const ExtendedField& field, const VecCRef& x, const NormP& p,
            BoundaryMode boundary_mode) {
  return HField(field, p, boundary_mode)(x);
}

// ---------------------------------------------------------------------------
// Lipschitz checks
// ---------------------------------------------------------------------------

LipschitzWitness lipschitz_check_H(const ExtendedField& field, const NormP& p,
                                   std::int64_t pair_count, std::uint64_t seed,
                                   BoundaryMode boundary_mode,
                                   const DistanceOptions& opts) {
  if (pair_count < 1)
    throw std::invalid_argument("lipschitz_check_H: pair_count >= 1 required");
  const HField H(field, p, boundary_mode, opts);
  const Domain& dom = field.domain();

  // extension mode exercises points beyond the domain edge as well
  auto [lo, hi] = dom.bounding_box();
  const double margin =
      boundary_mode == BoundaryMode::extension ? 0.25 * (hi - lo).maxCoeff() : 0.0;
  const Vec blo = lo.array() - margin;
  const Vec bhi = hi.array() + margin;
  const bool box_sampling =
      boundary_mode == BoundaryMode::extension || dom.kind() == Domain::Kind::box;

  constexpr std::int64_t block = 4096;
  const std::int64_t n_blocks = (pair_count + block - 1) / block;
  std::vector<LipschitzWitness> partial(static_cast<std::size_t>(n_blocks));
  parallel_blocks(pair_count, block, [&](std::int64_t b, std::int64_t begin,
                                         std::int64_t end) {
    Rng rng(seed, 0x6c697073ULL + static_cast<std::uint64_t>(b));
    LipschitzWitness w;
    const int d = field.dim();
    auto draw = [&]() {
      if (!box_sampling) return dom.sample(rng);
      Vec x(d);
      for (int i = 0; i < d; ++i) x[i] = rng.uniform(blo[i], bhi[i]);
      return x;
    };
    for (std::int64_t i = begin; i < end; ++i) {
      const Vec x = draw();
      const Vec y = draw();
      const double dxy = p.distance(x, y);
      if (dxy == 0.0) continue;  // 0/0 pair carries no information
      const double ratio = p.norm(H(x) - H(y)) / dxy;
      ++w.pairs_used;
      if (ratio > w.max_ratio) {
        w.max_ratio = ratio;
        w.x = x;
        w.y = y;
      }
    }
    partial[static_cast<std::size_t>(b)] = std::move(w);
  });
  LipschitzWitness out;
  for (auto& w : partial) {
    out.pairs_used += w.pairs_used;
    if (w.max_ratio > out.max_ratio) {
      out.max_ratio = w.max_ratio;
      out.x = w.x;
      out.y = w.y;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stable sets
// ---------------------------------------------------------------------------

StableSet stable_set(const ExtendedField& field, double epsilon, const NormP& p,
                     BoundaryMode boundary_mode, const std::vector<int>& grid_cells,
                     const DistanceOptions& opts) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("stable_set: epsilon must be > 0");
  const Domain& dom = field.domain();
  const int d = field.dim();
  std::vector<int> cells = grid_cells;
  if (cells.size() == 1 && d > 1) cells.assign(static_cast<std::size_t>(d), cells[0]);
  if (cells.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("stable_set: one cell count per axis required");

  GridField mesh;
  auto [lo, hi] = dom.bounding_box();
  mesh.box = Domain::box(lo, hi);
  mesh.resolution = cells;
  const std::int64_t n = mesh.cell_count();
  std::vector<Vec> members;
  for (std::int64_t i = 0; i < n; ++i) {
    const Vec c = mesh.center_of(i);
    if (!dom.contains(c)) continue;
    const DistanceEstimate est = boundary_h(field, c, p, boundary_mode, opts);
    if (est.value - est.error_bound > epsilon) members.push_back(c);
  }

  StableSet out;
  out.epsilon = epsilon;
  out.members.resize(static_cast<Eigen::Index>(members.size()), d);
  for (std::size_t i = 0; i < members.size(); ++i)
    out.members.row(static_cast<Eigen::Index>(i)) = members[i].transpose();
  out.empty_warning = members.empty();
  out.provenance = field.base().name() + " p=" + std::to_string(p.p()) +
                   " boundary=" + to_string(boundary_mode) + " cells=" +
                   std::to_string(cells.front());
  return out;
}

// ---------------------------------------------------------------------------
// Rounding construction
// ---------------------------------------------------------------------------

double omega(int i, double x) {
  // piecewise: 0 below i-1, rising edge to (i, 1], falling edge to i+1, 0 above
  return std::max(0.0, 1.0 - std::abs(x - static_cast<double>(i)));
}

Vec compose_G(const std::function<double(const VecCRef&)>& g, int q,
              const VecCRef& x) {
  if (q < 1) throw std::invalid_argument("compose_G: q >= 1 required");
  const double v = g(x);
  Vec out(q);
  for (int i = 1; i <= q; ++i) out[i - 1] = omega(i, v);
  return out;
}

// ---------------------------------------------------------------------------
// Empirical Lipschitz lower bounds
// ---------------------------------------------------------------------------

namespace {

double cloud_lipschitz(const ExtendedField& field, std::int64_t pair_count,
                       const NormP& p, std::uint64_t seed) {
  const PointCloud& c = field.base().cloud();
  const auto n = c.points.rows();
  double best = 0.0;
  Rng rng(seed, 0x636c6f75ULL);
  // uniform pairs
  for (std::int64_t i = 0; i < pair_count / 2; ++i) {
    const auto a = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    const auto b = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    if (a == b) continue;
    const double dist = p.distance(c.points.row(a).transpose(), c.points.row(b).transpose());
    if (dist == 0.0) continue;
    best = std::max(best, std::abs(static_cast<double>(c.labels[static_cast<std::size_t>(a)] -
                                                       c.labels[static_cast<std::size_t>(b)])) /
                              dist);
  }
  // boundary-biased pairs: each point against its nearest different label
  const std::int64_t budget = std::min<std::int64_t>(pair_count - pair_count / 2, n);
  for (std::int64_t i = 0; i < budget; ++i) {
    const Eigen::Index a = budget == n
                               ? static_cast<Eigen::Index>(i)
                               : static_cast<Eigen::Index>(
                                     rng.uniform_index(static_cast<std::uint64_t>(n)));
    const Vec x = c.points.row(a).transpose();
    const Label ya = c.labels[static_cast<std::size_t>(a)];
    double nearest = std::numeric_limits<double>::infinity();
    Label yb = ya;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (c.labels[static_cast<std::size_t>(j)] == ya) continue;
      const double dist = p.distance(x, c.points.row(j).transpose());
      if (dist < nearest && dist > 0.0) {
        nearest = dist;
        yb = c.labels[static_cast<std::size_t>(j)];
      }
    }
    if (std::isfinite(nearest))
      best = std::max(best, std::abs(static_cast<double>(ya - yb)) / nearest);
  }
  return best;
}

}  // namespace

double empirical_lipschitz(const ExtendedField& field, std::int64_t pair_count,
                           const NormP& p, std::uint64_t seed) {
  if (pair_count < 1)
    throw std::invalid_argument("empirical_lipschitz: pair_count >= 1 required");
  if (field.base().is_cloud()) return cloud_lipschitz(field, pair_count, p, seed);
  return empirical_lipschitz(
      [&](const VecCRef& x) {
        return static_cast<double>(field.base().evaluate(x));
      },
      field.domain(), pair_count, p, seed);
}

double empirical_lipschitz(const std::function<double(const VecCRef&)>& fn,
                           const Domain& region, std::int64_t pair_count,
                           const NormP& p, std::uint64_t seed) {
  if (pair_count < 1)
    throw std::invalid_argument("empirical_lipschitz: pair_count >= 1 required");
  Rng rng(seed, 0x656d7069ULL);
  double best = 0.0;
  const double scale = region.diameter(p);
  const int d = region.dim();
  // half uniform pairs, half short-range pairs that straddle boundaries
  for (std::int64_t i = 0; i < pair_count; ++i) {
    const Vec x = region.sample(rng);
    Vec y;
    if (i % 2 == 0) {
      y = region.sample(rng);
    } else {
      Vec u(d);
      for (int k = 0; k < d; ++k) u[k] = rng.normal();
      const double un = u.norm();
      if (un == 0.0) continue;
      const double step = scale * 1e-3 * rng.uniform();
      y = x + (step / un) * u;
      if (!region.contains(y)) continue;
    }
    const double dist = p.distance(x, y);
    if (dist == 0.0) continue;
    best = std::max(best, std::abs(fn(x) - fn(y)) / dist);
  }
  return best;
}

}  // namespace classtab
