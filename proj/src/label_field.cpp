#include "classtab/label_field.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "classtab/distance_caches.hpp"

namespace classtab {

// ---------------------------------------------------------------------------
// GridField
// ---------------------------------------------------------------------------

std::int64_t GridField::cell_count() const {
  std::int64_t n = 1;
  for (int r : resolution) n *= r;
  return n;
}

Vec GridField::cell_widths() const {
  const Vec extent = box.hi() - box.lo();
  Vec w(extent.size());
  for (Eigen::Index i = 0; i < extent.size(); ++i)
    w[i] = extent[i] / resolution[static_cast<std::size_t>(i)];
  return w;
}

std::int64_t GridField::cell_of(const VecCRef& x) const {
  const Vec& lo = box.lo();
  const Vec w = cell_widths();
  std::int64_t flat = 0;
  for (std::size_t i = 0; i < resolution.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    auto k = static_cast<std::int64_t>(std::floor((x[ii] - lo[ii]) / w[ii]));
    k = std::clamp<std::int64_t>(k, 0, resolution[i] - 1);
    flat = flat * resolution[i] + k;
  }
  return flat;
}

Vec GridField::center_of(std::int64_t flat) const {
  const Vec& lo = box.lo();
  const Vec w = cell_widths();
  const auto d = static_cast<int>(resolution.size());
  Vec c(d);
  for (int i = d - 1; i >= 0; --i) {
    const std::int64_t k = flat % resolution[static_cast<std::size_t>(i)];
    flat /= resolution[static_cast<std::size_t>(i)];
    c[i] = lo[i] + (static_cast<double>(k) + 0.5) * w[i];
  }
  return c;
}

// ---------------------------------------------------------------------------
// LabelField
// ---------------------------------------------------------------------------

struct LabelField::Impl {
  Repr repr;
  int dim = 0;
  std::vector<Label> label_set;
  std::string name;
  mutable detail::FieldCaches caches;
};

namespace {

void check_labels_positive(const std::vector<Label>& ys, const char* what) {
  for (Label y : ys)
    if (y <= 0)
      throw std::invalid_argument(std::string(what) +
                                  ": labels must be positive integers");
}

std::vector<Label> sorted_unique(std::vector<Label> ys) {
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  return ys;
}

}  // namespace

LabelField::LabelField(PointCloud cloud, std::string name) {
  if (cloud.points.rows() < 1)
    throw std::invalid_argument("PointCloud: needs at least one point");
  if (static_cast<std::size_t>(cloud.points.rows()) != cloud.labels.size())
    throw std::invalid_argument("PointCloud: one label per point required");
  check_labels_positive(cloud.labels, "PointCloud");
  if (cloud.domain.dim() != cloud.points.cols())
    throw std::invalid_argument("PointCloud: domain dimension mismatch");
  for (Eigen::Index i = 0; i < cloud.points.rows(); ++i)
    if (!cloud.domain.contains(cloud.points.row(i).transpose()))
      throw std::invalid_argument("PointCloud: point outside the declared domain");

  auto impl = std::make_shared<Impl>();
  impl->dim = static_cast<int>(cloud.points.cols());
  impl->label_set = sorted_unique(cloud.labels);
  impl->name = std::move(name);
  impl->repr = std::move(cloud);
  impl_ = std::move(impl);
}

LabelField::LabelField(GridField grid, std::string name) {
  if (grid.box.kind() != Domain::Kind::box)
    throw std::invalid_argument("GridField: domain must be a box");
  if (grid.resolution.size() != static_cast<std::size_t>(grid.box.dim()))
    throw std::invalid_argument("GridField: one resolution per axis required");
  for (int r : grid.resolution)
    if (r < 1) throw std::invalid_argument("GridField: resolutions must be >= 1");
  if (static_cast<std::int64_t>(grid.labels.size()) != grid.cell_count())
    throw std::invalid_argument(
        "GridField: label array length must equal the product of resolutions");
  check_labels_positive(grid.labels, "GridField");

  auto impl = std::make_shared<Impl>();
  impl->dim = grid.box.dim();
  impl->label_set = sorted_unique(grid.labels);
  impl->name = std::move(name);
  impl->repr = std::move(grid);
  impl_ = std::move(impl);
}

LabelField::LabelField(OracleField oracle, std::vector<Label> label_set,
                       std::string name) {
  if (!oracle.evaluate) throw std::invalid_argument("OracleField: evaluator required");
  if (label_set.empty()) throw std::invalid_argument("OracleField: empty label set");
  check_labels_positive(label_set, "OracleField");
  if (oracle.scan_resolution.empty())
    oracle.scan_resolution.assign(static_cast<std::size_t>(oracle.domain.dim()),
                                  oracle.domain.dim() <= 2 ? 256 : 64);
  if (oracle.scan_resolution.size() != static_cast<std::size_t>(oracle.domain.dim()))
    throw std::invalid_argument("OracleField: one scan resolution per axis required");

  auto impl = std::make_shared<Impl>();
  impl->dim = oracle.domain.dim();
  impl->label_set = sorted_unique(std::move(label_set));
  impl->name = std::move(name);
  impl->repr = std::move(oracle);
  impl_ = std::move(impl);
}

int LabelField::dim() const { return impl_->dim; }
const std::vector<Label>& LabelField::label_set() const { return impl_->label_set; }
const std::string& LabelField::name() const { return impl_->name; }
const LabelField::Repr& LabelField::repr() const { return impl_->repr; }

const Domain& LabelField::domain() const {
  if (is_cloud()) return cloud().domain;
  if (is_grid()) return grid().box;
  return oracle().domain;
}

bool LabelField::is_cloud() const { return std::holds_alternative<PointCloud>(impl_->repr); }
bool LabelField::is_grid() const { return std::holds_alternative<GridField>(impl_->repr); }
bool LabelField::is_oracle() const { return std::holds_alternative<OracleField>(impl_->repr); }
const PointCloud& LabelField::cloud() const { return std::get<PointCloud>(impl_->repr); }
const GridField& LabelField::grid() const { return std::get<GridField>(impl_->repr); }
const OracleField& LabelField::oracle() const { return std::get<OracleField>(impl_->repr); }

detail::FieldCaches& LabelField::caches() const { return impl_->caches; }

Label LabelField::evaluate(const VecCRef& x) const {
  if (x.size() != impl_->dim)
    throw std::invalid_argument("LabelField::evaluate: dimension mismatch");
  if (is_grid()) {
    const GridField& g = grid();
    if (!g.box.contains(x))
      throw std::invalid_argument("LabelField::evaluate: point outside the domain");
    return g.labels[static_cast<std::size_t>(g.cell_of(x))];
  }
  if (is_oracle()) {
    const OracleField& o = oracle();
    if (!o.domain.contains(x))
      throw std::invalid_argument("LabelField::evaluate: point outside the domain");
    const Label y = o.evaluate(x);
    if (std::find(impl_->label_set.begin(), impl_->label_set.end(), y) ==
        impl_->label_set.end())
      throw std::logic_error("OracleField: evaluator produced a label outside Y");
    return y;
  }
  const PointCloud& c = cloud();
  for (Eigen::Index i = 0; i < c.points.rows(); ++i) {
    const double scale = 1.0 + c.points.row(i).cwiseAbs().maxCoeff();
    if ((c.points.row(i).transpose() - x).cwiseAbs().maxCoeff() <= 1e-12 * scale)
      return c.labels[static_cast<std::size_t>(i)];
  }
  throw std::invalid_argument(
      "LabelField::evaluate: point clouds are defined on their stored points only");
}

// ---------------------------------------------------------------------------
// ExtendedField
// ---------------------------------------------------------------------------

Label ExtendedField::evaluate(const VecCRef& x) const {
  if (x.size() != dim())
    throw std::invalid_argument("ExtendedField::evaluate: dimension mismatch");
  if (base_.is_cloud()) {
    const PointCloud& c = base_.cloud();
    for (Eigen::Index i = 0; i < c.points.rows(); ++i) {
      const double scale = 1.0 + c.points.row(i).cwiseAbs().maxCoeff();
      if ((c.points.row(i).transpose() - x).cwiseAbs().maxCoeff() <= 1e-12 * scale)
        return c.labels[static_cast<std::size_t>(i)];
    }
    return kOutsideLabel;
  }
  if (!base_.domain().contains(x)) return kOutsideLabel;
  return base_.evaluate(x);
}

std::vector<Label> ExtendedField::extended_labels() const {
  std::vector<Label> ys;
  ys.reserve(base_.label_set().size() + 1);
  ys.push_back(kOutsideLabel);
  ys.insert(ys.end(), base_.label_set().begin(), base_.label_set().end());
  return ys;
}

ExtendedField extend(LabelField field) { return ExtendedField(std::move(field)); }

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

namespace {

std::map<Label, Label> checked_mapping(const std::vector<Label>& ys,
                                       const std::map<Label, Label>& mapping) {
  std::set<Label> image;
  for (Label y : ys) {
    const auto it = mapping.find(y);
    if (it == mapping.end())
      throw std::invalid_argument("relabel: mapping must cover every label in Y");
    if (it->second <= 0)
      throw std::invalid_argument("relabel: mapped labels must be positive integers");
    if (!image.insert(it->second).second)
      throw std::invalid_argument("relabel: mapping must be injective on Y");
  }
  return mapping;
}

}  // namespace

LabelField relabel(const LabelField& field, const std::map<Label, Label>& mapping) {
  const auto m = checked_mapping(field.label_set(), mapping);
  const std::string name = field.name().empty() ? "" : field.name() + ":relabel";
  if (field.is_cloud()) {
    PointCloud c = field.cloud();
    for (auto& y : c.labels) y = m.at(y);
    return LabelField(std::move(c), name);
  }
  if (field.is_grid()) {
    GridField g = field.grid();
    for (auto& y : g.labels) y = m.at(y);
    return LabelField(std::move(g), name);
  }
  const OracleField& o = field.oracle();
  OracleField out = o;
  out.evaluate = [eval = o.evaluate, m](const VecCRef& x) { return m.at(eval(x)); };
  // relabelling preserves level sets, so any exact distance hook stays valid
  std::vector<Label> ys;
  ys.reserve(field.label_set().size());
  for (Label y : field.label_set()) ys.push_back(m.at(y));
  return LabelField(std::move(out), std::move(ys), name);
}

LabelField rescale_domain(const LabelField& field, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("rescale_domain: c must be > 0");
  const std::string name = field.name().empty() ? "" : field.name() + ":rescale";
  if (field.is_cloud()) {
    PointCloud out = field.cloud();
    out.points *= c;
    out.domain = out.domain.scaled(c);
    return LabelField(std::move(out), name);
  }
  if (field.is_grid()) {
    GridField out = field.grid();
    out.box = out.box.scaled(c);
    return LabelField(std::move(out), name);
  }
  const OracleField& o = field.oracle();
  OracleField out;
  out.domain = o.domain.scaled(c);
  out.scan_resolution = o.scan_resolution;
  out.evaluate = [eval = o.evaluate, c](const VecCRef& x) {
    return eval(Vec(x / c));
  };
  if (o.interior_flip_distance)
    out.interior_flip_distance = [hook = o.interior_flip_distance, c](
                                     const VecCRef& x, const NormP& p) {
      return c * hook(Vec(x / c), p);
    };
  return LabelField(std::move(out), field.label_set(), name);
}

GridField rasterize(const LabelField& field, std::vector<int> cells_per_axis) {
  if (field.is_cloud())
    throw std::invalid_argument("rasterize: point clouds cannot be rasterized");
  if (field.is_grid() && cells_per_axis.empty()) return field.grid();
  const Domain& dom = field.domain();
  if (dom.kind() != Domain::Kind::box)
    throw std::invalid_argument("rasterize: requires a box domain");

  auto [lo, hi] = dom.bounding_box();
  if (cells_per_axis.empty()) cells_per_axis = field.oracle().scan_resolution;
  if (cells_per_axis.size() == 1 && dom.dim() > 1)
    cells_per_axis.assign(static_cast<std::size_t>(dom.dim()), cells_per_axis[0]);
  if (cells_per_axis.size() != static_cast<std::size_t>(dom.dim()))
    throw std::invalid_argument("rasterize: one cell count per axis required");

  GridField g;
  g.box = Domain::box(lo, hi);
  g.resolution = std::move(cells_per_axis);
  g.labels.resize(static_cast<std::size_t>(g.cell_count()));
  const std::int64_t n = g.cell_count();
  for (std::int64_t i = 0; i < n; ++i)
    g.labels[static_cast<std::size_t>(i)] = field.evaluate(g.center_of(i));
  return g;
}

}  // namespace classtab
