#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "classtab/domain.hpp"
#include "classtab/norms.hpp"
#include "classtab/types.hpp"

namespace classtab {

/// Labelled sample points inside a declared enclosing region.
struct PointCloud {
  Mat points;                 // one row per point
  std::vector<Label> labels;  // one label per row
  Domain domain;              // declared enclosure, all points inside
};

/// Piecewise-constant field on an axis-aligned box: a point evaluates to
/// the label of the nearest cell centre.
struct GridField {
  Domain box;
  std::vector<int> resolution;  // cells per axis
  std::vector<Label> labels;    // row-major, last axis fastest

  std::int64_t cell_count() const;
  Vec cell_widths() const;
  std::int64_t cell_of(const VecCRef& x) const;  // clamped to the box
  Vec center_of(std::int64_t flat) const;
};

/// Procedural field: a host-supplied label function over a domain.
/// `scan_resolution` is the declared per-axis resolution used when the
/// field has to be rasterized for distance queries. The optional
/// `interior_flip_distance` hook returns the exact distance from x to
/// the nearest differently-labelled point of the domain (NaN when the
/// hook cannot answer for the requested norm).
struct OracleField {
  std::function<Label(const VecCRef&)> evaluate;
  Domain domain;
  std::vector<int> scan_resolution;
  std::function<double(const VecCRef&, const NormP&)> interior_flip_distance;
};

namespace detail {
struct FieldCaches;  // lazily built distance indexes, see distance.cpp
}

/// A classification function f : M -> Y in one of three representations.
/// Immutable after construction; copies share storage and caches.
class LabelField {
 public:
  using Repr = std::variant<PointCloud, GridField, OracleField>;

  LabelField(PointCloud cloud, std::string name = "");
  LabelField(GridField grid, std::string name = "");
  LabelField(OracleField oracle, std::vector<Label> label_set,
             std::string name = "");

  int dim() const;
  const std::vector<Label>& label_set() const;  // sorted ascending
  const std::string& name() const;
  const Domain& domain() const;
  const Repr& repr() const;

  bool is_cloud() const;
  bool is_grid() const;
  bool is_oracle() const;
  const PointCloud& cloud() const;
  const GridField& grid() const;
  const OracleField& oracle() const;

  /// Label at a point of M. Throws if x lies outside the domain (for
  /// point clouds: if x is not one of the stored points).
  Label evaluate(const VecCRef& x) const;

  detail::FieldCaches& caches() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// The extension of a classification function to all of R^d: points
/// outside the domain evaluate to the reserved label -1.
class ExtendedField {
 public:
  explicit ExtendedField(LabelField base) : base_(std::move(base)) {}

  const LabelField& base() const { return base_; }
  const Domain& domain() const { return base_.domain(); }
  int dim() const { return base_.dim(); }

  Label evaluate(const VecCRef& x) const;

  /// Y with -1 prepended; slot s (1-based) holds extended_labels()[s-1].
  std::vector<Label> extended_labels() const;

 private:
  LabelField base_;
};

ExtendedField extend(LabelField field);

/// Applies an injective relabelling to Y; level sets are preserved.
LabelField relabel(const LabelField& field, const std::map<Label, Label>& mapping);

/// Returns g with g(x) = f(x/c) on the domain scaled by c > 0.
LabelField rescale_domain(const LabelField& field, double c);

/// Samples a grid or oracle field at cell centres. `cells_per_axis`
/// empty selects the oracle's declared scan resolution.
GridField rasterize(const LabelField& field, std::vector<int> cells_per_axis = {});

}  // namespace classtab
