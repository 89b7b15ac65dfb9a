#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "classtab/kdtree.hpp"
#include "classtab/types.hpp"

namespace classtab::detail {

/// Cell centres of a rasterized oracle that fall inside its domain.
struct RasterIndex {
  Mat centers;
  std::vector<Label> labels;
  Vec cell_widths;
};

/// Lazily built per-field indexes shared by all copies of a field.
/// A complement tree for label y holds every reference point whose
/// label differs from y.
struct FieldCaches {
  std::mutex mutex;
  std::map<Label, std::shared_ptr<const KdTree>> complement_trees;
  std::shared_ptr<const RasterIndex> raster;
};

}  // namespace classtab::detail
