#pragma once

#include <utility>
#include <vector>

#include "classtab/norms.hpp"
#include "classtab/types.hpp"

namespace classtab {

/// Exact nearest-neighbour index over a fixed point set. The tree is
/// built once (median splits on the widest axis) and can be queried
/// under any p-norm: the per-axis bound |x_a - split| lower-bounds every
/// p-distance across the splitting plane, so pruning stays valid.
class KdTree {
 public:
  explicit KdTree(Mat points);

  Eigen::Index size() const { return points_.rows(); }
  const Mat& points() const { return points_; }

  /// Index and distance of the nearest stored point. Requires size() > 0.
  std::pair<Eigen::Index, double> nearest(const VecCRef& x, const NormP& p) const;

  double nearest_distance(const VecCRef& x, const NormP& p) const {
    return nearest(x, p).second;
  }

 private:
  struct Node {
    int axis = -1;          // -1 marks a leaf
    double split = 0.0;
    Eigen::Index begin = 0; // leaf range into order_
    Eigen::Index end = 0;
    Eigen::Index left = -1;
    Eigen::Index right = -1;
  };

  Eigen::Index build(Eigen::Index begin, Eigen::Index end);
  void search(Eigen::Index node, const VecCRef& x, const NormP& p,
              Eigen::Index& best, double& best_dist) const;

  Mat points_;
  std::vector<Eigen::Index> order_;
  std::vector<Node> nodes_;
  Eigen::Index root_ = -1;
};

}  // namespace classtab
