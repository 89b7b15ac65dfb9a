#include "classtab/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace classtab {

namespace {
constexpr Eigen::Index kLeafSize = 16;
}

KdTree::KdTree(Mat points) : points_(std::move(points)) {
  order_.resize(static_cast<std::size_t>(points_.rows()));
  std::iota(order_.begin(), order_.end(), 0);
  if (points_.rows() > 0) {
    nodes_.reserve(static_cast<std::size_t>(2 * points_.rows() / kLeafSize + 2));
    root_ = build(0, points_.rows());
  }
}

Eigen::Index KdTree::build(Eigen::Index begin, Eigen::Index end) {
  Node node;
  node.begin = begin;
  node.end = end;
  if (end - begin <= kLeafSize) {
    nodes_.push_back(node);
    return static_cast<Eigen::Index>(nodes_.size()) - 1;
  }

  // split the widest axis at its median
  const int d = static_cast<int>(points_.cols());
  int axis = 0;
  double widest = -1.0;
  for (int a = 0; a < d; ++a) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Eigen::Index i = begin; i < end; ++i) {
      const double v = points_(order_[static_cast<std::size_t>(i)], a);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > widest) {
      widest = hi - lo;
      axis = a;
    }
  }
  if (widest <= 0.0) {  // all points coincide
    nodes_.push_back(node);
    return static_cast<Eigen::Index>(nodes_.size()) - 1;
  }

  const Eigen::Index mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end, [&](Eigen::Index a, Eigen::Index b) {
                     return points_(a, axis) < points_(b, axis);
                   });
  node.axis = axis;
  node.split = points_(order_[static_cast<std::size_t>(mid)], axis);
  const auto self = static_cast<Eigen::Index>(nodes_.size());
  nodes_.push_back(node);
  const Eigen::Index left = build(begin, mid);
  const Eigen::Index right = build(mid, end);
  nodes_[static_cast<std::size_t>(self)].left = left;
  nodes_[static_cast<std::size_t>(self)].right = right;
  return self;
}

std::pair<Eigen::Index, double> KdTree::nearest(const VecCRef& x,
                                                const NormP& p) const {
  if (points_.rows() == 0)
    throw std::logic_error("KdTree::nearest: empty tree");
  Eigen::Index best = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  search(root_, x, p, best, best_dist);
  return {best, best_dist};
}

void KdTree::search(Eigen::Index node_idx, const VecCRef& x, const NormP& p,
                    Eigen::Index& best, double& best_dist) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_idx)];
  if (node.axis < 0) {
    for (Eigen::Index i = node.begin; i < node.end; ++i) {
      const Eigen::Index idx = order_[static_cast<std::size_t>(i)];
      const double d = p.distance(x, points_.row(idx).transpose());
      if (d < best_dist) {
        best_dist = d;
        best = idx;
      }
    }
    return;
  }
  const double delta = x[node.axis] - node.split;
  const Eigen::Index near = delta < 0.0 ? node.left : node.right;
  const Eigen::Index far = delta < 0.0 ? node.right : node.left;
  search(near, x, p, best, best_dist);
  if (std::abs(delta) < best_dist) search(far, x, p, best, best_dist);
}

}  // namespace classtab
