#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

namespace classtab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using VecCRef = Eigen::Ref<const Eigen::VectorXd>;

/// Class labels are positive integers; -1 is reserved for the extension
/// of a field to points outside its domain.
using Label = int;
inline constexpr Label kOutsideLabel = -1;

enum class DistanceMode { pointwise, measure };
enum class BoundaryMode {
  extension,  ///< the domain edge counts as a label change
  interior    ///< label changes are searched inside the domain only
};

std::string to_string(DistanceMode m);
std::string to_string(BoundaryMode m);

inline std::string to_string(DistanceMode m) {
  return m == DistanceMode::pointwise ? "pointwise" : "measure";
}
inline std::string to_string(BoundaryMode m) {
  return m == BoundaryMode::extension ? "extension" : "interior";
}

}  // namespace classtab
