#pragma once

#include <string>

#include "classtab/label_field.hpp"

namespace classtab {

/// Point cloud file: CSV with a mandatory header row x_1,...,x_d,label.
/// Coordinates are written in shortest round-trip form, so save/load is
/// bit-exact. The declared domain of a loaded cloud is the bounding box
/// of its points (degenerate axes padded by 0.5).
void save_point_cloud(const LabelField& field, const std::string& path);
LabelField load_point_cloud(const std::string& path);

/// Grid field file: one JSON header line
/// {"dim":..,"hi":[..],"label_set":[..],"lo":[..],"resolution":[..]}
/// followed by a CSV body of row-major labels (last axis fastest).
void save_grid_field(const LabelField& field, const std::string& path);
LabelField load_grid_field(const std::string& path);

/// Dispatch on representation (oracles cannot be saved).
void save_field(const LabelField& field, const std::string& path);

/// Sniffs the format from the first line.
LabelField load_field(const std::string& path);

}  // namespace classtab
