#pragma once

#include <string>
#include <vector>

#include "classtab/label_field.hpp"

namespace classtab {

/// Catalog of the example fields: f1..f4, H1..H3, fl, cube:n=..,a=..,
/// ball:n=..,R=.., disk[:r=..]. Paper-style labels are shifted into
/// positive integers ({-1,1} -> {1,2}; {0,1000} -> {1,1001}); level sets
/// and label differences are unchanged. Unknown names raise an error
/// that lists the catalog.
LabelField builtin_field(const std::string& name);

std::vector<std::string> builtin_catalog();

/// True if the name (before any ':' parameters) is in the catalog.
bool is_builtin_field(const std::string& name);

}  // namespace classtab
