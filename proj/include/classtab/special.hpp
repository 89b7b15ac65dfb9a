#pragma once

namespace classtab {

/// log Gamma(x) for x > 0, Lanczos approximation (g = 7, 9 terms).
/// Accurate to ~1e-14 relative over the range used here.
double log_gamma(double x);

/// Gamma(x) = exp(log_gamma(x)) for x > 0.
double gamma_fn(double x);

}  // namespace classtab
