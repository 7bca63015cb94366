#pragma once

#include <functional>

namespace virodyn {

// Bracketed scalar root finding: secant candidates confined to the bracket,
// bisection fallback.  Requires f(lo) and f(hi) of opposite sign (zero at an
// endpoint is accepted).  Absolute tolerance on x; throws NumericError when
// the bracket is invalid or the iteration budget runs out.
double find_root_bracketed(const std::function<double(double)> &f, double lo, double hi,
                           double x_tol = 1e-12, int max_iter = 200);

} // namespace virodyn
