#pragma once

#include <cmath>
#include <cstddef>

namespace virodyn {

// Composite Simpson on [lo, hi] with an even panel count (rounded up).
// Degenerate intervals integrate to zero; lo > hi flips the sign.
template <typename F>
double simpson(F &&f, double lo, double hi, int panels) {
  if (lo == hi) return 0.0;
  double sign = 1.0;
  if (lo > hi) {
    std::swap(lo, hi);
    sign = -1.0;
  }
  int m = panels < 2 ? 2 : panels;
  if (m % 2) ++m;
  const double h = (hi - lo) / m;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < m; ++i) sum += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return sign * sum * h / 3.0;
}

inline bool nearly_equal(double a, double b, double tol) { return std::abs(a - b) <= tol; }

} // namespace virodyn
