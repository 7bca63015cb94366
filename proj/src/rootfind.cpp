#include "rootfind.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace virodyn {

double find_root_bracketed(const std::function<double(double)> &f, double lo, double hi,
                           double x_tol, int max_iter) {
  if (!(lo < hi)) throw NumericError("root finding: empty bracket");
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    std::ostringstream os;
    os << "root finding: no sign change on [" << lo << ", " << hi << "] (f = " << flo << ", "
       << fhi << ")";
    throw NumericError(os.str());
  }

  for (int it = 0; it < max_iter; ++it) {
    if (hi - lo <= x_tol) break;
    // Secant candidate; fall back to the midpoint when it leaves the
    // bracket interior or stalls at an endpoint.
    double mid = lo - flo * (hi - lo) / (fhi - flo);
    const double margin = 0.01 * (hi - lo);
    if (!(mid > lo + margin && mid < hi - margin)) mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if (std::signbit(fmid) == std::signbit(flo)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

} // namespace virodyn
