#include <cmath>
#include <sstream>

#include "equilibria.hpp"
#include "errors.hpp"
#include "integrator.hpp"
#include "model.hpp"

namespace virodyn {

namespace {

std::string point3(double x, double y, double v) {
  std::ostringstream os;
  os << "(x=" << x << ", y=" << y << ", v=" << v << ")";
  return os.str();
}

} // namespace

ValidationReport validate_hypotheses(const ModelSpec &model, int grid) {
  if (grid < 32) throw InvalidArgumentError("validate_hypotheses: grid must be >= 32");
  ValidationReport rep;
  auto add = [&](std::string name, bool pass, std::string detail = "") {
    rep.checks.push_back({std::move(name), pass, std::move(detail)});
  };

  // H1: n(0) > 0, a root xbar, n > 0 below it and n < 0 beyond.
  double xbar = 0.0;
  bool have_xbar = false;
  try {
    xbar = find_xbar(model.growth());
    have_xbar = true;
  } catch (const NumericError &e) {
    add("H1 growth sign structure", false, e.what());
  }
  if (have_xbar) {
    bool ok = true;
    std::string detail;
    const double margin = 1e-6 * xbar;
    for (int i = 0; i <= grid && ok; ++i) {
      const double x = (xbar - margin) * i / grid;
      if (!(model.growth()(x) > 0.0)) {
        ok = false;
        detail = "n <= 0 at x = " + std::to_string(x) + " below xbar";
      }
    }
    for (int i = 1; i <= grid && ok; ++i) {
      const double x = xbar + margin + (xbar - margin) * i / grid;
      if (!(model.growth()(x) < 0.0)) {
        ok = false;
        detail = "n >= 0 at x = " + std::to_string(x) + " beyond xbar";
      }
    }
    add("H1 growth sign structure", ok, detail);
  }

  // Box for the remaining grids; falls back to crude scales when the
  // invariant-region bounds are unavailable.
  double y_hi = 100.0, v_hi = 100.0, z_hi = 100.0;
  if (have_xbar) {
    try {
      const GammaBounds gb = gamma_bounds(model);
      y_hi = gb.y_max;
      v_hi = gb.v_max;
      z_hi = gb.z_max;
    } catch (const Error &) {
    }
  }
  const double x_hi = have_xbar ? xbar : 1000.0;

  // H2 for both responses: phi(0) = 0, strict increase, phi >= k_lower y,
  // inverse consistency.
  auto check_response = [&](const char *name, const ResponseFunction &resp, double hi) {
    bool ok = true;
    std::string detail;
    if (std::abs(resp(0.0)) > 1e-12) {
      ok = false;
      detail = "phi(0) != 0";
    }
    double prev = 0.0;
    for (int i = 1; i <= grid && ok; ++i) {
      const double y = hi * i / grid;
      const double val = resp(y);
      if (!(val > prev)) {
        ok = false;
        detail = "not strictly increasing at y = " + std::to_string(y);
      } else if (val < resp.lower_slope() * y * (1.0 - 1e-12)) {
        ok = false;
        detail = "phi(y) < k_lower * y at y = " + std::to_string(y);
      }
      prev = val;
    }
    for (int i = 1; i <= grid && ok; ++i) {
      const double w = resp(hi) * i / grid;
      const double round_trip = resp(resp.inverse(w));
      if (std::abs(round_trip - w) > 1e-10 * std::max(1.0, std::abs(w))) {
        ok = false;
        detail = "inverse mismatch at w = " + std::to_string(w);
      }
    }
    add(name, ok, detail);
  };
  check_response("H2 phi1", model.phi1(), y_hi);
  check_response("H2 phi2", model.phi2(), z_hi);

  // Incidence: finite and nonnegative on the box, f(0,y,v) = 0, strictly
  // increasing in x (interior y, v), non-increasing in y and v.
  {
    bool eval_ok = true, i_ok = true, ii_ok = true, iii_ok = true;
    std::string eval_d, i_d, ii_d, iii_d;
    const auto &f = model.incidence();
    for (int iy = 0; iy <= grid; ++iy) {
      const double y = y_hi * iy / grid;
      for (int iv = 0; iv <= grid; ++iv) {
        const double v = v_hi * iv / grid;
        double prev_x = 0.0;
        for (int ix = 0; ix <= grid; ++ix) {
          const double x = x_hi * ix / grid;
          const double val = f(x, y, v);
          if (eval_ok && (!std::isfinite(val) || val < 0.0)) {
            eval_ok = false;
            eval_d = "f not finite/nonnegative at " + point3(x, y, v);
          }
          if (i_ok && ix == 0 && std::abs(val) > 1e-12) {
            i_ok = false;
            i_d = "f(0,y,v) != 0 at " + point3(x, y, v);
          }
          if (ii_ok && ix > 0 && iy > 0 && iv > 0 && !(val > prev_x)) {
            ii_ok = false;
            ii_d = "f not strictly increasing in x at " + point3(x, y, v);
          }
          prev_x = val;
        }
      }
    }
    const double step_y = y_hi / grid, step_v = v_hi / grid;
    for (int ix = 1; ix <= grid && iii_ok; ++ix) {
      const double x = x_hi * ix / grid;
      for (int iy = 0; iy < grid && iii_ok; ++iy) {
        for (int iv = 0; iv < grid && iii_ok; ++iv) {
          const double y = y_hi * iy / grid, v = v_hi * iv / grid;
          const double base = f(x, y, v);
          const double slack = 1e-12 * std::max(1.0, std::abs(base));
          if (f(x, y + step_y, v) > base + slack) {
            iii_ok = false;
            iii_d = "f increases in y at " + point3(x, y, v);
          } else if (f(x, y, v + step_v) > base + slack) {
            iii_ok = false;
            iii_d = "f increases in v at " + point3(x, y, v);
          }
        }
      }
    }
    add("incidence evaluable on the feasible box", eval_ok, eval_d);
    add("incidence i) f(0,y,v) = 0", i_ok, i_d);
    add("incidence ii) strictly increasing in x", ii_ok, ii_d);
    add("incidence iii) non-increasing in y and v", iii_ok, iii_d);
  }

  // H3/H4: the immune term is the product phi1(y) phi2(z) by construction.
  add("H3/H4 immune term w = phi1(y) phi2(z)", true, "structural");
  return rep;
}

} // namespace virodyn
