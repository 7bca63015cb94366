// Acceptance suite: every top-level requirement, one PASS/FAIL line each.
// Exit status is the number of failing criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "equilibria.hpp"
#include "integrator.hpp"
#include "scenario.hpp"
#include "verifier.hpp"

using namespace virodyn;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void criterion(int id, const std::string &what, bool ok, const std::string &detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(),
              detail.c_str());
  if (!ok) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string scenario_path(const char *name) {
  return std::string(VIRODYN_SCENARIO_DIR) + "/" + name;
}

bool close_abs(double got, double want, double tol) { return std::abs(got - want) <= tol; }
bool close_rel(double got, double want, double tol) {
  return std::abs(got - want) <= tol * std::abs(want);
}

double rel_distance(const State &s, const State &e) {
  return max_norm(s - e) / std::max(1.0, max_norm(e));
}

struct Fmt {
  char buf[256];
  const char *operator()(const char *fmt, ...) {
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
  }
};

} // namespace

int main() {
  Fmt fmt;

  const Scenario ex1 = Scenario::load(scenario_path("example1_beta0003.cfg"));
  const Scenario ex2a = Scenario::load(scenario_path("example2_beta00096.cfg"));
  const Scenario ex2b = Scenario::load(scenario_path("example2_beta1.cfg"));
  const Scenario ex3 = Scenario::load(scenario_path("example3_beta01.cfg"));

  // 1. equilibrium regression on the ratio-dependent example
  {
    const auto t0 = Clock::now();
    const EquilibriumReport rep = ex1.analyze();
    const double r0_coef = rep.r0 / 0.003;
    const double elapsed = seconds_since(t0);
    const bool ok = close_abs(rep.xbar, 666.6666, 1e-3) &&
                    close_rel(r0_coef, 105.108412, 1e-4) && elapsed < 1.0;
    criterion(1, "equilibrium regression (xbar, R0 coefficient)", ok,
              fmt("xbar = %.6f, R0/beta = %.6f, %.2fs", rep.xbar, r0_coef, elapsed));
  }

  // 2. R1 and both infected equilibria across the beta values
  {
    const auto t0 = Clock::now();
    const ModelSpec low = ex2a.build_model();
    const double r1_low = compute_r1(low);
    const auto e1_low = solve_e1(low);

    const ModelSpec high = ex2b.build_model();
    const double r1_high = compute_r1(high);
    const auto e1_high = solve_e1(high);
    const auto e2_high = solve_e2(high);
    const double elapsed = seconds_since(t0);

    bool ok = close_abs(r1_low, 0.97091, 1e-4) && e1_low && e1_high && e2_high &&
              close_abs(r1_high, 6.088529, 1e-3) && elapsed < 1.0;
    if (ok) {
      const State want_low{659.461141, 5.962025, 0.826548, 0.0};
      const State want_e1{1.461792, 152.184859, 21.098236, 0.0};
      const State want_e2{1.537198, 25.0, 3.465889, 4.070823};
      ok = max_norm(*e1_low - want_low) <= 1e-3 && max_norm(*e1_high - want_e1) <= 1e-2 &&
           max_norm(*e2_high - want_e2) <= 1e-3;
    }
    criterion(2, "R1 and equilibria at beta = 0.0096 and beta = 1", ok,
              fmt("R1 = %.5f / %.6f, %.2fs", r1_low, r1_high, elapsed));
  }

  // 3. saturating-incidence regression
  {
    const ModelSpec m = ex3.build_model();
    const double r0_coef = compute_r0(m) / 0.1;
    const double r1 = compute_r1(m);
    const auto e2 = solve_e2(m);
    const State want{481.791432, 25.0, 3.465889, 3.138764};
    const bool ok = close_rel(r0_coef, 70.0722745, 1e-4) && close_abs(r1, 4.923456, 1e-3) &&
                    e2 && max_norm(*e2 - want) <= 1e-3;
    criterion(3, "saturating-incidence regression (R0 coefficient, R1, E2)", ok,
              fmt("R0/beta = %.7f, R1 = %.6f", r0_coef, r1));
  }

  // 4. bisection for the R0 = 1 threshold in beta
  {
    auto r0_at = [&](double beta) {
      Scenario sc = ex1;
      sc.set("incidence.beta", beta);
      return compute_r0(sc.build_model());
    };
    double lo = 0.003, hi = 1.0;
    for (int i = 0; i < 60 && hi - lo > 1e-10; ++i) {
      const double mid = 0.5 * (lo + hi);
      (r0_at(mid) < 1.0 ? lo : hi) = mid;
    }
    const double beta_star = 0.5 * (lo + hi);
    criterion(4, "R0 = 1 threshold located by bisection on beta",
              close_abs(beta_star, 0.009514, 1e-5), fmt("beta* = %.9f", beta_star));
  }

  // 5. convergence regimes from the reference constant history, default step
  struct Run {
    const char *name;
    const Scenario *sc;
    Functional functional;
    double tol;
    std::optional<Trajectory> traj;
    State target;
    EquilibriumReport rep;
  };
  std::vector<Run> runs = {
      {"beta = 0.003 to E0 by t = 600", &ex1, Functional::VE0, 0.01, {}, {}, {}},
      {"beta = 0.0096 to E1 by t = 3000", &ex2a, Functional::VE1, 0.05, {}, {}, {}},
      {"beta = 1 to E2 by t = 2000", &ex2b, Functional::VE2, 0.02, {}, {}, {}},
      {"example-3 beta = 0.1 to E2 by t = 3000", &ex3, Functional::VE2, 0.02, {}, {}, {}},
  };
  {
    bool ok = true;
    std::string detail;
    for (Run &run : runs) {
      const auto t0 = Clock::now();
      run.rep = classify(run.sc->build_model());
      run.target = run.functional == Functional::VE0   ? run.rep.e0
                   : run.functional == Functional::VE1 ? *run.rep.e1
                                                       : *run.rep.e2;
      run.traj = run.sc->simulate();
      const double elapsed = seconds_since(t0);
      const double dist = rel_distance(run.traj->final_state(), run.target);
      const bool this_ok = dist <= run.tol && elapsed < 30.0;
      ok = ok && this_ok;
      detail += fmt("%s dist %.4g h %.3g %.1fs; ", this_ok ? "ok" : "MISS", dist,
                    run.traj->step(), elapsed);
    }
    criterion(5, "convergence regimes at default step", ok, detail);
  }

  // 6. Lyapunov audits: matching functionals decrease, the mismatch fails
  {
    bool ok = true;
    std::string detail;
    for (Run &run : runs) {
      const LyapunovAudit a = audit(run.functional, run.sc->build_model(), run.target, *run.traj,
                                    run.sc->run_settings().quad);
      ok = ok && a.decrease_ok && a.rel_increase <= 1e-4 && a.converged;
      detail += fmt("%s max-inc %.2e; ", functional_name(run.functional), a.rel_increase);
    }
    const LyapunovAudit mismatch =
        audit(Functional::VE0, ex2b.build_model(), runs[2].rep.e0, *runs[2].traj,
              ex2b.run_settings().quad);
    ok = ok && !mismatch.converged && !mismatch.pass;
    detail += fmt("mismatched V_E0 on the beta = 1 run: %s",
                  mismatch.converged ? "UNEXPECTEDLY CONVERGED" : "fails as required");
    criterion(6, "Lyapunov decrease audits per regime", ok, detail);
  }

  // 7. numerical hygiene
  {
    bool ok = true;
    std::string detail;

    // RK4 self-convergence over the stiff transient window
    {
      const ModelSpec m = ex2b.build_model();
      const HistoryFunction hist = ex2b.build_history();
      const double h0 = 5.0 / 16384;
      const Trajectory t1 = integrate(m, hist, 50.0, h0);
      const Trajectory t2 = integrate(m, hist, 50.0, h0 / 2);
      const Trajectory t3 = integrate(m, hist, 50.0, h0 / 4);
      auto diff = [](const Trajectory &a, const Trajectory &b) {
        double worst = 0.0;
        for (double t = 1.0; t <= 50.0; t += 0.5)
          worst = std::max(worst, max_norm(a.eval(t) - b.eval(t)));
        return worst;
      };
      const double order = std::log2(diff(t1, t2) / diff(t2, t3));
      ok = ok && order >= 3.5;
      detail += fmt("order %.2f; ", order);
    }

    // kernel quadrature against the gamma closed form
    {
      const DelayKernel exact = DelayKernel::gamma(2, 1.0);
      const double hi = exact.truncation_horizon(1e-10);
      const int nodes = 16385;
      std::vector<double> xs(nodes), fs(nodes);
      for (int i = 0; i < nodes; ++i) {
        xs[i] = hi * i / (nodes - 1);
        fs[i] = exact.density(xs[i]);
      }
      double mass = 0.0;
      for (int i = 0; i + 1 < nodes; ++i)
        mass += 0.5 * (fs[i] + fs[i + 1]) * (xs[i + 1] - xs[i]);
      for (double &f : fs) f /= mass;
      const DelayKernel table = DelayKernel::tabulated(xs, fs);
      double worst = 0.0;
      for (double alpha : {0.0, 0.1, 0.5, 1.0})
        worst = std::max(worst,
                         std::abs(table.weighted_mass(alpha) - exact.weighted_mass(alpha)));
      ok = ok && worst <= 1e-6;
      detail += fmt("gamma quad err %.2e; ", worst);
    }

    // positivity floor across all four acceptance trajectories
    {
      double floor = 0.0;
      for (const Run &run : runs)
        for (std::size_t i = 0; i < run.traj->size(); ++i)
          floor = std::min(floor, min_component(run.traj->state(i)));
      ok = ok && floor >= -1e-9;
      detail += fmt("min component %.2e; ", floor);
    }

    // equilibrium residuals and the reproduction-number ordering
    {
      double worst = 0.0;
      bool ordering = true;
      for (const Run &run : runs) {
        const ModelSpec m = run.sc->build_model();
        worst = std::max(worst, equilibrium_residual(m, run.rep.e0));
        if (run.rep.e1) worst = std::max(worst, equilibrium_residual(m, *run.rep.e1));
        if (run.rep.e2) worst = std::max(worst, equilibrium_residual(m, *run.rep.e2));
        ordering = ordering && run.rep.r0 > run.rep.r1;
      }
      ok = ok && worst <= 1e-8 && ordering;
      detail += fmt("residual %.2e; R0 > R1 %s", worst, ordering ? "holds" : "VIOLATED");
    }

    criterion(7, "numerical hygiene", ok, detail);
  }

  std::printf("%d of 7 criteria passed\n", 7 - g_failures);
  return g_failures;
}
