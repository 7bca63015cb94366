#pragma once

#include <string>
#include <vector>

#include "integrator.hpp"
#include "model.hpp"

namespace virodyn {

// Which global-stability functional is evaluated: the infection-free,
// CTL-free infected, or CTL-activated construction.
enum class Functional { VE0, VE1, VE2 };

const char *functional_name(Functional f);

// Volterra weight u - 1 - ln u: zero exactly at u = 1, positive elsewhere.
double volterra_h(double u);

// Evaluates the functional at time t along the trajectory.  Point terms are
// read from the dense output; state-space integrals use composite Simpson
// with quad.panels; delay windows [t - tau, t] integrate the dense cubic
// segment-exactly, and non-Dirac kernels add an outer Simpson over tau.
// Requires t >= t_begin + tau_max so the windows stay on stored data.
double lyapunov_value(Functional id, const ModelSpec &model, const State &e,
                      const Trajectory &traj, double t, const QuadratureSpec &quad);

struct LyapunovAudit {
  Functional id = Functional::VE0;
  State target;
  std::vector<double> times;
  std::vector<double> values;
  double initial_value = 0.0;
  double final_value = 0.0;
  double max_increase = 0.0; // largest single-step increase after the transient
  double rel_increase = 0.0; // max_increase / (initial_value + 1)
  double decrease_tol = 0.0;
  double final_distance = 0.0; // max-norm distance to the target, relative
  double convergence_tol = 0.0;
  bool decrease_ok = false;
  bool converged = false;
  bool pass = false;

  std::string text() const;
};

// Samples the functional at 200 evenly spaced times after the transient and
// checks decrease (every increase <= tol * (initial value + 1)) plus
// convergence of the trajectory to the target equilibrium.  VE2 refuses to
// run unless the z-equation is undelayed (kernel3 = Dirac(0)), mirroring the
// hypothesis under which that functional decays.
LyapunovAudit audit(Functional id, const ModelSpec &model, const State &e, const Trajectory &traj,
                    const QuadratureSpec &quad, double transient_fraction = 0.3, double tol = 1e-4,
                    double convergence_tol = 0.05);

} // namespace virodyn
