#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "model.hpp"

namespace virodyn {

// Initial data on (-inf, 0]: constant, or piecewise linear between
// breakpoints ending at 0.  Piecewise histories throw
// InsufficientHistoryError below their first breakpoint.
class HistoryFunction {
public:
  static HistoryFunction constant(State s);
  static HistoryFunction piecewise_linear(std::vector<double> times, std::vector<State> states);

  State operator()(double t) const;
  // -inf for constant histories.
  double domain_min() const { return domain_min_; }

private:
  std::vector<double> times_;
  std::vector<State> states_;
  double domain_min_ = -std::numeric_limits<double>::infinity();
};

// Dense-output solution on a uniform grid: states and derivatives at the
// nodes, cubic Hermite inside each segment, the attached history below
// t_begin.  Immutable once integration completes.
class Trajectory {
public:
  double t_begin() const { return t0_; }
  double t_end() const { return t0_ + h_ * (states_.size() - 1); }
  double step() const { return h_; }
  std::size_t size() const { return states_.size(); }

  double time(std::size_t i) const { return t0_ + h_ * i; }
  const State &state(std::size_t i) const { return states_[i]; }
  const State &deriv(std::size_t i) const { return derivs_[i]; }
  const State &final_state() const { return states_.back(); }
  const HistoryFunction &history() const { return history_; }

  // t < t_begin falls through to the history; t past the last node
  // extrapolates the final segment.
  State eval(double t) const;

private:
  friend class TrajectoryBuilder;
  double t0_ = 0.0, h_ = 0.0;
  std::vector<State> states_, derivs_;
  HistoryFunction history_ = HistoryFunction::constant(State{});
};

// Eventual invariant box: x <= xbar, y <= 2 M1 G1 / mu_bar,
// v <= k M2 G2 / u, z <= c G1 G3 M3 / (p mu_tilde), with the suprema taken
// on 256-point grids.
struct GammaBounds {
  double x_max = 0.0, y_max = 0.0, v_max = 0.0, z_max = 0.0;
  double m1 = 0.0, m2 = 0.0, m3 = 0.0;
  double mu_bar = 0.0, mu_tilde = 0.0;

  double bound(int component) const {
    return component == 0 ? x_max : component == 1 ? y_max : component == 2 ? v_max : z_max;
  }
};

GammaBounds gamma_bounds(const ModelSpec &model);

// Method of steps: classical RK4 on a fixed grid, lagged terms read through
// the cubic Hermite dense output (predictor extension of the last completed
// segment during a step).  Aborts with NumericError on a positivity breach
// below -1e-9 or a non-finite state.
Trajectory integrate(const ModelSpec &model, const HistoryFunction &history, double t_end,
                     double h, const QuadratureSpec &quad = {});

// Stability-aware default step: min(tau_min/50, 0.1) further capped by
// 2/L where L bounds the instantaneous-part Jacobian sampled at the initial
// state and the equilibria, snapped so the smallest positive Dirac delay is
// an exact multiple.
double default_step(const ModelSpec &model, const HistoryFunction &history);

// integrate() with the retry ladder: each positivity breach or divergence
// halves the step, up to max_halvings.
Trajectory integrate_auto(const ModelSpec &model, const HistoryFunction &history, double t_end,
                          std::optional<double> h, const QuadratureSpec &quad = {},
                          int max_halvings = 16);

struct MonitorReport {
  State min_components;
  double min_times[4] = {0, 0, 0, 0};
  bool exceeded[4] = {false, false, false, false};
  double first_exceed_time[4] = {0, 0, 0, 0};
  bool positivity_ok = false;    // no component below -1e-9 anywhere
  bool eventually_bounded = false; // within bounds over the final 20% of the span
  GammaBounds bounds;

  std::string text() const;
};

MonitorReport monitor(const Trajectory &traj, const GammaBounds &bounds);

// (time, max-norm distance to e) at the grid points.
std::vector<std::pair<double, double>> distance_series(const Trajectory &traj, const State &e);

} // namespace virodyn
