#include "integrator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "equilibria.hpp"
#include "errors.hpp"

namespace virodyn {

namespace {

constexpr double kPositivityFloor = -1e-9;

State hermite(const State &s0, const State &d0, const State &s1, const State &d1, double h,
              double th) {
  const double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
  const double h10 = th * (1.0 - th) * (1.0 - th);
  const double h01 = th * th * (3.0 - 2.0 * th);
  const double h11 = th * th * (th - 1.0);
  return h00 * s0 + (h10 * h) * d0 + h01 * s1 + (h11 * h) * d1;
}

} // namespace

HistoryFunction HistoryFunction::constant(State s) {
  HistoryFunction h;
  h.states_ = {s};
  return h;
}

HistoryFunction HistoryFunction::piecewise_linear(std::vector<double> times,
                                                  std::vector<State> states) {
  if (times.size() < 2 || times.size() != states.size())
    throw InvalidArgumentError("history: need >= 2 breakpoints with matching states");
  if (std::abs(times.back()) > 1e-12)
    throw InvalidArgumentError("history: breakpoints must end at 0");
  for (std::size_t i = 0; i + 1 < times.size(); ++i)
    if (!(times[i] < times[i + 1]))
      throw InvalidArgumentError("history: breakpoints must be strictly ascending");
  for (const State &s : states)
    if (min_component(s) < 0.0 || !all_finite(s))
      throw InvalidArgumentError("history: states must be finite and nonnegative");
  HistoryFunction h;
  h.domain_min_ = times.front();
  h.times_ = std::move(times);
  h.states_ = std::move(states);
  return h;
}

State HistoryFunction::operator()(double t) const {
  if (times_.empty()) return states_.front();
  if (t < domain_min_ - 1e-9 * std::max(1.0, std::abs(domain_min_))) {
    std::ostringstream os;
    os << "history: lookup at t = " << t << " below the history domain [" << domain_min_ << ", 0]";
    throw InsufficientHistoryError(os.str());
  }
  if (t <= times_.front()) return states_.front();
  if (t >= times_.back()) return states_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
  const double w = (t - times_[i]) / (times_[i + 1] - times_[i]);
  return (1.0 - w) * states_[i] + w * states_[i + 1];
}

State Trajectory::eval(double t) const {
  if (t < t0_) return history_(t);
  const std::size_t last = states_.size() - 1;
  double u = (t - t0_) / h_;
  auto i = static_cast<std::size_t>(std::max(0.0, std::floor(u)));
  if (i >= last) i = last - 1; // extrapolate the final segment past t_end
  double th = u - static_cast<double>(i);
  if (th < 1e-12) return states_[i];
  if (std::abs(th - 1.0) < 1e-12) return states_[i + 1];
  return hermite(states_[i], derivs_[i], states_[i + 1], derivs_[i + 1], h_, th);
}

// Growing trajectory with the predictor extension used for stage lookups:
// inside completed segments this is the final dense output; beyond the last
// node it extends the last completed cubic (first step: linear in D0).
class TrajectoryBuilder {
public:
  TrajectoryBuilder(double t0, double h, HistoryFunction hist, std::size_t reserve) {
    tr_.t0_ = t0;
    tr_.h_ = h;
    tr_.history_ = std::move(hist);
    tr_.states_.reserve(reserve);
    tr_.derivs_.reserve(reserve);
  }

  void push(const State &s, const State &d) {
    tr_.states_.push_back(s);
    tr_.derivs_.push_back(d);
  }

  void set_deriv(std::size_t i, const State &d) { tr_.derivs_[i] = d; }

  std::size_t nodes() const { return tr_.states_.size(); }
  const State &state(std::size_t i) const { return tr_.states_[i]; }

  State eval(double t) const {
    if (t < tr_.t0_) return tr_.history_(t);
    const std::size_t last = tr_.states_.size() - 1;
    double u = (t - tr_.t0_) / tr_.h_;
    auto i = static_cast<std::size_t>(std::max(0.0, std::floor(u)));
    if (last == 0) {
      // no completed segment yet: linear predictor from the initial node
      return tr_.states_[0] + (t - tr_.t0_) * tr_.derivs_[0];
    }
    if (i >= last) i = last - 1;
    const double th = u - static_cast<double>(i);
    return hermite(tr_.states_[i], tr_.derivs_[i], tr_.states_[i + 1], tr_.derivs_[i + 1], tr_.h_,
                   th);
  }

  Trajectory take() { return std::move(tr_); }

private:
  Trajectory tr_;
};

// History adapter for one RK stage: the stage point itself evaluates to the
// stage state (this is what a Dirac(0) kernel must see), everything earlier
// goes through the builder's dense extension.
struct StageHistory {
  const TrajectoryBuilder &tb;
  double t_stage;
  State s_stage;

  State operator()(double t) const {
    if (t == t_stage) return s_stage;
    return tb.eval(t);
  }
};

namespace {

void check_state(const State &s, double t) {
  if (!all_finite(s)) {
    std::ostringstream os;
    os << "integration diverged: non-finite state at t = " << t;
    throw NumericError(os.str());
  }
  if (min_component(s) < kPositivityFloor) {
    std::ostringstream os;
    int comp = 0;
    for (int i = 1; i < 4; ++i)
      if (s[i] < s[comp]) comp = i;
    os << "positivity breach at t = " << t << ": component " << "xyvz"[comp] << " = " << s[comp];
    throw NumericError(os.str());
  }
}

} // namespace

Trajectory integrate(const ModelSpec &model, const HistoryFunction &history, double t_end,
                     double h, const QuadratureSpec &quad) {
  if (!(h > 0.0)) throw InvalidArgumentError("integrate: step h must be > 0");
  if (!(t_end >= h)) throw InvalidArgumentError("integrate: t_end must be >= h");
  quad.validate();
  const double tau_max = model.tau_max(quad.tail_mass_epsilon);
  if (history.domain_min() > -tau_max + 1e-12 && tau_max > 0.0) {
    std::ostringstream os;
    os << "integrate: history starts at " << history.domain_min()
       << " but the kernels reach back " << tau_max;
    throw InsufficientHistoryError(os.str());
  }

  const auto steps = static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));
  TrajectoryBuilder tb(0.0, h, history, steps + 1);

  const State s0 = history(0.0);
  check_state(s0, 0.0);
  tb.push(s0, State{});
  const State d0 = rhs_t(model, 0.0, StageHistory{tb, 0.0, s0}, quad);
  tb.set_deriv(0, d0);

  State s = s0;
  State k1 = d0;
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = h * static_cast<double>(n);
    const State k2 =
        rhs_t(model, t + 0.5 * h, StageHistory{tb, t + 0.5 * h, s + (0.5 * h) * k1}, quad);
    const State k3 =
        rhs_t(model, t + 0.5 * h, StageHistory{tb, t + 0.5 * h, s + (0.5 * h) * k2}, quad);
    const State k4 = rhs_t(model, t + h, StageHistory{tb, t + h, s + h * k3}, quad);
    State s_next = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_state(s_next, t + h);
    const State d_next = rhs_t(model, t + h, StageHistory{tb, t + h, s_next}, quad);
    tb.push(s_next, d_next);
    s = s_next;
    k1 = d_next; // the acceptance derivative doubles as the next first stage
  }
  return tb.take();
}

namespace {

// inf-norm of the Jacobian of the instantaneous part of the RHS at state s
// (lagged lookups frozen at s; a Dirac(0) kernel is instantaneous and is
// perturbed along with the state).
double instantaneous_jacobian_norm(const ModelSpec &model, const State &s,
                                   const QuadratureSpec &quad) {
  auto rhs_at = [&](const State &pert) {
    auto hist = [&](double t) { return t == 0.0 ? pert : s; };
    return rhs_t(model, 0.0, hist, quad);
  };
  const State base = rhs_at(s);
  double rows[4] = {0, 0, 0, 0};
  for (int j = 0; j < 4; ++j) {
    State pert = s;
    const double dj = 1e-6 * std::max(1.0, std::abs(s[j]));
    pert[j] += dj;
    const State col = (1.0 / dj) * (rhs_at(pert) - base);
    for (int i = 0; i < 4; ++i) rows[i] += std::abs(col[i]);
  }
  return *std::max_element(rows, rows + 4);
}

} // namespace

double default_step(const ModelSpec &model, const HistoryFunction &history) {
  std::optional<double> tau_min;
  for (const DelayKernel *k : {&model.kernel1(), &model.kernel2(), &model.kernel3()}) {
    if (k->is_dirac() && k->dirac_tau() > 0.0)
      tau_min = tau_min ? std::min(*tau_min, k->dirac_tau()) : k->dirac_tau();
  }
  double h = 0.1;
  if (tau_min) h = std::min(h, *tau_min / 50.0);

  // Explicit RK4 tolerates step * rate only up to ~2.8; sample the
  // instantaneous stiffness at the starting state and the equilibria.
  QuadratureSpec quad;
  std::vector<State> samples{history(0.0)};
  try {
    const EquilibriumReport rep = classify(model);
    samples.push_back(rep.e0);
    if (rep.e1) samples.push_back(*rep.e1);
    if (rep.e2) samples.push_back(*rep.e2);
  } catch (const Error &) {
    // fall back to the starting state alone
  }
  double rate = 10.0;
  for (const State &s : samples)
    rate = std::max(rate, instantaneous_jacobian_norm(model, s, quad));
  h = std::min(h, 2.0 / rate);

  if (tau_min) h = *tau_min / std::ceil(*tau_min / h - 1e-9);
  return h;
}

Trajectory integrate_auto(const ModelSpec &model, const HistoryFunction &history, double t_end,
                          std::optional<double> h, const QuadratureSpec &quad, int max_halvings) {
  double step = h ? *h : default_step(model, history);
  std::string last;
  for (int attempt = 0; attempt <= max_halvings; ++attempt) {
    try {
      return integrate(model, history, t_end, step, quad);
    } catch (const NumericError &e) {
      last = e.what();
      step *= 0.5;
    }
  }
  std::ostringstream os;
  os << "integration failed after " << max_halvings << " step halvings; last error: " << last;
  throw NumericError(os.str());
}

GammaBounds gamma_bounds(const ModelSpec &model) {
  constexpr int kGrid = 256;
  const Parameters &pr = model.params();
  GammaBounds gb;
  gb.x_max = find_xbar(model.growth());

  for (int i = 0; i <= kGrid; ++i)
    gb.m1 = std::max(gb.m1, model.growth()(gb.x_max * i / kGrid));
  const double kl1 = model.phi1().lower_slope();
  const double kl2 = model.phi2().lower_slope();
  gb.mu_bar = std::min(gb.m1 / gb.x_max, pr.a * kl1);
  gb.y_max = 2.0 * gb.m1 * model.g1() / gb.mu_bar;

  for (int i = 0; i <= kGrid; ++i)
    gb.m2 = std::max(gb.m2, model.phi1()(gb.y_max * i / kGrid));
  gb.v_max = pr.k * gb.m2 * model.g2() / pr.u;

  for (int ix = 0; ix <= kGrid; ++ix) {
    const double x = gb.x_max * ix / kGrid;
    for (int iy = 0; iy <= kGrid; ++iy) {
      const double y = gb.y_max * iy / kGrid;
      for (int iv = 0; iv <= kGrid; ++iv) {
        const double v = gb.v_max * iv / kGrid;
        gb.m3 = std::max(gb.m3, model.incidence()(x, y, v) * v);
      }
    }
  }
  gb.mu_tilde = std::min(pr.a * kl1, pr.b * kl2);
  gb.z_max = pr.c * model.g1() * model.g3() * gb.m3 / (pr.p * gb.mu_tilde);

  for (double b : {gb.x_max, gb.y_max, gb.v_max, gb.z_max})
    if (!(b > 0.0) || !std::isfinite(b))
      throw NumericError("gamma_bounds: bounds must be positive and finite");
  return gb;
}

MonitorReport monitor(const Trajectory &traj, const GammaBounds &bounds) {
  MonitorReport rep;
  rep.bounds = bounds;
  rep.min_components = traj.state(0);
  for (int c = 0; c < 4; ++c) rep.min_times[c] = traj.time(0);

  const double span = traj.t_end() - traj.t_begin();
  const double tail_start = traj.t_begin() + 0.8 * span;
  rep.eventually_bounded = true;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const State &s = traj.state(i);
    const double t = traj.time(i);
    for (int c = 0; c < 4; ++c) {
      if (s[c] < rep.min_components[c]) {
        rep.min_components[c] = s[c];
        rep.min_times[c] = t;
      }
      const double slack = 1e-9 + 1e-6 * bounds.bound(c);
      if (s[c] > bounds.bound(c) + slack) {
        if (!rep.exceeded[c]) {
          rep.exceeded[c] = true;
          rep.first_exceed_time[c] = t;
        }
        if (t >= tail_start) rep.eventually_bounded = false;
      }
    }
  }
  rep.positivity_ok = min_component(rep.min_components) >= kPositivityFloor;
  return rep;
}

std::string MonitorReport::text() const {
  static const char *names = "xyvz";
  std::ostringstream os;
  os << "Invariant-region monitor\n";
  os << std::setprecision(6);
  os << "  bounds: x <= " << bounds.x_max << ", y <= " << bounds.y_max << ", v <= " << bounds.v_max
     << ", z <= " << bounds.z_max << "\n";
  for (int c = 0; c < 4; ++c) {
    os << "  min " << names[c] << " = " << min_components[c] << " at t = " << min_times[c];
    if (exceeded[c]) os << "; exceeded its bound first at t = " << first_exceed_time[c];
    os << "\n";
  }
  os << "  positivity: " << (positivity_ok ? "ok" : "BREACHED") << "\n";
  os << "  eventually bounded: " << (eventually_bounded ? "yes" : "no") << "\n";
  return os.str();
}

std::vector<std::pair<double, double>> distance_series(const Trajectory &traj, const State &e) {
  std::vector<std::pair<double, double>> out;
  out.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i)
    out.emplace_back(traj.time(i), max_norm(traj.state(i) - e));
  return out;
}

} // namespace virodyn
