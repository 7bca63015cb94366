#include "verifier.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "errors.hpp"
#include "numerics.hpp"

namespace virodyn {

namespace {

// integral of g over [a, b] following the trajectory's segment structure:
// 2-panel Simpson per overlapped piece, exact for the cubic dense output.
template <typename G>
double integrate_on_trajectory(const Trajectory &tr, double a, double b, const G &g) {
  if (b <= a) return 0.0;
  const double t0 = tr.t_begin();
  const double h = tr.step();
  const auto last = static_cast<long>(tr.size()) - 1;
  auto seg_of = [&](double t) {
    auto i = static_cast<long>(std::floor((t - t0) / h));
    return std::max(0L, std::min(i, last - 1));
  };
  double total = 0.0;
  for (long i = seg_of(a);; ++i) {
    const double seg_lo = t0 + h * static_cast<double>(i);
    const double lo = std::max(a, seg_lo);
    const double hi = std::min(b, seg_lo + h);
    if (hi > lo)
      total += (hi - lo) / 6.0 * (g(lo) + 4.0 * g(0.5 * (lo + hi)) + g(hi));
    if (seg_lo + h >= b || i >= last - 1) break;
  }
  return total;
}

// W = integral f(tau) e^{-alpha tau} [ integral_{t-tau}^{t} g(s) ds ] dtau.
template <typename G>
double delay_window_term(const DelayKernel &kernel, double alpha, const Trajectory &tr, double t,
                         const QuadratureSpec &quad, const G &g) {
  if (kernel.is_dirac()) {
    const double tau = kernel.dirac_tau();
    if (tau == 0.0) return 0.0;
    return std::exp(-alpha * tau) * integrate_on_trajectory(tr, t - tau, t, g);
  }
  const double horizon = kernel.truncation_horizon(quad.tail_mass_epsilon);
  return simpson(
      [&](double tau) {
        return kernel.density(tau) * std::exp(-alpha * tau) *
               integrate_on_trajectory(tr, t - tau, t, g);
      },
      0.0, horizon, quad.panels);
}

struct Pieces {
  const ModelSpec &m;
  const Trajectory &tr;

  double fv(double s) const {
    const State q = tr.eval(s);
    return m.incidence()(q.x, q.y, q.v) * q.v;
  }
  double phi1y(double s) const { return m.phi1()(tr.eval(s).y); }
  double w(double s) const {
    const State q = tr.eval(s);
    return m.phi1()(q.y) * m.phi2()(q.z);
  }
};

double checked_ratio(double num, double den, const char *what, double t) {
  if (!(den > 0.0) || !(num > 0.0)) {
    std::ostringstream os;
    os << "lyapunov: nonpositive " << what << " near t = " << t << " (value " << num / den << ")";
    throw DomainError(os.str());
  }
  return num / den;
}

} // namespace

const char *functional_name(Functional f) {
  switch (f) {
    case Functional::VE0: return "V_E0";
    case Functional::VE1: return "V_E1";
    case Functional::VE2: return "V_E2";
  }
  return "?";
}

double volterra_h(double u) {
  if (!(u > 0.0)) {
    std::ostringstream os;
    os << "volterra_h: argument must be > 0, got " << u;
    throw DomainError(os.str());
  }
  return u - 1.0 - std::log(u);
}

double lyapunov_value(Functional id, const ModelSpec &m, const State &e, const Trajectory &tr,
                      double t, const QuadratureSpec &quad) {
  const Parameters &pr = m.params();
  const double g1 = m.g1(), g2 = m.g2(), g3 = m.g3();
  const double tau_max = m.tau_max(quad.tail_mass_epsilon);
  if (t < tr.t_begin() + tau_max - 1e-9 || t > tr.t_end() + 1e-9) {
    std::ostringstream os;
    os << "lyapunov: sample t = " << t << " outside [t_begin + tau_max, t_end] = ["
       << tr.t_begin() + tau_max << ", " << tr.t_end() << "]";
    throw InsufficientHistoryError(os.str());
  }

  const State s = tr.eval(t);
  const Pieces pc{m, tr};

  // x - xe - integral_{xe}^{x} f(xe, ye, ve) / f(sx, ye, ve) dsx
  const double f_e = m.incidence()(e.x, e.y, e.v);
  const double x_part =
      (s.x - e.x) -
      simpson([&](double sx) { return f_e / m.incidence()(sx, e.y, e.v); }, e.x, s.x, quad.panels);

  double value = x_part;
  switch (id) {
    case Functional::VE0: {
      value += s.y / g1 + pr.a * s.v / (pr.k * g1 * g2) + pr.p * s.z / (pr.c * g1 * g3);
      value += (1.0 / g1) * delay_window_term(m.kernel1(), pr.alpha1, tr, t, quad,
                                              [&](double ss) { return pc.fv(ss); });
      value += (pr.a / (g1 * g2)) * delay_window_term(m.kernel2(), pr.alpha2, tr, t, quad,
                                                      [&](double ss) { return pc.phi1y(ss); });
      value += (pr.p / (g1 * g3)) * delay_window_term(m.kernel3(), 0.0, tr, t, quad,
                                                      [&](double ss) { return pc.w(ss); });
      break;
    }
    case Functional::VE1:
    case Functional::VE2: {
      const double phi1_e = m.phi1()(e.y);
      const double flux_e = f_e * e.v; // equilibrium infection flux f(E) vE
      // v-line coefficient: a/(k G1 G2) at E1, (a + p phi2(z2))/(k G1 G2) at E2
      const double cv = (id == Functional::VE1 ? pr.a : pr.a + pr.p * m.phi2()(e.z)) /
                        (pr.k * g1 * g2);

      value += (1.0 / g1) *
               simpson(
                   [&](double sig) {
                     return 1.0 - phi1_e / checked_ratio(m.phi1()(sig), 1.0, "phi1(sigma)", t);
                   },
                   e.y, s.y, quad.panels);
      value += cv * simpson(
                        [&](double sig) {
                          return 1.0 - e.v / checked_ratio(sig, 1.0, "v integration variable", t);
                        },
                        e.v, s.v, quad.panels);
      if (id == Functional::VE1) {
        value += pr.p * s.z / (pr.c * g1 * g3);
      } else {
        const double phi2_e = m.phi2()(e.z);
        value += (pr.p / (pr.c * g1)) *
                 simpson(
                     [&](double sig) {
                       return 1.0 - phi2_e / checked_ratio(m.phi2()(sig), 1.0, "phi2(sigma)", t);
                     },
                     e.z, s.z, quad.panels);
      }

      value += (flux_e / g1) *
               delay_window_term(m.kernel1(), pr.alpha1, tr, t, quad, [&](double ss) {
                 return volterra_h(checked_ratio(pc.fv(ss), flux_e, "infection-flux ratio", ss));
               });
      // matches the v-line coefficient: cv * k * phi1(yE) = coeff * G2 window
      value += (cv * pr.k * phi1_e / g2) *
               delay_window_term(m.kernel2(), pr.alpha2, tr, t, quad, [&](double ss) {
                 return volterra_h(checked_ratio(pc.phi1y(ss), phi1_e, "phi1 ratio", ss));
               });
      if (id == Functional::VE1)
        value += (pr.p / (g1 * g3)) * delay_window_term(m.kernel3(), 0.0, tr, t, quad,
                                                        [&](double ss) { return pc.w(ss); });
      break;
    }
  }
  if (!std::isfinite(value)) throw NumericError("lyapunov: non-finite functional value");
  return value;
}

LyapunovAudit audit(Functional id, const ModelSpec &m, const State &e, const Trajectory &tr,
                    const QuadratureSpec &quad, double transient_fraction, double tol,
                    double convergence_tol) {
  if (id == Functional::VE2 &&
      !(m.kernel3().is_dirac() && m.kernel3().dirac_tau() == 0.0))
    throw InvalidArgumentError(
        "V_E2 audit requires an undelayed z-equation (kernel3 = dirac with tau 0)");
  if (!(transient_fraction >= 0.0 && transient_fraction < 1.0))
    throw InvalidArgumentError("audit: transient_fraction must lie in [0, 1)");

  const double tau_max = m.tau_max(quad.tail_mass_epsilon);
  const double t0 = tr.t_begin(), t1 = tr.t_end();
  const double t_lo = std::max(t0 + transient_fraction * (t1 - t0), t0 + tau_max);
  if (!(t_lo < t1))
    throw InsufficientHistoryError("audit: trajectory too short for a post-transient window");

  LyapunovAudit a;
  a.id = id;
  a.target = e;
  constexpr int kSamples = 200;
  a.times.reserve(kSamples);
  a.values.reserve(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    const double t = t_lo + (t1 - t_lo) * i / (kSamples - 1);
    a.times.push_back(t);
    a.values.push_back(lyapunov_value(id, m, e, tr, t, quad));
  }
  a.initial_value = a.values.front();
  a.final_value = a.values.back();
  for (std::size_t i = 1; i < a.values.size(); ++i)
    a.max_increase = std::max(a.max_increase, a.values[i] - a.values[i - 1]);
  a.max_increase = std::max(a.max_increase, 0.0);
  a.decrease_tol = tol * (a.initial_value + 1.0);
  a.rel_increase = a.max_increase / (a.initial_value + 1.0);
  a.decrease_ok = a.max_increase <= a.decrease_tol;

  a.final_distance = max_norm(tr.final_state() - e) / std::max(1.0, max_norm(e));
  a.convergence_tol = convergence_tol;
  a.converged = a.final_distance <= convergence_tol;
  a.pass = a.decrease_ok && a.converged;
  return a;
}

std::string LyapunovAudit::text() const {
  std::ostringstream os;
  os << "Lyapunov audit: " << functional_name(id) << "\n";
  os << std::setprecision(6) << std::scientific;
  os << "  target equilibrium = (" << target.x << ", " << target.y << ", " << target.v << ", "
     << target.z << ")\n";
  os << "  samples = " << values.size() << " on [" << times.front() << ", " << times.back()
     << "]\n";
  os << "  V(first) = " << initial_value << "   V(last) = " << final_value << "\n";
  os << "  max single-step increase = " << max_increase << " (tolerance " << decrease_tol
     << ")  -> " << (decrease_ok ? "ok" : "VIOLATED") << "\n";
  os << "  final relative distance to target = " << final_distance << " (tolerance "
     << convergence_tol << ")  -> " << (converged ? "converged" : "NOT CONVERGED") << "\n";
  os << "  verdict: " << (pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

} // namespace virodyn
