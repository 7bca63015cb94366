#include "equilibria.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "errors.hpp"
#include "rootfind.hpp"

namespace virodyn {

namespace {

constexpr double kThresholdBand = 1e-9; // |R - 1| below this is "at" the threshold

struct CtlSetpoint {
  double yhat, vhat, xhat, r1;
};

// yhat and vhat from equation (4), xhat from H(x) = n(x) - f(x,yhat,vhat)vhat.
CtlSetpoint ctl_setpoint(const ModelSpec &m) {
  const Parameters &pr = m.params();
  CtlSetpoint s{};
  s.yhat = m.phi1().inverse(pr.b / (pr.c * m.g3()));
  if (!std::isfinite(s.yhat) || s.yhat < 0.0)
    throw DomainError("compute_r1: phi1 inverse of b/(c G3) is outside the response domain");
  s.vhat = pr.k * m.phi1()(s.yhat) * m.g2() / pr.u;
  const double xbar = find_xbar(m.growth());
  auto H = [&](double x) { return m.growth()(x) - m.incidence()(x, s.yhat, s.vhat) * s.vhat; };
  const double h_hi = H(xbar);
  if (h_hi > 0.0) {
    std::ostringstream os;
    os << "compute_r1: H has no sign change on (0, xbar): H(0) = " << H(0.0) << ", H(xbar) = "
       << h_hi;
    throw NumericError(os.str());
  }
  s.xhat = h_hi == 0.0 ? xbar : find_root_bracketed(H, 0.0, xbar);
  s.r1 = pr.k * m.g1() * m.g2() * m.incidence()(s.xhat, s.yhat, s.vhat) / (pr.a * pr.u);
  return s;
}

std::string state_str(const State &s) {
  std::ostringstream os;
  os << std::setprecision(9) << std::fixed << "(" << s.x << ", " << s.y << ", " << s.v << ", "
     << s.z << ")";
  return os.str();
}

} // namespace

const char *regime_name(Regime r) {
  switch (r) {
    case Regime::InfectionFree: return "infection_free";
    case Regime::CtlInactivated: return "ctl_inactivated";
    case Regime::CtlActivated: return "ctl_activated";
  }
  return "unknown";
}

double find_xbar(const GrowthFunction &growth, double upper_hint) {
  if (!(growth(0.0) > 0.0)) throw NumericError("find_xbar: H1 violated, n(0) must be > 0");
  double lo = 0.0;
  double hi = std::min(1.0, upper_hint);
  while (growth(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > upper_hint) {
      if (growth(upper_hint) < 0.0) {
        hi = upper_hint;
        break;
      }
      throw NumericError("find_xbar: H1 violated, no sign change of n below the upper hint");
    }
  }
  return find_root_bracketed([&](double x) { return growth(x); }, lo, hi);
}

double compute_r0(const ModelSpec &m) {
  const Parameters &pr = m.params();
  const double xbar = find_xbar(m.growth());
  return pr.k * m.g1() * m.g2() * m.incidence()(xbar, 0.0, 0.0) / (pr.a * pr.u);
}

std::optional<State> solve_e1(const ModelSpec &m) {
  const Parameters &pr = m.params();
  if (compute_r0(m) <= 1.0 + kThresholdBand) return std::nullopt;

  const double xbar = find_xbar(m.growth());
  auto y_of = [&](double x) { return m.phi1().inverse(m.growth()(x) * m.g1() / pr.a); };
  auto v_of = [&](double x) { return pr.k * m.growth()(x) * m.g1() * m.g2() / (pr.a * pr.u); };
  const double target = pr.a * pr.u / (pr.k * m.g1() * m.g2());
  auto G = [&](double x) { return m.incidence()(x, y_of(x), v_of(x)) - target; };

  double x1;
  try {
    x1 = find_root_bracketed(G, 0.0, xbar);
  } catch (const NumericError &e) {
    throw NumericError(std::string("solve_e1: bracket failure despite R0 > 1: ") + e.what());
  }
  const double y1 = y_of(x1);
  State e1{x1, y1, pr.k * m.g2() * m.phi1()(y1) / pr.u, 0.0};
  return e1;
}

double compute_r1(const ModelSpec &m) { return ctl_setpoint(m).r1; }

std::optional<State> solve_e2(const ModelSpec &m) {
  const Parameters &pr = m.params();
  const CtlSetpoint s = ctl_setpoint(m);
  if (s.r1 <= 1.0 + kThresholdBand) return std::nullopt;
  const double zhat = m.phi2().inverse(pr.a * (s.r1 - 1.0) / pr.p);
  if (!std::isfinite(zhat) || zhat < 0.0)
    throw DomainError("solve_e2: phi2 inverse of a(R1-1)/p is outside the response domain");
  return State{s.xhat, s.yhat, s.vhat, zhat};
}

double compute_rctl(const ModelSpec &m, const State &e1) {
  const Parameters &pr = m.params();
  return pr.c * m.g3() * m.phi1()(e1.y) / pr.b;
}

EquilibriumReport classify(const ModelSpec &m) {
  EquilibriumReport rep;
  rep.g1 = m.g1();
  rep.g2 = m.g2();
  rep.g3 = m.g3();
  rep.xbar = find_xbar(m.growth());
  rep.e0 = State{rep.xbar, 0.0, 0.0, 0.0};

  const Parameters &pr = m.params();
  rep.r0 = pr.k * rep.g1 * rep.g2 * m.incidence()(rep.xbar, 0.0, 0.0) / (pr.a * pr.u);
  rep.near_threshold = std::abs(rep.r0 - 1.0) < kThresholdBand;

  if (rep.r0 > 1.0 + kThresholdBand) rep.e1 = solve_e1(m);
  if (rep.e1) rep.rctl = compute_rctl(m, *rep.e1);

  const CtlSetpoint s = ctl_setpoint(m);
  rep.r1 = s.r1;
  rep.near_threshold = rep.near_threshold || std::abs(rep.r1 - 1.0) < kThresholdBand;
  if (rep.r1 > 1.0 + kThresholdBand)
    rep.e2 = State{s.xhat, s.yhat, s.vhat, m.phi2().inverse(pr.a * (s.r1 - 1.0) / pr.p)};

  rep.regime = rep.r0 <= 1.0 + kThresholdBand  ? Regime::InfectionFree
               : rep.r1 <= 1.0 + kThresholdBand ? Regime::CtlInactivated
                                                : Regime::CtlActivated;
  return rep;
}

double equilibrium_residual(const ModelSpec &m, const State &s) {
  const Parameters &pr = m.params();
  const double fv = m.incidence()(s.x, s.y, s.v) * s.v;
  const double p1 = m.phi1()(s.y);
  const double p2 = m.phi2()(s.z);
  const double r1 = m.growth()(s.x) - fv;
  const double r2 = fv - pr.a * p1 / m.g1() - pr.p * p1 * p2 / m.g1();
  const double r3 = pr.k * p1 - pr.u * s.v / m.g2();
  const double r4 = pr.c * p1 * p2 - pr.b * p2 / m.g3();
  const double scale = std::max({1.0, std::abs(m.growth()(0.0)), pr.a * p1});
  return std::max({std::abs(r1), std::abs(r2), std::abs(r3), std::abs(r4)}) / scale;
}

UniquenessReport check_uniqueness_sets(const ModelSpec &m, const State &e, int grid) {
  const double xbar = find_xbar(m.growth());
  UniquenessReport rep;
  rep.growth_pass = true;
  rep.incidence_pass = true;
  const double n_e = m.growth()(e.x);
  const double f_e = m.incidence()(e.x, e.y, e.v);
  for (int i = 0; i <= grid; ++i) {
    const double x = xbar * i / grid;
    if (std::abs(x - e.x) <= 1e-9 * std::max(1.0, xbar)) continue;
    if (rep.growth_pass && (m.growth()(x) - n_e) * (x - e.x) >= 0.0) {
      rep.growth_pass = false;
      rep.growth_witness = x;
    }
    if (rep.incidence_pass && (m.incidence()(x, e.y, e.v) - f_e) * (x - e.x) <= 0.0) {
      rep.incidence_pass = false;
      rep.incidence_witness = x;
    }
    if (!rep.growth_pass && !rep.incidence_pass) break;
  }
  return rep;
}

std::string UniquenessReport::text() const {
  std::ostringstream os;
  os << "Uniqueness-set check\n";
  os << "  X_n  (n opposes x - xE):      " << (growth_pass ? "holds" : "violated");
  if (growth_witness) os << " at x = " << *growth_witness;
  os << "\n";
  os << "  X_f  (f increasing in x):     " << (incidence_pass ? "holds" : "violated");
  if (incidence_witness) os << " at x = " << *incidence_witness;
  os << "\n";
  os << "  note: X_f is sometimes stated with the opposite sign; condition ii) makes\n"
        "  f strictly increasing in x, so monotonicity is what is checked here.\n";
  return os.str();
}

std::string EquilibriumReport::text() const {
  std::ostringstream os;
  os << "Equilibrium analysis\n";
  os << std::setprecision(9) << std::fixed;
  os << "  G1 = " << g1 << "   G2 = " << g2 << "   G3 = " << g3 << "\n";
  os << "  xbar = " << xbar << "\n";
  os << "  R0 = " << r0 << "\n";
  os << "  R1 = " << r1 << "\n";
  if (rctl)
    os << "  R_CTL = " << *rctl << "\n";
  else
    os << "  R_CTL = (undefined, E1 absent)\n";
  os << "  regime: " << regime_name(regime) << "\n";
  os << "  E0 = " << state_str(e0) << "\n";
  if (e1)
    os << "  E1 = " << state_str(*e1) << "\n";
  else
    os << "  E1 = absent (R0 <= 1)\n";
  if (e2)
    os << "  E2 = " << state_str(*e2) << "\n";
  else
    os << "  E2 = absent (R1 <= 1)\n";
  if (near_threshold)
    os << "  warning: a reproduction number lies within 1e-9 of 1; classification used\n"
          "  the weak inequality\n";
  return os.str();
}

} // namespace virodyn
