#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "functions.hpp"
#include "kernels.hpp"

namespace virodyn {

// Scalar rate constants of the four equations.  All strictly positive
// except the delay attenuation exponents alpha1, alpha2 >= 0.
struct Parameters {
  double a;      // infected-cell death
  double p;      // CTL killing
  double k;      // virion production
  double u;      // virion clearance
  double c;      // CTL expansion
  double b;      // CTL decay
  double alpha1; // survival attenuation of newly infected cells
  double alpha2; // survival attenuation of virion production

  void validate() const; // throws InvalidArgumentError
};

// Nonnegative state (x, y, v, z): healthy cells, infected cells, free
// virus, CTL effectors.  Also used for derivative 4-vectors.
struct State {
  double x = 0.0, y = 0.0, v = 0.0, z = 0.0;

  double operator[](int i) const { return i == 0 ? x : i == 1 ? y : i == 2 ? v : z; }
  double &operator[](int i) { return i == 0 ? x : i == 1 ? y : i == 2 ? v : z; }
};

inline State operator+(const State &a, const State &b) {
  return {a.x + b.x, a.y + b.y, a.v + b.v, a.z + b.z};
}
inline State operator-(const State &a, const State &b) {
  return {a.x - b.x, a.y - b.y, a.v - b.v, a.z - b.z};
}
inline State operator*(double s, const State &a) { return {s * a.x, s * a.y, s * a.v, s * a.z}; }

inline double max_norm(const State &s) {
  return std::max(std::max(std::abs(s.x), std::abs(s.y)), std::max(std::abs(s.v), std::abs(s.z)));
}
inline double min_component(const State &s) {
  return std::min(std::min(s.x, s.y), std::min(s.v, s.z));
}
inline bool all_finite(const State &s) {
  return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.v) && std::isfinite(s.z);
}

using HistoryFn = std::function<State(double)>;

// Complete model: functional ingredients, rate constants and the three
// delay kernels.  Immutable after construction; safe to share across
// threads.
class ModelSpec {
public:
  ModelSpec(GrowthFunction growth, IncidenceFunction incidence, ResponseFunction phi1,
            ResponseFunction phi2, Parameters params, DelayKernel kernel1, DelayKernel kernel2,
            DelayKernel kernel3);

  const GrowthFunction &growth() const { return growth_; }
  const IncidenceFunction &incidence() const { return incidence_; }
  const ResponseFunction &phi1() const { return phi1_; }
  const ResponseFunction &phi2() const { return phi2_; }
  const Parameters &params() const { return params_; }
  const DelayKernel &kernel1() const { return k1_; }
  const DelayKernel &kernel2() const { return k2_; }
  const DelayKernel &kernel3() const { return k3_; }

  // Survival-weighted kernel masses G1, G2 and the unweighted G3.
  double g1() const { return g1_; }
  double g2() const { return g2_; }
  double g3() const { return g3_; }

  // Largest kernel truncation horizon; how far back the history must reach.
  double tau_max(double epsilon = 1e-8) const;

private:
  GrowthFunction growth_;
  IncidenceFunction incidence_;
  ResponseFunction phi1_, phi2_;
  Parameters params_;
  DelayKernel k1_, k2_, k3_;
  double g1_, g2_, g3_;
};

// Right-hand side of the delay system at time t given a history evaluator
// covering [t - tau_max, t].  The three convolution terms use
// (kernel1, alpha1), (kernel2, alpha2) and (kernel3, 0).  Dirac kernels
// reduce to a single lagged lookup weighted by the matching G_i.
template <typename H>
State rhs_t(const ModelSpec &m, double t, const H &history, const QuadratureSpec &quad) {
  const Parameters &pr = m.params();
  const State s = history(t);

  double conv1, conv2, conv3;
  if (m.kernel1().is_dirac()) {
    const double tau = m.kernel1().dirac_tau();
    const State h1 = tau == 0.0 ? s : history(t - tau);
    conv1 = m.g1() * m.incidence()(h1.x, h1.y, h1.v) * h1.v;
  } else {
    conv1 = m.kernel1().weighted_convolve(
        pr.alpha1,
        [&](double tt) {
          const State h = history(tt);
          return m.incidence()(h.x, h.y, h.v) * h.v;
        },
        t, quad);
  }
  if (m.kernel2().is_dirac()) {
    const double tau = m.kernel2().dirac_tau();
    conv2 = m.g2() * m.phi1()((tau == 0.0 ? s : history(t - tau)).y);
  } else {
    conv2 = m.kernel2().weighted_convolve(
        pr.alpha2, [&](double tt) { return m.phi1()(history(tt).y); }, t, quad);
  }
  if (m.kernel3().is_dirac()) {
    const double tau = m.kernel3().dirac_tau();
    const State h3 = tau == 0.0 ? s : history(t - tau);
    conv3 = m.g3() * m.phi1()(h3.y) * m.phi2()(h3.z);
  } else {
    conv3 = m.kernel3().weighted_convolve(
        0.0,
        [&](double tt) {
          const State h = history(tt);
          return m.phi1()(h.y) * m.phi2()(h.z);
        },
        t, quad);
  }

  const double phi1y = m.phi1()(s.y);
  const double phi2z = m.phi2()(s.z);
  return {m.growth()(s.x) - m.incidence()(s.x, s.y, s.v) * s.v,
          conv1 - pr.a * phi1y - pr.p * phi1y * phi2z,
          pr.k * conv2 - pr.u * s.v,
          pr.c * conv3 - pr.b * phi2z};
}

State rhs(const ModelSpec &model, double t, const HistoryFn &history, const QuadratureSpec &quad);

struct HypothesisCheck {
  std::string name;
  bool pass;
  std::string detail; // first violating sample, or empty
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;
  bool all_pass() const;
  std::string text() const;
};

// Numerical check of H1, H2 and incidence conditions i)-iii) on sampling
// grids over [0, xbar] x [0, Y] x [0, V] with Y, V from the invariant-region
// bounds.  Failures are report entries, not errors.
ValidationReport validate_hypotheses(const ModelSpec &model, int grid = 64);

} // namespace virodyn
