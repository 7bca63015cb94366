#pragma once

#include <functional>
#include <variant>
#include <vector>

namespace virodyn {

// Settings for the finite-horizon surrogate of the infinite delay integrals:
// the kernel tail beyond the truncation horizon carries at most
// tail_mass_epsilon, and the remaining interval is integrated by composite
// Simpson with `panels` subdivisions.
struct QuadratureSpec {
  double tail_mass_epsilon = 1e-8;
  int panels = 128;

  void validate() const; // throws InvalidArgumentError
};

// Delay distribution f_i(tau) on [0, inf).  Dirac and gamma kernels are
// normalized by construction; tabulated kernels are piecewise-linear
// densities whose trapezoid mass must lie in (0, 1].
class DelayKernel {
public:
  struct Dirac {
    double tau;
  };
  struct Gamma {
    int shape;   // >= 1
    double rate; // > 0
  };
  struct Tabulated {
    std::vector<double> nodes;     // strictly ascending, nodes[0] >= 0
    std::vector<double> densities; // nonnegative, same length
  };

  static DelayKernel dirac(double tau);
  static DelayKernel gamma(int shape, double rate);
  static DelayKernel tabulated(std::vector<double> nodes, std::vector<double> densities);

  // Total mass: 1 for Dirac/Gamma, trapezoid integral for tables.
  double mass() const { return mass_; }

  bool is_dirac() const { return std::holds_alternative<Dirac>(v_); }
  // Dirac delay; throws for other variants.
  double dirac_tau() const;

  // G(alpha) = integral f(tau) e^{-alpha tau} dtau.  Closed form for Dirac
  // and Gamma, composite quadrature for tables.
  double weighted_mass(double alpha) const;

  // Smallest tau_max with kernel mass beyond it <= epsilon.
  double truncation_horizon(double epsilon) const;

  // integral_0^tau_max f(tau) e^{-alpha tau} g(t - tau) dtau.  Dirac kernels
  // short-circuit to e^{-alpha tau} g(t - tau) with no quadrature.
  double weighted_convolve(double alpha, const std::function<double(double)> &g, double t,
                           const QuadratureSpec &quad) const;

  // Piecewise-linear density value (tables); pdf for gamma; throws for Dirac.
  double density(double tau) const;

private:
  explicit DelayKernel(std::variant<Dirac, Gamma, Tabulated> v);

  std::variant<Dirac, Gamma, Tabulated> v_;
  double mass_ = 1.0;
};

} // namespace virodyn
