#pragma once

#include <optional>
#include <string>

#include "model.hpp"

namespace virodyn {

enum class Regime { InfectionFree, CtlInactivated, CtlActivated };

const char *regime_name(Regime r);

// Reproduction numbers, equilibria and regime classification.  E1 is
// present iff R0 > 1, E2 iff R1 > 1; R_CTL is defined only with E1.
struct EquilibriumReport {
  double g1 = 0.0, g2 = 0.0, g3 = 0.0;
  double xbar = 0.0;
  double r0 = 0.0;
  double r1 = 0.0;
  std::optional<double> rctl;
  State e0;
  std::optional<State> e1;
  std::optional<State> e2;
  Regime regime = Regime::InfectionFree;
  // |R0 - 1| or |R1 - 1| below 1e-9: classified by the weak inequality and
  // flagged, since the boundary cases are analytically delicate.
  bool near_threshold = false;

  std::string text() const;
};

// Root of n on (0, upper): doubling search for a sign change, then the
// bracketed hybrid.  Throws NumericError when H1 fails to produce one.
double find_xbar(const GrowthFunction &growth, double upper_hint = 1e6);

// R0 = k G1 G2 f(xbar, 0, 0) / (a u).
double compute_r0(const ModelSpec &model);

// CTL-free infected equilibrium; absent when R0 <= 1.
std::optional<State> solve_e1(const ModelSpec &model);

// R1 = R(xhat, yhat, vhat) with yhat = phi1^{-1}(b/(c G3)),
// vhat = k phi1(yhat) G2 / u and xhat the root of
// H(x) = n(x) - f(x, yhat, vhat) vhat on (0, xbar).
double compute_r1(const ModelSpec &model);

// CTL-activated equilibrium; absent when R1 <= 1.
std::optional<State> solve_e2(const ModelSpec &model);

// R_CTL = c G3 phi1(y1) / b at a CTL-free infected equilibrium.
double compute_rctl(const ModelSpec &model, const State &e1);

// Full report; near-threshold reproduction numbers classify by the weak
// inequality (R <= 1 keeps the lower regime).
EquilibriumReport classify(const ModelSpec &model);

// Max residual of the four equilibrium equations at s, relative to
// max(1, |n(0)|, a phi1(y)).
double equilibrium_residual(const ModelSpec &model, const State &s);

// Grid check of the uniqueness sets X_n and X_f at an equilibrium:
// (n(x) - n(xE))(x - xE) < 0 and f strictly increasing in x on [0, xbar].
// The report states the observed sign pattern; applicability of A1/A2 is
// the caller's judgment.
struct UniquenessReport {
  bool growth_pass = false;
  std::optional<double> growth_witness;
  bool incidence_pass = false;
  std::optional<double> incidence_witness;
  std::string text() const;
};

UniquenessReport check_uniqueness_sets(const ModelSpec &model, const State &e, int grid = 512);

} // namespace virodyn
