#pragma once

#include <functional>
#include <string>

namespace virodyn {

// Intrinsic growth n(x) of the healthy-cell population.  H1 requires a
// unique positive root xbar with n > 0 below it and n < 0 beyond.
class GrowthFunction {
public:
  // n(x) = lambda - d x + r x (1 - x / K); r = 0 gives the linear form.
  static GrowthFunction logistic_source(double lambda, double d, double r, double K);
  static GrowthFunction custom(std::function<double(double)> n, std::string name = "custom");

  double operator()(double x) const { return n_(x); }
  const std::string &name() const { return name_; }

private:
  std::function<double(double)> n_;
  std::string name_;
};

// Per-virion incidence f(x, y, v); the total new-infection rate is f * v.
class IncidenceFunction {
public:
  // beta x / (alpha y + gamma x)
  static IncidenceFunction ratio_dependent(double beta, double alpha, double gamma);
  // beta x / ((1 + alpha y)(1 + gamma v))
  static IncidenceFunction saturating(double beta, double alpha, double gamma);
  static IncidenceFunction custom(std::function<double(double, double, double)> f,
                                  std::string name = "custom");

  double operator()(double x, double y, double v) const { return f_(x, y, v); }
  const std::string &name() const { return name_; }

private:
  std::function<double(double, double, double)> f_;
  std::string name_;
};

// Response phi_i with H2: phi(0) = 0, strictly increasing, phi(y) >= k y.
// The inverse is required by the equilibrium formulas.
class ResponseFunction {
public:
  static ResponseFunction identity();
  // phi(y) = slope * y
  static ResponseFunction linear(double slope);
  static ResponseFunction custom(std::function<double(double)> phi,
                                 std::function<double(double)> phi_inverse, double lower_slope,
                                 std::string name = "custom");

  double operator()(double y) const { return phi_(y); }
  double inverse(double w) const { return inv_(w); }
  double lower_slope() const { return k_lower_; }
  const std::string &name() const { return name_; }

private:
  std::function<double(double)> phi_, inv_;
  double k_lower_ = 1.0;
  std::string name_;
};

// min over a positive grid of phi(y)/y; lower-slope estimate for
// user-supplied responses.
double estimate_lower_slope(const std::function<double(double)> &phi, double y_hi, int grid = 256);

} // namespace virodyn
