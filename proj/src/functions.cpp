#include "functions.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace virodyn {

GrowthFunction GrowthFunction::logistic_source(double lambda, double d, double r, double K) {
  if (!(K > 0.0)) throw InvalidArgumentError("growth: K must be > 0");
  GrowthFunction g;
  g.n_ = [=](double x) { return lambda - d * x + r * x * (1.0 - x / K); };
  g.name_ = "logistic_source";
  return g;
}

GrowthFunction GrowthFunction::custom(std::function<double(double)> n, std::string name) {
  if (!n) throw InvalidArgumentError("growth: null evaluator");
  GrowthFunction g;
  g.n_ = std::move(n);
  g.name_ = std::move(name);
  return g;
}

IncidenceFunction IncidenceFunction::ratio_dependent(double beta, double alpha, double gamma) {
  IncidenceFunction f;
  // x = 0 is the removable 0/0 point; condition i) pins f(0, y, v) = 0.
  f.f_ = [=](double x, double y, double v) {
    (void)v;
    if (x <= 0.0) return 0.0;
    return beta * x / (alpha * y + gamma * x);
  };
  f.name_ = "ratio_dependent";
  return f;
}

IncidenceFunction IncidenceFunction::saturating(double beta, double alpha, double gamma) {
  IncidenceFunction f;
  f.f_ = [=](double x, double y, double v) {
    return beta * x / ((1.0 + alpha * y) * (1.0 + gamma * v));
  };
  f.name_ = "saturating";
  return f;
}

IncidenceFunction IncidenceFunction::custom(std::function<double(double, double, double)> f,
                                            std::string name) {
  if (!f) throw InvalidArgumentError("incidence: null evaluator");
  IncidenceFunction out;
  out.f_ = std::move(f);
  out.name_ = std::move(name);
  return out;
}

ResponseFunction ResponseFunction::identity() {
  ResponseFunction r;
  r.phi_ = [](double y) { return y; };
  r.inv_ = [](double w) { return w; };
  r.k_lower_ = 1.0;
  r.name_ = "identity";
  return r;
}

ResponseFunction ResponseFunction::linear(double slope) {
  if (!(slope > 0.0)) throw InvalidArgumentError("response: slope must be > 0");
  ResponseFunction r;
  r.phi_ = [=](double y) { return slope * y; };
  r.inv_ = [=](double w) { return w / slope; };
  r.k_lower_ = slope;
  r.name_ = "linear";
  return r;
}

ResponseFunction ResponseFunction::custom(std::function<double(double)> phi,
                                          std::function<double(double)> phi_inverse,
                                          double lower_slope, std::string name) {
  if (!phi || !phi_inverse) throw InvalidArgumentError("response: null evaluator");
  if (!(lower_slope > 0.0)) throw InvalidArgumentError("response: lower_slope must be > 0");
  ResponseFunction r;
  r.phi_ = std::move(phi);
  r.inv_ = std::move(phi_inverse);
  r.k_lower_ = lower_slope;
  r.name_ = std::move(name);
  return r;
}

double estimate_lower_slope(const std::function<double(double)> &phi, double y_hi, int grid) {
  double k = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= grid; ++i) {
    const double y = y_hi * i / grid;
    k = std::min(k, phi(y) / y);
  }
  if (!(k > 0.0) || !std::isfinite(k))
    throw DomainError("response: estimated lower slope is not positive");
  return k;
}

} // namespace virodyn
