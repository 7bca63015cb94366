#include "model.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace virodyn {

void Parameters::validate() const {
  auto positive = [](double v, const char *name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "params: " << name << " must be finite and > 0";
      throw InvalidArgumentError(os.str());
    }
  };
  positive(a, "a");
  positive(p, "p");
  positive(k, "k");
  positive(u, "u");
  positive(c, "c");
  positive(b, "b");
  if (!(alpha1 >= 0.0) || !(alpha2 >= 0.0))
    throw InvalidArgumentError("params: alpha1 and alpha2 must be >= 0");
}

ModelSpec::ModelSpec(GrowthFunction growth, IncidenceFunction incidence, ResponseFunction phi1,
                     ResponseFunction phi2, Parameters params, DelayKernel kernel1,
                     DelayKernel kernel2, DelayKernel kernel3)
    : growth_(std::move(growth)),
      incidence_(std::move(incidence)),
      phi1_(std::move(phi1)),
      phi2_(std::move(phi2)),
      params_(params),
      k1_(std::move(kernel1)),
      k2_(std::move(kernel2)),
      k3_(std::move(kernel3)) {
  params_.validate();
  if (std::abs(k1_.mass() - 1.0) > 1e-6 || std::abs(k2_.mass() - 1.0) > 1e-6)
    throw InvalidArgumentError("model: kernel1 and kernel2 must have mass 1");
  if (k3_.mass() > 1.0 + 1e-9) throw InvalidArgumentError("model: kernel3 mass must be <= 1");
  g1_ = k1_.weighted_mass(params_.alpha1);
  g2_ = k2_.weighted_mass(params_.alpha2);
  g3_ = k3_.mass();
}

double ModelSpec::tau_max(double epsilon) const {
  return std::max({k1_.truncation_horizon(epsilon), k2_.truncation_horizon(epsilon),
                   k3_.truncation_horizon(epsilon)});
}

State rhs(const ModelSpec &model, double t, const HistoryFn &history, const QuadratureSpec &quad) {
  if (!history) throw InvalidArgumentError("rhs: null history evaluator");
  return rhs_t(model, t, history, quad);
}

bool ValidationReport::all_pass() const {
  for (const auto &c : checks)
    if (!c.pass) return false;
  return true;
}

std::string ValidationReport::text() const {
  std::ostringstream os;
  os << "Hypothesis validation\n";
  for (const auto &c : checks) {
    os << "  " << (c.pass ? "[pass] " : "[FAIL] ") << c.name;
    if (!c.detail.empty()) os << " -- " << c.detail;
    os << "\n";
  }
  return os.str();
}

} // namespace virodyn
