#include "kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "errors.hpp"
#include "numerics.hpp"

namespace virodyn {

namespace {

// Upper tail of Gamma(shape, rate) beyond T: e^{-rT} sum_{k<shape} (rT)^k/k!.
double gamma_tail(int shape, double rate, double T) {
  if (T <= 0.0) return 1.0;
  const double rT = rate * T;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < shape; ++k) {
    term *= rT / k;
    sum += term;
  }
  return std::exp(-rT + std::log(sum));
}

double gamma_pdf(int shape, double rate, double tau) {
  if (tau < 0.0) return 0.0;
  if (tau == 0.0) return shape == 1 ? rate : 0.0;
  double log_pdf = shape * std::log(rate) + (shape - 1) * std::log(tau) - rate * tau;
  for (int k = 2; k < shape; ++k) log_pdf -= std::log(static_cast<double>(k));
  return std::exp(log_pdf);
}

} // namespace

void QuadratureSpec::validate() const {
  if (!(tail_mass_epsilon > 0.0 && tail_mass_epsilon < 1.0))
    throw InvalidArgumentError("quadrature: tail_mass_epsilon must lie in (0, 1)");
  if (panels < 16) throw InvalidArgumentError("quadrature: panels must be >= 16");
}

DelayKernel::DelayKernel(std::variant<Dirac, Gamma, Tabulated> v) : v_(std::move(v)) {}

DelayKernel DelayKernel::dirac(double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau))
    throw InvalidArgumentError("dirac kernel: tau must be finite and >= 0");
  return DelayKernel{Dirac{tau}};
}

DelayKernel DelayKernel::gamma(int shape, double rate) {
  if (shape < 1) throw InvalidArgumentError("gamma kernel: shape must be a positive integer");
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw InvalidArgumentError("gamma kernel: rate must be finite and > 0");
  return DelayKernel{Gamma{shape, rate}};
}

DelayKernel DelayKernel::tabulated(std::vector<double> nodes, std::vector<double> densities) {
  if (nodes.size() < 2 || nodes.size() != densities.size())
    throw InvalidArgumentError("tabulated kernel: need >= 2 nodes and matching densities");
  if (nodes.front() < 0.0) throw InvalidArgumentError("tabulated kernel: nodes must be >= 0");
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    if (!(nodes[i] < nodes[i + 1]))
      throw InvalidArgumentError("tabulated kernel: nodes must be strictly ascending");
  double mass = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(densities[i] >= 0.0) || !std::isfinite(densities[i]))
      throw InvalidArgumentError("tabulated kernel: densities must be finite and >= 0");
    if (i + 1 < nodes.size())
      mass += 0.5 * (densities[i] + densities[i + 1]) * (nodes[i + 1] - nodes[i]);
  }
  if (!(mass > 0.0) || mass > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "tabulated kernel: trapezoid mass " << mass << " outside (0, 1]";
    throw InvalidArgumentError(os.str());
  }
  DelayKernel k{Tabulated{std::move(nodes), std::move(densities)}};
  k.mass_ = std::min(mass, 1.0);
  return k;
}

double DelayKernel::dirac_tau() const {
  if (const auto *d = std::get_if<Dirac>(&v_)) return d->tau;
  throw InvalidArgumentError("dirac_tau on a non-Dirac kernel");
}

double DelayKernel::density(double tau) const {
  if (const auto *g = std::get_if<Gamma>(&v_)) return gamma_pdf(g->shape, g->rate, tau);
  if (const auto *t = std::get_if<Tabulated>(&v_)) {
    const auto &xs = t->nodes;
    if (tau < xs.front() || tau > xs.back()) return 0.0;
    auto it = std::upper_bound(xs.begin(), xs.end(), tau);
    std::size_t i = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
    if (i + 1 >= xs.size()) i = xs.size() - 2;
    const double w = (tau - xs[i]) / (xs[i + 1] - xs[i]);
    return (1.0 - w) * t->densities[i] + w * t->densities[i + 1];
  }
  throw InvalidArgumentError("density on a Dirac kernel");
}

double DelayKernel::weighted_mass(double alpha) const {
  if (!(alpha >= 0.0)) throw InvalidArgumentError("weighted_mass: alpha must be >= 0");
  double value = 0.0;
  if (const auto *d = std::get_if<Dirac>(&v_)) {
    value = std::exp(-alpha * d->tau);
  } else if (const auto *g = std::get_if<Gamma>(&v_)) {
    value = std::pow(g->rate / (g->rate + alpha), g->shape);
  } else {
    // Piecewise-linear density times exponential weight: per-interval Simpson
    // keeps the integrand smooth on each panel.
    const auto &tab = std::get<Tabulated>(v_);
    const auto &xs = tab.nodes;
    const double span = xs.back() - xs.front();
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      int m = static_cast<int>(std::ceil(512.0 * (xs[i + 1] - xs[i]) / span));
      value += simpson([&](double tau) { return density(tau) * std::exp(-alpha * tau); }, xs[i],
                       xs[i + 1], std::max(m, 2));
    }
  }
  if (!std::isfinite(value)) throw NumericError("weighted_mass: non-finite result");
  return value;
}

double DelayKernel::truncation_horizon(double epsilon) const {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw InvalidArgumentError("truncation_horizon: epsilon must lie in (0, 1)");
  if (const auto *d = std::get_if<Dirac>(&v_)) return d->tau;
  if (const auto *t = std::get_if<Tabulated>(&v_)) return t->nodes.back();
  const auto &g = std::get<Gamma>(v_);
  double lo = 0.0, hi = 1.0 / g.rate;
  while (gamma_tail(g.shape, g.rate, hi) > epsilon) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (gamma_tail(g.shape, g.rate, mid) > epsilon ? lo : hi) = mid;
  }
  return hi;
}

double DelayKernel::weighted_convolve(double alpha, const std::function<double(double)> &g,
                                      double t, const QuadratureSpec &quad) const {
  if (const auto *d = std::get_if<Dirac>(&v_))
    return std::exp(-alpha * d->tau) * g(t - d->tau);

  double value = 0.0;
  auto integrand = [&](double tau) { return density(tau) * std::exp(-alpha * tau) * g(t - tau); };
  if (const auto *tab = std::get_if<Tabulated>(&v_)) {
    const auto &xs = tab->nodes;
    const double span = xs.back() - xs.front();
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      int m = static_cast<int>(std::ceil(quad.panels * (xs[i + 1] - xs[i]) / span));
      value += simpson(integrand, xs[i], xs[i + 1], std::max(m, 2));
    }
  } else {
    value = simpson(integrand, 0.0, truncation_horizon(quad.tail_mass_epsilon), quad.panels);
  }
  if (!std::isfinite(value)) throw NumericError("weighted_convolve: non-finite result");
  return value;
}

} // namespace virodyn
