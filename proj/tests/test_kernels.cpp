#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "kernels.hpp"

using virodyn::DelayKernel;
using virodyn::QuadratureSpec;

namespace {

// Dense piecewise-linear sampling of the gamma density, trapezoid-normalized
// so the table is admissible; forces the tabulated quadrature path.
DelayKernel gamma_as_table(int shape, double rate, int nodes) {
  const DelayKernel g = DelayKernel::gamma(shape, rate);
  const double hi = g.truncation_horizon(1e-10);
  std::vector<double> xs(nodes), fs(nodes);
  for (int i = 0; i < nodes; ++i) {
    xs[i] = hi * i / (nodes - 1);
    fs[i] = g.density(xs[i]);
  }
  double mass = 0.0;
  for (int i = 0; i + 1 < nodes; ++i)
    mass += 0.5 * (fs[i] + fs[i + 1]) * (xs[i + 1] - xs[i]);
  for (double &f : fs) f /= mass;
  return DelayKernel::tabulated(xs, fs);
}

} // namespace

TEST_CASE("weighted mass closed forms") {
  CHECK(DelayKernel::dirac(5.0).weighted_mass(0.1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(DelayKernel::gamma(2, 1.0).weighted_mass(1.0) == doctest::Approx(0.25).epsilon(1e-12));

  // alpha = 0 recovers the total mass for every normalized kernel
  CHECK(DelayKernel::dirac(3.0).weighted_mass(0.0) == doctest::Approx(1.0));
  CHECK(DelayKernel::gamma(3, 0.5).weighted_mass(0.0) == doctest::Approx(1.0));
  CHECK(gamma_as_table(2, 1.0, 4097).weighted_mass(0.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("weighted mass is strictly decreasing in alpha") {
  const DelayKernel kernels[] = {DelayKernel::dirac(2.0), DelayKernel::gamma(2, 0.7),
                                 gamma_as_table(1, 1.0, 2001)};
  for (const auto &k : kernels) {
    double prev = k.weighted_mass(0.0);
    for (double alpha : {0.05, 0.1, 0.3, 0.8, 2.0, 5.0}) {
      const double cur = k.weighted_mass(alpha);
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("tabulated quadrature matches the gamma closed form") {
  const DelayKernel exact = DelayKernel::gamma(2, 1.0);
  const DelayKernel table = gamma_as_table(2, 1.0, 16385);
  for (double alpha : {0.0, 0.1, 0.5, 1.0})
    CHECK(table.weighted_mass(alpha) == doctest::Approx(exact.weighted_mass(alpha)).epsilon(1e-6));
}

TEST_CASE("truncation horizon") {
  CHECK(DelayKernel::dirac(10.0).truncation_horizon(1e-8) == doctest::Approx(10.0));
  // exponential tail: mass beyond T is e^{-T}
  CHECK(DelayKernel::gamma(1, 1.0).truncation_horizon(std::exp(-20.0)) ==
        doctest::Approx(20.0).epsilon(1e-6));
  const DelayKernel table =
      DelayKernel::tabulated({0.0, 1.0, 2.5}, {0.0, 0.8, 0.0});
  CHECK(table.truncation_horizon(1e-8) == doctest::Approx(2.5));

  // horizon actually captures the requested mass
  const DelayKernel g = DelayKernel::gamma(3, 2.0);
  const double T = g.truncation_horizon(1e-6);
  QuadratureSpec quad;
  quad.panels = 2048;
  const double captured = g.weighted_convolve(0.0, [](double) { return 1.0; }, 0.0, quad);
  CHECK(captured == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(T < g.truncation_horizon(1e-9));
}

TEST_CASE("weighted convolve") {
  QuadratureSpec quad;

  SUBCASE("dirac short-circuit") {
    const double got =
        DelayKernel::dirac(5.0).weighted_convolve(0.1, [](double) { return 7.0; }, 0.0, quad);
    CHECK(got == doctest::Approx(7.0 * std::exp(-0.5)).epsilon(1e-12));
  }

  SUBCASE("constant history factorizes through the weighted mass") {
    const double c = 3.7;
    auto g = [&](double) { return c; };
    QuadratureSpec fine;
    fine.tail_mass_epsilon = 1e-12; // the identity is only as tight as the tail cut
    fine.panels = 16384;
    for (double alpha : {0.0, 0.2, 1.0}) {
      const DelayKernel d = DelayKernel::dirac(2.0);
      CHECK(d.weighted_convolve(alpha, g, 1.0, quad) ==
            doctest::Approx(c * d.weighted_mass(alpha)).epsilon(1e-10));
      const DelayKernel gm = DelayKernel::gamma(2, 1.5);
      CHECK(gm.weighted_convolve(alpha, g, 1.0, fine) ==
            doctest::Approx(c * gm.weighted_mass(alpha)).epsilon(1e-10));
      const DelayKernel tab = gamma_as_table(2, 1.5, 2001);
      CHECK(tab.weighted_convolve(alpha, g, 1.0, quad) ==
            doctest::Approx(c * tab.weighted_mass(alpha)).epsilon(1e-8));
    }
  }

  SUBCASE("exponential history against an exponential kernel") {
    // integral_0^inf e^{-tau} e^{-tau} dtau = 1/2, the closed-form oracle
    QuadratureSpec fine;
    fine.panels = 4096;
    const double got = DelayKernel::gamma(1, 1.0).weighted_convolve(
        0.0, [](double s) { return std::exp(s); }, 0.0, fine);
    CHECK(got == doctest::Approx(0.5).epsilon(1e-8));
  }

  SUBCASE("history errors propagate") {
    auto bad = [](double) -> double {
      throw virodyn::InsufficientHistoryError("no data");
    };
    CHECK_THROWS_AS(DelayKernel::dirac(1.0).weighted_convolve(0.0, bad, 0.0, quad),
                    virodyn::InsufficientHistoryError);
  }
}

TEST_CASE("kernel construction guards") {
  CHECK_THROWS_AS(DelayKernel::dirac(-1.0), virodyn::InvalidArgumentError);
  CHECK_THROWS_AS(DelayKernel::gamma(0, 1.0), virodyn::InvalidArgumentError);
  CHECK_THROWS_AS(DelayKernel::gamma(2, 0.0), virodyn::InvalidArgumentError);
  // descending nodes
  CHECK_THROWS_AS(DelayKernel::tabulated({1.0, 0.5}, {0.1, 0.1}), virodyn::InvalidArgumentError);
  // mass above 1
  CHECK_THROWS_AS(DelayKernel::tabulated({0.0, 1.0}, {3.0, 3.0}), virodyn::InvalidArgumentError);
  // negative density
  CHECK_THROWS_AS(DelayKernel::tabulated({0.0, 1.0}, {-0.1, 1.0}), virodyn::InvalidArgumentError);

  // sub-unit mass is allowed (kernel-3 slot)
  const DelayKernel half = DelayKernel::tabulated({0.0, 1.0}, {1.0, 0.0});
  CHECK(half.mass() == doctest::Approx(0.5));
}

TEST_CASE("quadrature spec guards") {
  QuadratureSpec quad;
  quad.panels = 8;
  CHECK_THROWS_AS(quad.validate(), virodyn::InvalidArgumentError);
  quad.panels = 128;
  quad.tail_mass_epsilon = 0.0;
  CHECK_THROWS_AS(quad.validate(), virodyn::InvalidArgumentError);
}
