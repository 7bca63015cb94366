#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "common.hpp"
#include "equilibria.hpp"
#include "errors.hpp"
#include "integrator.hpp"
#include "model.hpp"

using namespace virodyn;

namespace {

// The worked ratio-dependent system written out with explicit discrete
// delays, used as an independent check of the kernel-based RHS.
State handwritten_rhs(double beta, double t, const HistoryFn &hist) {
  const auto p = vtest::example_params();
  const State s = hist(t);
  const State s1 = hist(t - 5.0);
  const State s2 = hist(t - 10.0);
  auto f = [&](const State &q) {
    return q.x > 0.0 ? beta * q.x / (0.001 * q.y + 0.001 * q.x) : 0.0;
  };
  auto n = [](double x) { return 200.0 - 0.1 * x + 0.6 * x * (1.0 - x / 500.0); };
  return {n(s.x) - f(s) * s.v,
          f(s1) * s1.v * std::exp(-p.alpha1 * 5.0) - p.a * s.y - p.p * s.y * s.z,
          p.k * std::exp(-p.alpha2 * 10.0) * s2.y - p.u * s.v,
          p.c * s.y * s.z - p.b * s.z};
}

} // namespace

TEST_CASE("rhs vanishes at the infection-free equilibrium") {
  const ModelSpec m = vtest::example1_model(0.003);
  const double xbar = find_xbar(m.growth());
  const State e0{xbar, 0.0, 0.0, 0.0};
  const State d = rhs(m, 0.0, [&](double) { return e0; }, QuadratureSpec{});
  CHECK(max_norm(d) <= 1e-8);
}

TEST_CASE("rhs vanishes at the published CTL-free equilibrium") {
  const ModelSpec m = vtest::example1_model(0.0096);
  const State e1{659.461141, 5.962025, 0.826548, 0.0};
  const State d = rhs(m, 0.0, [&](double) { return e1; }, QuadratureSpec{});
  CHECK(max_norm(d) <= 1e-5);
}

TEST_CASE("rhs matches a hand evaluation at the history state") {
  const double beta = 0.003;
  const ModelSpec m = vtest::example1_model(beta);
  const State s = vtest::example_history_state();
  auto hist = [&](double) { return s; };
  const State d = rhs(m, 10.0, hist, QuadratureSpec{});

  // first component written out: n(25) - f(25,50,10) * 10
  const double n25 = 200.0 - 0.1 * 25.0 + 0.6 * 25.0 * (1.0 - 25.0 / 500.0);
  const double f25 = beta * 25.0 / (0.001 * 50.0 + 0.001 * 25.0);
  CHECK(d.x == doctest::Approx(n25 - f25 * 10.0).epsilon(1e-12));

  const State want = handwritten_rhs(beta, 10.0, hist);
  CHECK(max_norm(d - want) <= 1e-12);
}

TEST_CASE("rhs equals the handwritten discrete-delay form on random histories") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> unif(0.1, 60.0);
  const double beta = 0.0096;
  const ModelSpec m = vtest::example1_model(beta);
  for (int trial = 0; trial < 100; ++trial) {
    // piecewise-linear random history over [-12, 0], evaluated beyond via
    // the same object on both sides
    std::vector<double> times{-12.0, -6.0, -2.0, 0.0};
    std::vector<State> states;
    for (std::size_t i = 0; i < times.size(); ++i)
      states.push_back({unif(rng), unif(rng), unif(rng), unif(rng)});
    const auto hist = HistoryFunction::piecewise_linear(times, states);
    HistoryFn fn = [&](double t) { return hist(t); };
    const State got = rhs(m, 0.0, fn, QuadratureSpec{});
    const State want = handwritten_rhs(beta, 0.0, fn);
    CHECK(max_norm(got - want) <= 1e-12 * std::max(1.0, max_norm(want)));
  }
}

TEST_CASE("hypothesis validation on the worked examples") {
  CHECK(validate_hypotheses(vtest::example1_model(0.003)).all_pass());
  CHECK(validate_hypotheses(vtest::example3_model(0.1)).all_pass());
}

TEST_CASE("ratio-dependent incidence with gamma = 0 fails evaluability at y = 0") {
  const ModelSpec m(vtest::example_growth(),
                    IncidenceFunction::ratio_dependent(0.01, 0.001, 0.0),
                    ResponseFunction::identity(), ResponseFunction::identity(),
                    vtest::example_params(), DelayKernel::dirac(5.0), DelayKernel::dirac(10.0),
                    DelayKernel::dirac(0.0));
  const ValidationReport rep = validate_hypotheses(m);
  CHECK_FALSE(rep.all_pass());
  bool eval_failed = false;
  for (const auto &c : rep.checks)
    if (c.name.find("evaluable") != std::string::npos) eval_failed = !c.pass;
  CHECK(eval_failed);
}

TEST_CASE("growth with n(0) < 0 fails H1") {
  const ModelSpec m(GrowthFunction::custom([](double x) { return -1.0 - x; }),
                    IncidenceFunction::saturating(0.1, 0.001, 0.001), ResponseFunction::identity(),
                    ResponseFunction::identity(), vtest::example_params(),
                    DelayKernel::dirac(5.0), DelayKernel::dirac(10.0), DelayKernel::dirac(0.0));
  const ValidationReport rep = validate_hypotheses(m);
  bool h1_failed = false;
  for (const auto &c : rep.checks)
    if (c.name.find("H1") != std::string::npos) h1_failed = !c.pass;
  CHECK(h1_failed);
}

TEST_CASE("model construction guards") {
  Parameters bad = vtest::example_params();
  bad.u = 0.0;
  CHECK_THROWS_AS(ModelSpec(vtest::example_growth(),
                            IncidenceFunction::saturating(0.1, 0.001, 0.001),
                            ResponseFunction::identity(), ResponseFunction::identity(), bad,
                            DelayKernel::dirac(5.0), DelayKernel::dirac(10.0),
                            DelayKernel::dirac(0.0)),
                  InvalidArgumentError);

  // sub-unit mass is rejected in the kernel-1 slot
  const DelayKernel half = DelayKernel::tabulated({0.0, 1.0}, {1.0, 0.0});
  CHECK_THROWS_AS(ModelSpec(vtest::example_growth(),
                            IncidenceFunction::saturating(0.1, 0.001, 0.001),
                            ResponseFunction::identity(), ResponseFunction::identity(),
                            vtest::example_params(), half, DelayKernel::dirac(10.0),
                            DelayKernel::dirac(0.0)),
                  InvalidArgumentError);

  // ...but accepted as kernel 3
  const ModelSpec ok(vtest::example_growth(), IncidenceFunction::saturating(0.1, 0.001, 0.001),
                     ResponseFunction::identity(), ResponseFunction::identity(),
                     vtest::example_params(), DelayKernel::dirac(5.0), DelayKernel::dirac(10.0),
                     half);
  CHECK(ok.g3() == doctest::Approx(0.5));
}

TEST_CASE("tau_max covers every kernel") {
  const ModelSpec m = vtest::example1_model(0.003);
  CHECK(m.tau_max() == doctest::Approx(10.0));
}
