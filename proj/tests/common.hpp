#pragma once

// Shared model builders for the published worked examples; a = 0.8 as
// documented in the README parameter notes.

#include "functions.hpp"
#include "kernels.hpp"
#include "model.hpp"

namespace vtest {

inline virodyn::Parameters example_params() {
  virodyn::Parameters p{};
  p.a = 0.8;
  p.p = 1.0;
  p.k = 0.8;
  p.u = 3.5;
  p.c = 0.03;
  p.b = 0.75;
  p.alpha1 = 0.1;
  p.alpha2 = 0.05;
  return p;
}

inline virodyn::GrowthFunction example_growth() {
  return virodyn::GrowthFunction::logistic_source(200.0, 0.1, 0.6, 500.0);
}

// Ratio-dependent incidence example (discrete delays 5 and 10).
inline virodyn::ModelSpec example1_model(double beta) {
  return virodyn::ModelSpec(example_growth(),
                            virodyn::IncidenceFunction::ratio_dependent(beta, 0.001, 0.001),
                            virodyn::ResponseFunction::identity(),
                            virodyn::ResponseFunction::identity(), example_params(),
                            virodyn::DelayKernel::dirac(5.0), virodyn::DelayKernel::dirac(10.0),
                            virodyn::DelayKernel::dirac(0.0));
}

// Saturating incidence example, same parameters otherwise.
inline virodyn::ModelSpec example3_model(double beta) {
  return virodyn::ModelSpec(example_growth(),
                            virodyn::IncidenceFunction::saturating(beta, 0.001, 0.001),
                            virodyn::ResponseFunction::identity(),
                            virodyn::ResponseFunction::identity(), example_params(),
                            virodyn::DelayKernel::dirac(5.0), virodyn::DelayKernel::dirac(10.0),
                            virodyn::DelayKernel::dirac(0.0));
}

inline virodyn::State example_history_state() { return {25.0, 50.0, 10.0, 5.0}; }

} // namespace vtest
