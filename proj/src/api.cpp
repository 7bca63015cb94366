#include "virodyn.h"

#include <cstring>
#include <new>
#include <string>

#include "equilibria.hpp"
#include "errors.hpp"
#include "integrator.hpp"
#include "scenario.hpp"
#include "verifier.hpp"

using virodyn::Error;

struct vd_scenario {
  virodyn::Scenario impl;
};
struct vd_report {
  virodyn::EquilibriumReport impl;
};
struct vd_trajectory {
  virodyn::Trajectory impl;
};
struct vd_audit {
  virodyn::LyapunovAudit impl;
};

namespace {

thread_local std::string g_last_error;

vd_status map_code(Error::Code c) {
  switch (c) {
    case Error::Code::Config: return VD_ERR_CONFIG;
    case Error::Code::Numeric: return VD_ERR_NUMERIC;
    case Error::Code::Domain: return VD_ERR_DOMAIN;
    case Error::Code::InsufficientHistory: return VD_ERR_INSUFFICIENT_HISTORY;
    case Error::Code::Io: return VD_ERR_IO;
    case Error::Code::InvalidArgument: return VD_ERR_INVALID_ARGUMENT;
  }
  return VD_ERR_INVALID_ARGUMENT;
}

template <typename F>
vd_status guarded(F &&fn) noexcept {
  try {
    fn();
    return VD_OK;
  } catch (const Error &e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc &) {
    g_last_error = "out of memory";
    return VD_ERR_NUMERIC;
  } catch (const std::exception &e) {
    g_last_error = e.what();
    return VD_ERR_INVALID_ARGUMENT;
  }
}

vd_status fail_invalid(const char *msg) {
  g_last_error = msg;
  return VD_ERR_INVALID_ARGUMENT;
}

char *dup_string(const std::string &s) {
  char *out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void fill_state(double out[4], const virodyn::State &s) {
  out[0] = s.x;
  out[1] = s.y;
  out[2] = s.v;
  out[3] = s.z;
}

} // namespace

extern "C" {

const char *vd_version(void) { return "1.0.0"; }

const char *vd_last_error(void) { return g_last_error.c_str(); }

void vd_string_free(char *s) { delete[] s; }

/* ---- scenarios ------------------------------------------------------- */

vd_status vd_scenario_load(const char *path, vd_scenario **out) {
  if (!path || !out) return fail_invalid("vd_scenario_load: null argument");
  return guarded([&] { *out = new vd_scenario{virodyn::Scenario::load(path)}; });
}

vd_status vd_scenario_parse(const char *text, vd_scenario **out) {
  if (!text || !out) return fail_invalid("vd_scenario_parse: null argument");
  return guarded([&] { *out = new vd_scenario{virodyn::Scenario::parse(text)}; });
}

vd_status vd_scenario_clone(const vd_scenario *sc, vd_scenario **out) {
  if (!sc || !out) return fail_invalid("vd_scenario_clone: null argument");
  return guarded([&] { *out = new vd_scenario{sc->impl}; });
}

void vd_scenario_free(vd_scenario *sc) { delete sc; }

vd_status vd_scenario_set(vd_scenario *sc, const char *key, double value) {
  if (!sc || !key) return fail_invalid("vd_scenario_set: null argument");
  return guarded([&] { sc->impl.set(key, value); });
}

vd_status vd_scenario_get(const vd_scenario *sc, const char *key, double *out) {
  if (!sc || !key || !out) return fail_invalid("vd_scenario_get: null argument");
  return guarded([&] { *out = sc->impl.get(key); });
}

vd_status vd_scenario_validate(const vd_scenario *sc, int *pass, char **report) {
  if (!sc || !pass) return fail_invalid("vd_scenario_validate: null argument");
  return guarded([&] {
    const virodyn::ValidationReport rep = sc->impl.validate();
    *pass = rep.all_pass() ? 1 : 0;
    if (report) *report = dup_string(rep.text());
  });
}

vd_status vd_scenario_output(const vd_scenario *sc, const char *which, char **out) {
  if (!sc || !which || !out) return fail_invalid("vd_scenario_output: null argument");
  return guarded([&] {
    const virodyn::OutputPaths paths = sc->impl.outputs();
    const std::string w = which;
    const std::string *name = nullptr;
    if (w == "csv")
      name = &paths.csv;
    else if (w == "plot")
      name = &paths.plot;
    else if (w == "report")
      name = &paths.report;
    else
      throw virodyn::InvalidArgumentError("output kind must be csv, plot or report");
    *out = name->empty() ? nullptr : dup_string(*name);
  });
}

int vd_scenario_stride(const vd_scenario *sc) {
  if (!sc) return 1;
  try {
    return sc->impl.outputs().stride;
  } catch (...) {
    return 1;
  }
}

size_t vd_scenario_sweep_count(const vd_scenario *sc) {
  if (!sc) return 0;
  try {
    const auto sw = sc->impl.sweep();
    return sw ? sw->values.size() : 0;
  } catch (...) {
    return 0;
  }
}

vd_status vd_scenario_sweep_param(const vd_scenario *sc, char **name) {
  if (!sc || !name) return fail_invalid("vd_scenario_sweep_param: null argument");
  return guarded([&] {
    const auto sw = sc->impl.sweep();
    if (!sw) throw virodyn::ConfigError("scenario has no [sweep] section");
    *name = dup_string(sw->param);
  });
}

vd_status vd_scenario_sweep_value(const vd_scenario *sc, size_t i, double *out) {
  if (!sc || !out) return fail_invalid("vd_scenario_sweep_value: null argument");
  return guarded([&] {
    const auto sw = sc->impl.sweep();
    if (!sw || i >= sw->values.size())
      throw virodyn::InvalidArgumentError("sweep value index out of range");
    *out = sw->values[i];
  });
}

/* ---- equilibria ------------------------------------------------------ */

vd_status vd_equilibria(const vd_scenario *sc, vd_report **out) {
  if (!sc || !out) return fail_invalid("vd_equilibria: null argument");
  return guarded([&] { *out = new vd_report{sc->impl.analyze()}; });
}

void vd_report_free(vd_report *r) { delete r; }

vd_status vd_report_value(const vd_report *r, const char *field, double *out) {
  if (!r || !field || !out) return fail_invalid("vd_report_value: null argument");
  return guarded([&] {
    const std::string f = field;
    const auto &rep = r->impl;
    if (f == "xbar")
      *out = rep.xbar;
    else if (f == "g1")
      *out = rep.g1;
    else if (f == "g2")
      *out = rep.g2;
    else if (f == "g3")
      *out = rep.g3;
    else if (f == "r0")
      *out = rep.r0;
    else if (f == "r1")
      *out = rep.r1;
    else if (f == "rctl") {
      if (!rep.rctl)
        throw virodyn::InvalidArgumentError("rctl is undefined: E1 is absent (R0 <= 1)");
      *out = *rep.rctl;
    } else {
      throw virodyn::InvalidArgumentError("unknown report field '" + f + "'");
    }
  });
}

vd_regime vd_report_regime(const vd_report *r) {
  switch (r->impl.regime) {
    case virodyn::Regime::InfectionFree: return VD_REGIME_INFECTION_FREE;
    case virodyn::Regime::CtlInactivated: return VD_REGIME_CTL_INACTIVATED;
    case virodyn::Regime::CtlActivated: return VD_REGIME_CTL_ACTIVATED;
  }
  return VD_REGIME_INFECTION_FREE;
}

int vd_report_equilibrium(const vd_report *r, vd_equilibrium_id which, double state[4]) {
  if (!r || !state) return 0;
  const auto &rep = r->impl;
  if (which == VD_E0) {
    fill_state(state, rep.e0);
    return 1;
  }
  if (which == VD_E1 && rep.e1) {
    fill_state(state, *rep.e1);
    return 1;
  }
  if (which == VD_E2 && rep.e2) {
    fill_state(state, *rep.e2);
    return 1;
  }
  return 0;
}

vd_status vd_report_text(const vd_report *r, char **out) {
  if (!r || !out) return fail_invalid("vd_report_text: null argument");
  return guarded([&] { *out = dup_string(r->impl.text()); });
}

/* ---- simulation ------------------------------------------------------ */

vd_status vd_simulate(const vd_scenario *sc, vd_trajectory **out) {
  if (!sc || !out) return fail_invalid("vd_simulate: null argument");
  return guarded([&] { *out = new vd_trajectory{sc->impl.simulate()}; });
}

void vd_trajectory_free(vd_trajectory *t) { delete t; }

size_t vd_trajectory_size(const vd_trajectory *t) { return t ? t->impl.size() : 0; }

double vd_trajectory_step(const vd_trajectory *t) { return t ? t->impl.step() : 0.0; }

vd_status vd_trajectory_node(const vd_trajectory *t, size_t i, double *time, double state[4]) {
  if (!t || !time || !state) return fail_invalid("vd_trajectory_node: null argument");
  if (i >= t->impl.size()) return fail_invalid("vd_trajectory_node: index out of range");
  *time = t->impl.time(i);
  fill_state(state, t->impl.state(i));
  return VD_OK;
}

vd_status vd_trajectory_eval(const vd_trajectory *t, double time, double state[4]) {
  if (!t || !state) return fail_invalid("vd_trajectory_eval: null argument");
  return guarded([&] { fill_state(state, t->impl.eval(time)); });
}

vd_status vd_trajectory_write_csv(const vd_trajectory *t, const char *path) {
  if (!t || !path) return fail_invalid("vd_trajectory_write_csv: null argument");
  return guarded([&] { virodyn::write_trajectory_csv(t->impl, path); });
}

vd_status vd_trajectory_write_csv_strided(const vd_trajectory *t, const char *path, int stride) {
  if (!t || !path) return fail_invalid("vd_trajectory_write_csv_strided: null argument");
  if (stride < 1) return fail_invalid("vd_trajectory_write_csv_strided: stride must be >= 1");
  return guarded([&] { virodyn::write_trajectory_csv(t->impl, path, stride); });
}

vd_status vd_monitor(const vd_scenario *sc, const vd_trajectory *t, int *eventually_bounded,
                     char **report) {
  if (!sc || !t || !eventually_bounded) return fail_invalid("vd_monitor: null argument");
  return guarded([&] {
    const virodyn::GammaBounds gb = virodyn::gamma_bounds(sc->impl.build_model());
    const virodyn::MonitorReport rep = virodyn::monitor(t->impl, gb);
    *eventually_bounded = rep.eventually_bounded ? 1 : 0;
    if (report) *report = dup_string(rep.text());
  });
}

/* ---- Lyapunov audit --------------------------------------------------- */

vd_status vd_verify(const vd_scenario *sc, const vd_trajectory *t, vd_equilibrium_id target,
                    vd_audit **out) {
  if (!sc || !t || !out) return fail_invalid("vd_verify: null argument");
  return guarded([&] {
    const virodyn::Functional id = target == VD_E0   ? virodyn::Functional::VE0
                                   : target == VD_E1 ? virodyn::Functional::VE1
                                                     : virodyn::Functional::VE2;
    *out = new vd_audit{sc->impl.verify(id, t->impl)};
  });
}

void vd_audit_free(vd_audit *aud) { delete aud; }

int vd_audit_pass(const vd_audit *aud) { return aud && aud->impl.pass ? 1 : 0; }

int vd_audit_decrease_ok(const vd_audit *aud) { return aud && aud->impl.decrease_ok ? 1 : 0; }

int vd_audit_converged(const vd_audit *aud) { return aud && aud->impl.converged ? 1 : 0; }

vd_status vd_audit_value(const vd_audit *aud, const char *field, double *out) {
  if (!aud || !field || !out) return fail_invalid("vd_audit_value: null argument");
  return guarded([&] {
    const std::string f = field;
    const auto &a = aud->impl;
    if (f == "max_increase")
      *out = a.max_increase;
    else if (f == "rel_increase")
      *out = a.rel_increase;
    else if (f == "initial_value")
      *out = a.initial_value;
    else if (f == "final_value")
      *out = a.final_value;
    else if (f == "final_distance")
      *out = a.final_distance;
    else if (f == "decrease_tol")
      *out = a.decrease_tol;
    else if (f == "convergence_tol")
      *out = a.convergence_tol;
    else
      throw virodyn::InvalidArgumentError("unknown audit field '" + f + "'");
  });
}

size_t vd_audit_samples(const vd_audit *aud) { return aud ? aud->impl.values.size() : 0; }

vd_status vd_audit_sample(const vd_audit *aud, size_t i, double *time, double *value) {
  if (!aud || !time || !value) return fail_invalid("vd_audit_sample: null argument");
  if (i >= aud->impl.values.size()) return fail_invalid("vd_audit_sample: index out of range");
  *time = aud->impl.times[i];
  *value = aud->impl.values[i];
  return VD_OK;
}

vd_status vd_audit_text(const vd_audit *aud, char **out) {
  if (!aud || !out) return fail_invalid("vd_audit_text: null argument");
  return guarded([&] { *out = dup_string(aud->impl.text()); });
}

} /* extern "C" */
