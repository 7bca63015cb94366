// Scenario-driven front end: equilibrium analysis, DDE simulation, Lyapunov
// verification and parameter sweeps over the shared-library C API.
//
// Exit codes: 0 success, 1 numerical failure or failed audit,
//             2 configuration or usage error.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "svg_plot.hpp"
#include "virodyn.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitConfig = 2;

int exit_code_for(vd_status st) {
  switch (st) {
    case VD_OK: return kExitOk;
    case VD_ERR_CONFIG:
    case VD_ERR_IO:
    case VD_ERR_INVALID_ARGUMENT: return kExitConfig;
    default: return kExitNumeric;
  }
}

int report_failure(const char *what, vd_status st) {
  std::cerr << "error: " << what << ": " << vd_last_error() << "\n";
  return exit_code_for(st);
}

struct Handle {
  vd_scenario *sc = nullptr;
  ~Handle() { vd_scenario_free(sc); }
};

struct TrajHandle {
  vd_trajectory *tr = nullptr;
  ~TrajHandle() { vd_trajectory_free(tr); }
};

struct CommonOpts {
  std::string scenario;
  std::string out_dir;
  std::optional<double> step;
  std::optional<double> t_end;
};

// Loads the scenario and applies the command-line overrides.
int load_scenario(const CommonOpts &opts, Handle &h) {
  vd_status st = vd_scenario_load(opts.scenario.c_str(), &h.sc);
  if (st != VD_OK) return report_failure("loading scenario", st);
  if (opts.step) {
    if (*opts.step <= 0.0) {
      std::cerr << "error: --h must be > 0\n";
      return kExitConfig;
    }
    if ((st = vd_scenario_set(h.sc, "run.h", *opts.step)) != VD_OK)
      return report_failure("setting step", st);
  }
  if (opts.t_end) {
    if (*opts.t_end <= 0.0) {
      std::cerr << "error: --t-end must be > 0\n";
      return kExitConfig;
    }
    if ((st = vd_scenario_set(h.sc, "run.t_end", *opts.t_end)) != VD_OK)
      return report_failure("setting t_end", st);
  }
  return kExitOk;
}

// Resolves a configured output name against --out; empty names fall back to
// a default only when --out was given.
std::string resolve_output(const CommonOpts &opts, const std::string &configured,
                           const std::string &fallback) {
  if (opts.out_dir.empty())
    return configured.empty() ? "" : configured;
  fs::create_directories(opts.out_dir);
  const std::string name = configured.empty() ? fallback : fs::path(configured).filename().string();
  return (fs::path(opts.out_dir) / name).string();
}

std::string scenario_output(const Handle &h, const char *which) {
  char *raw = nullptr;
  if (vd_scenario_output(h.sc, which, &raw) != VD_OK || !raw) return "";
  std::string name = raw;
  vd_string_free(raw);
  return name;
}

json report_to_json(const vd_report *rep, const std::string &scenario) {
  static const char *regimes[] = {"infection_free", "ctl_inactivated", "ctl_activated"};
  json j;
  j["scenario"] = scenario;
  j["regime"] = regimes[vd_report_regime(rep)];
  for (const char *field : {"xbar", "g1", "g2", "g3", "r0", "r1"}) {
    double v = 0;
    vd_report_value(rep, field, &v);
    j[field] = v;
  }
  double rctl = 0;
  j["rctl"] = vd_report_value(rep, "rctl", &rctl) == VD_OK ? json(rctl) : json(nullptr);
  const char *names[] = {"e0", "e1", "e2"};
  for (int which = 0; which < 3; ++which) {
    double s[4];
    if (vd_report_equilibrium(rep, static_cast<vd_equilibrium_id>(which), s))
      j[names[which]] = {s[0], s[1], s[2], s[3]};
    else
      j[names[which]] = nullptr;
  }
  return j;
}

int write_text_file(const std::string &path, const std::string &content) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return kExitConfig;
  }
  out << content;
  return kExitOk;
}

int run_equilibria(const CommonOpts &opts) {
  Handle h;
  if (int rc = load_scenario(opts, h)) return rc;

  vd_report *rep = nullptr;
  vd_status st = vd_equilibria(h.sc, &rep);
  if (st != VD_OK) return report_failure("equilibrium analysis", st);

  char *text = nullptr;
  vd_report_text(rep, &text);
  std::cout << text;
  vd_string_free(text);

  const std::string path = resolve_output(opts, scenario_output(h, "report"), "report.json");
  int rc = kExitOk;
  if (!path.empty()) {
    rc = write_text_file(path, report_to_json(rep, opts.scenario).dump(2) + "\n");
    if (rc == kExitOk) std::cout << "report written to " << path << "\n";
  }
  vd_report_free(rep);
  return rc;
}

int run_simulate(const CommonOpts &opts) {
  Handle h;
  if (int rc = load_scenario(opts, h)) return rc;

  TrajHandle tr;
  vd_status st = vd_simulate(h.sc, &tr.tr);
  if (st != VD_OK) return report_failure("simulation", st);

  const size_t n = vd_trajectory_size(tr.tr);
  double t_last = 0, last[4];
  vd_trajectory_node(tr.tr, n - 1, &t_last, last);
  std::printf("integrated %zu steps (h = %g) to t = %g\n", n - 1, vd_trajectory_step(tr.tr),
              t_last);
  std::printf("final state: x = %.6f  y = %.6f  v = %.6f  z = %.6f\n", last[0], last[1], last[2],
              last[3]);

  int bounded = 0;
  char *mon = nullptr;
  if ((st = vd_monitor(h.sc, tr.tr, &bounded, &mon)) != VD_OK)
    return report_failure("monitor", st);
  std::cout << mon;
  vd_string_free(mon);

  const std::string stem = fs::path(opts.scenario).stem().string();
  const std::string csv_path = resolve_output(opts, scenario_output(h, "csv"), stem + ".csv");
  if (!csv_path.empty()) {
    st = vd_trajectory_write_csv_strided(tr.tr, csv_path.c_str(), vd_scenario_stride(h.sc));
    if (st != VD_OK) return report_failure("writing trajectory CSV", st);
    std::cout << "trajectory written to " << csv_path << "\n";
  }

  const std::string plot_path = resolve_output(opts, scenario_output(h, "plot"), stem + ".svg");
  if (!plot_path.empty()) {
    static const char *labels[] = {"x (healthy)", "y (infected)", "v (virus)", "z (CTL)"};
    static const char *colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    std::vector<svgplot::Series> series(4);
    const size_t stride = std::max<size_t>(1, n / 4000);
    for (int c = 0; c < 4; ++c) {
      series[c].label = labels[c];
      series[c].color = colors[c];
    }
    for (size_t i = 0; i < n; i += stride) {
      double t = 0, s[4];
      vd_trajectory_node(tr.tr, i, &t, s);
      for (int c = 0; c < 4; ++c) {
        series[c].t.push_back(t);
        series[c].value.push_back(s[c]);
      }
    }
    svgplot::write_line_plot(plot_path, stem, series);
    std::cout << "plot written to " << plot_path << "\n";
  }

  if (!bounded) {
    std::cerr << "warning: trajectory not inside the invariant box over the final span\n";
  }
  return kExitOk;
}

int run_verify(const CommonOpts &opts, const std::string &target) {
  Handle h;
  if (int rc = load_scenario(opts, h)) return rc;

  vd_equilibrium_id id;
  if (target == "e0")
    id = VD_E0;
  else if (target == "e1")
    id = VD_E1;
  else if (target == "e2")
    id = VD_E2;
  else {
    std::cerr << "error: --target must be e0, e1 or e2\n";
    return kExitConfig;
  }

  TrajHandle tr;
  vd_status st = vd_simulate(h.sc, &tr.tr);
  if (st != VD_OK) return report_failure("simulation", st);

  vd_audit *aud = nullptr;
  if ((st = vd_verify(h.sc, tr.tr, id, &aud)) != VD_OK) return report_failure("audit", st);

  char *text = nullptr;
  vd_audit_text(aud, &text);
  std::cout << text;
  vd_string_free(text);

  const std::string csv_path = resolve_output(opts, "", "lyapunov.csv");
  if (!opts.out_dir.empty()) {
    std::ofstream out(csv_path);
    out << "t,V\n";
    const size_t n = vd_audit_samples(aud);
    for (size_t i = 0; i < n; ++i) {
      double t = 0, v = 0;
      vd_audit_sample(aud, i, &t, &v);
      out << std::scientific;
      out.precision(17);
      out << t << "," << v << "\n";
    }
    std::cout << "functional samples written to " << csv_path << "\n";
  }

  const int rc = vd_audit_pass(aud) ? kExitOk : kExitNumeric;
  vd_audit_free(aud);
  return rc;
}

int run_sweep(const CommonOpts &opts, int workers, bool with_simulate) {
  Handle h;
  if (int rc = load_scenario(opts, h)) return rc;

  const size_t count = vd_scenario_sweep_count(h.sc);
  if (count == 0) {
    std::cerr << "error: scenario has no [sweep] section with values\n";
    return kExitConfig;
  }
  char *param_raw = nullptr;
  vd_status st = vd_scenario_sweep_param(h.sc, &param_raw);
  if (st != VD_OK) return report_failure("sweep parameter", st);
  const std::string param = param_raw;
  vd_string_free(param_raw);

  struct Row {
    double value = 0, r0 = 0, r1 = 0, distance = -1;
    int regime = 0;
    bool ok = false;
    std::string error;
  };
  std::vector<Row> rows(count);
  std::atomic<size_t> next{0};

  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      Row &row = rows[i];
      vd_scenario_sweep_value(h.sc, i, &row.value);
      vd_scenario *cl = nullptr;
      if (vd_scenario_clone(h.sc, &cl) != VD_OK) {
        row.error = vd_last_error();
        continue;
      }
      vd_report *rep = nullptr;
      if (vd_scenario_set(cl, param.c_str(), row.value) == VD_OK &&
          vd_equilibria(cl, &rep) == VD_OK) {
        vd_report_value(rep, "r0", &row.r0);
        vd_report_value(rep, "r1", &row.r1);
        row.regime = vd_report_regime(rep);
        row.ok = true;
        if (with_simulate) {
          vd_trajectory *tr = nullptr;
          if (vd_simulate(cl, &tr) == VD_OK) {
            double e[4] = {0, 0, 0, 0};
            const vd_equilibrium_id target = row.regime == VD_REGIME_CTL_ACTIVATED ? VD_E2
                                             : row.regime == VD_REGIME_CTL_INACTIVATED ? VD_E1
                                                                                       : VD_E0;
            vd_report_equilibrium(rep, target, e);
            const size_t nn = vd_trajectory_size(tr);
            double t = 0, s[4];
            vd_trajectory_node(tr, nn - 1, &t, s);
            double norm = 1.0, dist = 0.0;
            for (int c = 0; c < 4; ++c) {
              norm = std::max(norm, std::abs(e[c]));
              dist = std::max(dist, std::abs(s[c] - e[c]));
            }
            row.distance = dist / norm;
            vd_trajectory_free(tr);
          } else {
            row.error = vd_last_error();
            row.ok = false;
          }
        }
      } else {
        row.error = vd_last_error();
      }
      vd_report_free(rep);
      vd_scenario_free(cl);
    }
  };

  std::vector<std::thread> pool;
  const int n_workers = std::max(1, workers);
  for (int i = 1; i < n_workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto &th : pool) th.join();

  static const char *regimes[] = {"infection_free", "ctl_inactivated", "ctl_activated"};
  std::ostringstream csv;
  csv.precision(12);
  csv << "value,r0,r1,regime" << (with_simulate ? ",final_distance" : "") << "\n";
  std::printf("%14s %14s %14s  %s\n", param.c_str(), "R0", "R1", "regime");
  bool any_failed = false;
  for (const Row &row : rows) {
    if (!row.ok) {
      any_failed = true;
      std::printf("%14g  failed: %s\n", row.value, row.error.c_str());
      continue;
    }
    std::printf("%14g %14.6f %14.6f  %s", row.value, row.r0, row.r1, regimes[row.regime]);
    csv << row.value << "," << row.r0 << "," << row.r1 << "," << regimes[row.regime];
    if (with_simulate) {
      std::printf("  dist %.4g", row.distance);
      csv << "," << row.distance;
    }
    csv << "\n";
    std::printf("\n");
  }

  const std::string csv_path = resolve_output(opts, "", "sweep.csv");
  if (!opts.out_dir.empty()) {
    if (int rc = write_text_file(csv_path, csv.str())) return rc;
    std::cout << "sweep table written to " << csv_path << "\n";
  }
  return any_failed ? kExitNumeric : kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"distributed-delay viral dynamics: equilibria, simulation, verification"};
  app.require_subcommand(1);

  CommonOpts opts;
  int workers = static_cast<int>(std::min(4u, std::max(1u, std::thread::hardware_concurrency())));
  bool sweep_simulate = false;
  std::string target;

  app.set_help_flag("--help", "print help"); // frees -h / --h for the step override

  auto add_common = [&](CLI::App *cmd, bool with_run_flags) {
    cmd->set_help_flag("--help", "print help");
    cmd->add_option("scenario", opts.scenario, "scenario config file")->required();
    cmd->add_option("--out", opts.out_dir, "directory for output files");
    if (with_run_flags) {
      cmd->add_option("--h", opts.step, "integration step override");
      cmd->add_option("--t-end", opts.t_end, "integration end time override");
    }
  };

  CLI::App *eq = app.add_subcommand("equilibria", "reproduction numbers and equilibria");
  add_common(eq, false);
  CLI::App *sim = app.add_subcommand("simulate", "integrate the delay system");
  add_common(sim, true);
  CLI::App *ver = app.add_subcommand("verify", "Lyapunov decrease audit");
  add_common(ver, true);
  ver->add_option("--target", target, "equilibrium to audit: e0, e1 or e2")->required();
  CLI::App *sw = app.add_subcommand("sweep", "classify across the scenario's sweep values");
  add_common(sw, true);
  sw->add_option("--workers", workers, "concurrent sweep workers");
  sw->add_flag("--simulate", sweep_simulate, "also simulate and report final distances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (eq->parsed()) return run_equilibria(opts);
    if (sim->parsed()) return run_simulate(opts);
    if (ver->parsed()) return run_verify(opts, target);
    if (sw->parsed()) return run_sweep(opts, workers, sweep_simulate);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitConfig;
}
