#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "equilibria.hpp"
#include "integrator.hpp"
#include "model.hpp"
#include "verifier.hpp"

namespace virodyn {

struct RunSettings {
  double t_end = 100.0;
  std::optional<double> h; // absent: stability-aware default
  QuadratureSpec quad;
};

struct OutputPaths {
  std::string csv;    // trajectory
  std::string plot;   // SVG
  std::string report; // JSON
  int stride = 1;     // CSV row thinning (1 = every grid point)
};

struct SweepSettings {
  std::string param; // dotted key, e.g. "incidence.beta"
  std::vector<double> values;
};

// A parsed scenario file: sectioned key-value text describing the model,
// the history, run settings, output paths and an optional sweep.  Values
// can be overridden through dotted keys before building.
class Scenario {
public:
  static Scenario load(const std::string &path);
  static Scenario parse(const std::string &text, const std::string &origin = "<string>");

  // Numeric override / lookup via "section.key".
  void set(const std::string &dotted_key, double value);
  double get(const std::string &dotted_key) const;

  ModelSpec build_model() const;
  HistoryFunction build_history() const;
  RunSettings run_settings() const;
  OutputPaths outputs() const;
  std::optional<SweepSettings> sweep() const;

  ValidationReport validate() const; // hypothesis checks on the built model

  // Validates, then classifies.  Hypothesis failures raise ConfigError.
  EquilibriumReport analyze() const;

  // Validates, then integrates with the retry ladder.
  Trajectory simulate() const;

  // Audit of the functional matching `target` on a trajectory from this
  // scenario.  The target equilibrium must exist in the classified regime.
  LyapunovAudit verify(Functional target, const Trajectory &traj) const;

  const std::string &origin() const { return origin_; }

private:
  using Section = std::map<std::string, std::string>;
  std::map<std::string, Section> sections_;
  std::string origin_;

  const std::string *find(const std::string &section, const std::string &key) const;
  std::string get_string(const std::string &section, const std::string &key) const;
  std::string get_string_or(const std::string &section, const std::string &key,
                            const std::string &fallback) const;
  double get_number(const std::string &section, const std::string &key) const;
  double get_number_or(const std::string &section, const std::string &key, double fallback) const;
  std::vector<double> get_list(const std::string &section, const std::string &key) const;

  DelayKernel build_kernel(const std::string &section) const;
};

void write_trajectory_csv(const Trajectory &traj, const std::string &path, int stride = 1);

} // namespace virodyn
