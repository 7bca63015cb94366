#include "scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace virodyn {

namespace {

const std::set<std::string> kKnownSections = {"growth",  "incidence", "phi1",    "phi2",
                                              "params",  "kernel1",   "kernel2", "kernel3",
                                              "history", "run",       "outputs", "sweep"};

std::string trim(const std::string &s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_number(const std::string &raw, const std::string &where) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception &) {
    throw ConfigError("config: " + where + ": cannot parse number from '" + raw + "'");
  }
}

std::vector<double> parse_list(const std::string &raw, const std::string &where) {
  std::vector<double> out;
  std::string token;
  std::istringstream is(raw);
  while (is >> token) {
    if (!token.empty() && token.back() == ',') token.pop_back();
    if (token.empty()) continue;
    out.push_back(parse_number(token, where));
  }
  return out;
}

} // namespace

Scenario Scenario::load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

Scenario Scenario::parse(const std::string &text, const std::string &origin) {
  Scenario sc;
  sc.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: " + origin + ":" + std::to_string(lineno) +
                          ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!kKnownSections.count(section))
        throw ConfigError("config: " + origin + ": unknown section [" + section + "]");
      sc.sections_[section]; // allow empty sections
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || section.empty())
      throw ConfigError("config: " + origin + ":" + std::to_string(lineno) +
                        ": expected 'key = value' inside a section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config: " + origin + ":" + std::to_string(lineno) + ": empty key or value");
    auto [it, inserted] = sc.sections_[section].emplace(key, value);
    if (!inserted)
      throw ConfigError("config: " + origin + ": duplicate key '" + key + "' in section [" +
                        section + "]");
  }
  return sc;
}

const std::string *Scenario::find(const std::string &section, const std::string &key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

std::string Scenario::get_string(const std::string &section, const std::string &key) const {
  if (const std::string *v = find(section, key)) return *v;
  throw ConfigError("config: missing key '" + key + "' in section [" + section + "]");
}

std::string Scenario::get_string_or(const std::string &section, const std::string &key,
                                    const std::string &fallback) const {
  const std::string *v = find(section, key);
  return v ? *v : fallback;
}

double Scenario::get_number(const std::string &section, const std::string &key) const {
  return parse_number(get_string(section, key), "[" + section + "] " + key);
}

double Scenario::get_number_or(const std::string &section, const std::string &key,
                               double fallback) const {
  const std::string *v = find(section, key);
  return v ? parse_number(*v, "[" + section + "] " + key) : fallback;
}

std::vector<double> Scenario::get_list(const std::string &section, const std::string &key) const {
  return parse_list(get_string(section, key), "[" + section + "] " + key);
}

void Scenario::set(const std::string &dotted_key, double value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == dotted_key.size())
    throw InvalidArgumentError("override key must look like 'section.key', got '" + dotted_key +
                               "'");
  const std::string section = dotted_key.substr(0, dot);
  if (!kKnownSections.count(section))
    throw InvalidArgumentError("override: unknown section '" + section + "'");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  sections_[section][dotted_key.substr(dot + 1)] = buf;
}

double Scenario::get(const std::string &dotted_key) const {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos)
    throw InvalidArgumentError("lookup key must look like 'section.key', got '" + dotted_key + "'");
  return get_number(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
}

DelayKernel Scenario::build_kernel(const std::string &section) const {
  const std::string kind = get_string(section, "kind");
  if (kind == "dirac") return DelayKernel::dirac(get_number(section, "tau"));
  if (kind == "gamma")
    return DelayKernel::gamma(static_cast<int>(get_number(section, "shape")),
                              get_number(section, "rate"));
  if (kind == "table")
    return DelayKernel::tabulated(get_list(section, "nodes"), get_list(section, "densities"));
  throw ConfigError("config: [" + section + "] kind must be dirac, gamma or table, got '" + kind +
                    "'");
}

ModelSpec Scenario::build_model() const {
  for (const char *required : {"growth", "incidence", "params", "kernel1", "kernel2", "kernel3"})
    if (!sections_.count(required))
      throw ConfigError("config: " + origin_ + ": missing section [" + std::string(required) + "]");

  const std::string gkind = get_string("growth", "kind");
  GrowthFunction growth = GrowthFunction::logistic_source(0, 0, 0, 1);
  if (gkind == "logistic_source") {
    growth = GrowthFunction::logistic_source(get_number("growth", "lambda"),
                                             get_number("growth", "d"), get_number("growth", "r"),
                                             get_number("growth", "K"));
  } else if (gkind == "linear") {
    growth = GrowthFunction::logistic_source(get_number("growth", "lambda"),
                                             get_number("growth", "d"), 0.0, 1.0);
  } else {
    throw ConfigError("config: [growth] kind must be logistic_source or linear, got '" + gkind +
                      "'");
  }

  const std::string ikind = get_string("incidence", "kind");
  IncidenceFunction incidence = IncidenceFunction::saturating(0, 0, 0);
  if (ikind == "ratio_dependent") {
    incidence = IncidenceFunction::ratio_dependent(get_number("incidence", "beta"),
                                                   get_number("incidence", "alpha"),
                                                   get_number("incidence", "gamma"));
  } else if (ikind == "saturating") {
    incidence = IncidenceFunction::saturating(get_number("incidence", "beta"),
                                              get_number("incidence", "alpha"),
                                              get_number("incidence", "gamma"));
  } else {
    throw ConfigError("config: [incidence] kind must be ratio_dependent or saturating, got '" +
                      ikind + "'");
  }

  auto response = [&](const std::string &section) {
    const std::string kind = get_string_or(section, "kind", "identity");
    if (kind == "identity") return ResponseFunction::identity();
    if (kind == "linear") return ResponseFunction::linear(get_number(section, "slope"));
    throw ConfigError("config: [" + section + "] kind must be identity or linear, got '" + kind +
                      "'");
  };

  Parameters params{};
  params.a = get_number("params", "a");
  params.p = get_number("params", "p");
  params.k = get_number("params", "k");
  params.u = get_number("params", "u");
  params.c = get_number("params", "c");
  params.b = get_number("params", "b");
  params.alpha1 = get_number("params", "alpha1");
  params.alpha2 = get_number("params", "alpha2");

  try {
    return ModelSpec(std::move(growth), std::move(incidence), response("phi1"), response("phi2"),
                     params, build_kernel("kernel1"), build_kernel("kernel2"),
                     build_kernel("kernel3"));
  } catch (const InvalidArgumentError &e) {
    throw ConfigError("config: " + origin_ + ": " + e.what());
  }
}

HistoryFunction Scenario::build_history() const {
  if (!sections_.count("history"))
    return HistoryFunction::constant(State{25.0, 50.0, 10.0, 5.0});
  const std::string kind = get_string_or("history", "kind", "constant");
  try {
    if (kind == "constant") {
      std::vector<double> s{25.0, 50.0, 10.0, 5.0};
      if (find("history", "state")) s = get_list("history", "state");
      if (s.size() != 4) throw ConfigError("config: [history] state needs 4 components");
      return HistoryFunction::constant(State{s[0], s[1], s[2], s[3]});
    }
    if (kind == "piecewise") {
      const std::vector<double> times = get_list("history", "times");
      const std::vector<double> flat = get_list("history", "values");
      if (flat.size() != 4 * times.size())
        throw ConfigError("config: [history] values must hold 4 numbers per breakpoint");
      std::vector<State> states;
      states.reserve(times.size());
      for (std::size_t i = 0; i < times.size(); ++i)
        states.push_back(State{flat[4 * i], flat[4 * i + 1], flat[4 * i + 2], flat[4 * i + 3]});
      return HistoryFunction::piecewise_linear(times, states);
    }
  } catch (const InvalidArgumentError &e) {
    throw ConfigError("config: [history]: " + std::string(e.what()));
  }
  throw ConfigError("config: [history] kind must be constant or piecewise, got '" + kind + "'");
}

RunSettings Scenario::run_settings() const {
  RunSettings run;
  run.t_end = get_number_or("run", "t_end", 100.0);
  if (find("run", "h")) {
    run.h = get_number("run", "h");
    if (!(*run.h > 0.0)) throw ConfigError("config: [run] h must be > 0");
  }
  run.quad.tail_mass_epsilon = get_number_or("run", "tail_epsilon", 1e-8);
  run.quad.panels = static_cast<int>(get_number_or("run", "panels", 128));
  try {
    run.quad.validate();
  } catch (const InvalidArgumentError &e) {
    throw ConfigError("config: [run]: " + std::string(e.what()));
  }
  return run;
}

OutputPaths Scenario::outputs() const {
  OutputPaths out;
  out.csv = get_string_or("outputs", "csv", "");
  out.plot = get_string_or("outputs", "plot", "");
  out.report = get_string_or("outputs", "report", "");
  out.stride = static_cast<int>(get_number_or("outputs", "stride", 1));
  if (out.stride < 1) throw ConfigError("config: [outputs] stride must be >= 1");
  return out;
}

std::optional<SweepSettings> Scenario::sweep() const {
  if (!sections_.count("sweep")) return std::nullopt;
  SweepSettings sw;
  sw.param = get_string("sweep", "param");
  sw.values = get_list("sweep", "values");
  for (std::size_t i = 0; i + 1 < sw.values.size(); ++i)
    if (!(sw.values[i] < sw.values[i + 1]))
      throw ConfigError("config: [sweep] values must be ascending");
  for (double v : sw.values)
    if (!std::isfinite(v)) throw ConfigError("config: [sweep] values must be finite");
  return sw;
}

ValidationReport Scenario::validate() const { return validate_hypotheses(build_model()); }

EquilibriumReport Scenario::analyze() const {
  const ModelSpec model = build_model();
  const ValidationReport vr = validate_hypotheses(model);
  if (!vr.all_pass())
    throw ConfigError("scenario " + origin_ + " failed hypothesis validation:\n" + vr.text());
  return classify(model);
}

Trajectory Scenario::simulate() const {
  const ModelSpec model = build_model();
  const ValidationReport vr = validate_hypotheses(model);
  if (!vr.all_pass())
    throw ConfigError("scenario " + origin_ + " failed hypothesis validation:\n" + vr.text());
  const RunSettings run = run_settings();
  if (!(run.t_end > 0.0)) throw ConfigError("config: [run] t_end must be > 0");
  // an explicit step is honored exactly (breaches abort); only the default
  // policy walks the retry ladder
  if (run.h) return integrate(model, build_history(), run.t_end, *run.h, run.quad);
  return integrate_auto(model, build_history(), run.t_end, std::nullopt, run.quad);
}

LyapunovAudit Scenario::verify(Functional target, const Trajectory &traj) const {
  const ModelSpec model = build_model();
  const EquilibriumReport rep = classify(model);
  State e;
  switch (target) {
    case Functional::VE0: e = rep.e0; break;
    case Functional::VE1:
      if (!rep.e1)
        throw InvalidArgumentError("verify: E1 does not exist in this scenario (R0 <= 1)");
      e = *rep.e1;
      break;
    case Functional::VE2:
      if (!rep.e2)
        throw InvalidArgumentError("verify: E2 does not exist in this scenario (R1 <= 1)");
      e = *rep.e2;
      break;
  }
  return audit(target, model, e, traj, run_settings().quad);
}

void write_trajectory_csv(const Trajectory &traj, const std::string &path, int stride) {
  std::FILE *f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  std::fputs("t,x,y,v,z\n", f);
  const std::size_t n = traj.size();
  for (std::size_t i = 0; i < n; i += static_cast<std::size_t>(stride)) {
    const State &s = traj.state(i);
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", traj.time(i), s.x, s.y, s.v, s.z);
  }
  if (stride > 1 && (n - 1) % static_cast<std::size_t>(stride) != 0) {
    const State &s = traj.final_state();
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", traj.time(n - 1), s.x, s.y, s.v, s.z);
  }
  std::fclose(f);
}

} // namespace virodyn
