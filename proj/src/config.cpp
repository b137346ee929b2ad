#include "hydroelastic/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "hydroelastic/io.hpp"

namespace hydroelastic {
namespace {

// Canonical key order; also the set of legal keys.
const std::vector<std::pair<std::string, std::string>>& schema() {
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"grid.N", "128"},
      {"physics.rho0", "0"},
      {"physics.sigma", "0"},
      {"physics.tau", "1"},
      {"physics.rho1", "0.5"},
      {"physics.rho2", "0.5"},
      {"physics.g", "0"},
      {"initial.theta_sin", ""},
      {"initial.theta_cos", ""},
      {"initial.gamma_sin", ""},
      {"initial.gamma_cos", ""},
      {"initial.gamma_mean", "0"},
      {"time.t_end", "0.25"},
      {"time.scheme", "rk4"},
      {"time.dt", "auto"},
      {"time.cfl", "0.5"},
      {"time.filter_floor", "1e-13"},
      {"time.monitor_cadence", "10"},
      {"time.probe_cadence", "0"},
      {"time.energy_s", "4"},
      {"admissible.max_length", "12.566370614359172"},
      {"admissible.min_chord_arc", "0.1"},
      {"admissible.closure_tolerance", "1e-10"},
      {"admissible.correct_closure", "false"},
      {"sweep.pairs", ""},
      {"probe.trials", "16"},
      {"probe.seed", "20240607"},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strict binary64 parse with a decimal round-trip check.
double parse_double(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
    throw Error(ErrorKind::ConfigError, where + ": '" + t + "' is not a finite number");
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  if (std::strtod(buf, nullptr) != v) {
    throw Error(ErrorKind::ConfigError, where + ": '" + t + "' does not round-trip");
  }
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& where) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_double(item, where));
  }
  return out;
}

}  // namespace

Config::Config() {
  for (const auto& [k, v] : schema()) entries_[k] = Entry{v, "default"};
}

Config::Entry& Config::entry(const std::string& key, const std::string& context) {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw Error(ErrorKind::ConfigError, context + ": unknown key '" + key + "'");
  return it->second;
}

const Config::Entry& Config::entry(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw Error(ErrorKind::ConfigError, "unknown key '" + key + "'");
  return it->second;
}

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);
    std::string line = raw;
    const auto comment = line.find_first_of(";#");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::ConfigError, where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw Error(ErrorKind::ConfigError, where + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ConfigError, where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::ConfigError, where + ": missing key");
    if (section.empty()) throw Error(ErrorKind::ConfigError, where + ": key '" + key + "' outside any section");
    Entry& e = cfg.entry(section + "." + key, where);
    e.value = trim(line.substr(eq + 1));
    e.origin = where;
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorKind::ConfigError, "config file not found: " + path.string());
  }
  std::string text;
  try {
    text = io::read_text(path);
  } catch (const Error&) {
    throw Error(ErrorKind::ConfigError, "cannot read config file: " + path.string());
  }
  return parse(text, path.string());
}

void Config::set(const std::string& key, const std::string& value) {
  Entry& e = entry(key, "--set");
  e.value = trim(value);
  e.origin = "--set";
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw Error(ErrorKind::ConfigError, "--set: expected key=value, got '" + assignment + "'");
  }
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

const std::string& Config::get(const std::string& key) const { return entry(key).value; }

double Config::number(const std::string& key) const {
  const Entry& e = entry(key);
  return parse_double(e.value, e.origin + ": key '" + key + "'");
}

long Config::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 1e15) {
    throw Error(ErrorKind::ConfigError, entry(key).origin + ": key '" + key + "' must be an integer");
  }
  return static_cast<long>(v);
}

std::vector<double> Config::numbers(const std::string& key) const {
  const Entry& e = entry(key);
  return parse_list(e.value, e.origin + ": key '" + key + "'");
}

std::string Config::dump() const {
  std::ostringstream os;
  std::string section;
  for (const auto& [key, def] : schema()) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) os << '\n';
      os << '[' << sec << "]\n";
      section = sec;
    }
    os << key.substr(dot + 1) << " = " << entries_.at(key).value << '\n';
  }
  return os.str();
}

InterfaceState InitialSpec::build(Index n) const {
  const Grid grid(n);
  const Field a = grid.nodes();
  Field theta = Field::Zero(n);
  Field gamma = Field::Constant(n, gamma_mean);
  auto add = [&](Field& f, const std::vector<double>& c, bool sine) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double k = static_cast<double>(i + 1);
      const Eigen::ArrayXd ka = k * a.array();
      f += c[i] * (sine ? Eigen::ArrayXd(ka.sin()) : Eigen::ArrayXd(ka.cos())).matrix();
    }
  };
  add(theta, theta_sin, true);
  add(theta, theta_cos, false);
  add(gamma, gamma_sin, true);
  add(gamma, gamma_cos, false);
  return make_state(theta, gamma);
}

std::vector<ParameterPair> parse_pairs(const std::string& text) {
  std::vector<ParameterPair> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorKind::ConfigError, "sweep.pairs: expected sigma:rho0, got '" + item + "'");
    }
    out.push_back({parse_double(item.substr(0, colon), "sweep.pairs"),
                   parse_double(item.substr(colon + 1), "sweep.pairs")});
  }
  return out;
}

RunConfig to_run_config(const Config& cfg) {
  auto bad = [](const std::string& key, const std::string& why) {
    return Error(ErrorKind::ConfigError, "key '" + key + "': " + why);
  };
  RunConfig rc;
  const long n = cfg.integer("grid.N");
  if (n < 4 || n % 2 != 0) throw bad("grid.N", "must be an even integer >= 4");
  rc.n = n;

  rc.params.rho0 = cfg.number("physics.rho0");
  rc.params.sigma = cfg.number("physics.sigma");
  rc.params.tau = cfg.number("physics.tau");
  rc.params.rho1 = cfg.number("physics.rho1");
  rc.params.rho2 = cfg.number("physics.rho2");
  rc.params.g = cfg.number("physics.g");
  try {
    rc.params.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigError, std::string("[physics]: ") + e.what());
  }

  rc.initial.theta_sin = cfg.numbers("initial.theta_sin");
  rc.initial.theta_cos = cfg.numbers("initial.theta_cos");
  rc.initial.gamma_sin = cfg.numbers("initial.gamma_sin");
  rc.initial.gamma_cos = cfg.numbers("initial.gamma_cos");
  rc.initial.gamma_mean = cfg.number("initial.gamma_mean");

  rc.t_end = cfg.number("time.t_end");
  if (rc.t_end < 0.0) throw bad("time.t_end", "must be nonnegative");
  try {
    rc.policy.scheme = scheme_from_string(cfg.get("time.scheme"));
  } catch (const Error&) {
    throw bad("time.scheme", "must be rk4 or imex");
  }
  if (cfg.get("time.dt") != "auto") rc.policy.dt = cfg.number("time.dt");
  rc.policy.cfl = cfg.number("time.cfl");
  rc.policy.filter_floor = cfg.number("time.filter_floor");
  rc.policy.monitor_cadence = static_cast<int>(cfg.integer("time.monitor_cadence"));
  rc.policy.probe_cadence = static_cast<int>(cfg.integer("time.probe_cadence"));
  rc.policy.energy_s = static_cast<int>(cfg.integer("time.energy_s"));
  rc.policy.admissible.max_length = cfg.number("admissible.max_length");
  rc.policy.admissible.min_chord_arc = cfg.number("admissible.min_chord_arc");
  rc.policy.admissible.closure_tolerance = cfg.number("admissible.closure_tolerance");
  {
    const std::string v = cfg.get("admissible.correct_closure");
    if (v != "true" && v != "false") throw bad("admissible.correct_closure", "must be true or false");
    rc.policy.admissible.correct_closure = v == "true";
  }
  try {
    rc.policy.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigError, std::string("[time]: ") + e.what());
  }

  rc.pairs = parse_pairs(cfg.get("sweep.pairs"));
  rc.probe_trials = static_cast<int>(cfg.integer("probe.trials"));
  if (rc.probe_trials < 1) throw bad("probe.trials", "must be positive");
  const long seed = cfg.integer("probe.seed");
  if (seed < 0) throw bad("probe.seed", "must be nonnegative");
  rc.seed = static_cast<std::uint64_t>(seed);
  rc.policy.probe.trials = rc.probe_trials;
  rc.policy.probe.seed = rc.seed;
  return rc;
}

}  // namespace hydroelastic
