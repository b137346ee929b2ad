#pragma once

// Sectioned key = value configuration. Every key has a default, so a file
// only lists what it changes; unknown keys are errors.
//
//   [physics]
//   sigma = 0.01
//   [initial]
//   theta_sin = 0.1        ; coefficient list for k = 1, 2, ...

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hydroelastic/timestepper.hpp"

namespace hydroelastic {

class Config {
 public:
  /// Defaults only.
  Config();
  /// Throws ConfigError naming origin:line and the key on any problem.
  static Config parse(const std::string& text, const std::string& origin = "<config>");
  static Config load(const std::filesystem::path& path);

  /// Override of a dotted key ("physics.sigma"); the key must exist.
  void set(const std::string& dotted_key, const std::string& value);
  /// "key=value" form used by --set.
  void apply_override(const std::string& assignment);

  const std::string& get(const std::string& dotted_key) const;
  double number(const std::string& dotted_key) const;
  long integer(const std::string& dotted_key) const;
  std::vector<double> numbers(const std::string& dotted_key) const;

  /// Effective configuration in canonical order; parse(dump()) reproduces it.
  std::string dump() const;

 private:
  struct Entry {
    std::string value;
    std::string origin;  ///< "file:line", "--set" or "default"
  };
  Entry& entry(const std::string& dotted_key, const std::string& context);
  const Entry& entry(const std::string& dotted_key) const;
  std::map<std::string, Entry> entries_;
};

/// Fourier description of the initial data, coefficients for k = 1, 2, ...
struct InitialSpec {
  std::vector<double> theta_sin, theta_cos, gamma_sin, gamma_cos;
  double gamma_mean = 0.0;

  InterfaceState build(Index n) const;
};

struct ParameterPair {
  double sigma = 0.0;
  double rho0 = 0.0;
};

struct RunConfig {
  Index n = 128;
  PhysParams params;
  InitialSpec initial;
  StepPolicy policy;
  double t_end = 0.25;
  std::vector<ParameterPair> pairs;
  int probe_trials = 16;
  std::uint64_t seed = 20240607;
};

/// Validated, typed view; ConfigError names the offending key.
RunConfig to_run_config(const Config& cfg);

/// Parses "sigma:rho0, sigma:rho0, ...".
std::vector<ParameterPair> parse_pairs(const std::string& text);

}  // namespace hydroelastic
