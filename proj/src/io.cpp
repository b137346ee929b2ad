#include "hydroelastic/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

namespace hydroelastic::io {
namespace {

json hex_array(const Field& f) {
  json a = json::array();
  for (Index j = 0; j < f.size(); ++j) a.push_back(to_hex(f[j]));
  return a;
}

Field field_from(const json& a, const char* name) {
  if (!a.is_array()) throw Error(ErrorKind::IoError, std::string("'") + name + "' is not an array");
  Field f(static_cast<Index>(a.size()));
  for (std::size_t j = 0; j < a.size(); ++j) {
    f[static_cast<Index>(j)] = a[j].is_string() ? from_hex(a[j].get<std::string>()) : a[j].get<double>();
  }
  return f;
}

double number_from(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::IoError, std::string("missing '") + key + "'");
  const json& v = j.at(key);
  return v.is_string() ? from_hex(v.get<std::string>()) : v.get<double>();
}

}  // namespace

std::string to_hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double from_hex(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw Error(ErrorKind::IoError, "not a number: '" + s + "'");
  return v;
}

json state_to_json(const InterfaceState& s) {
  return json{{"time", to_hex(s.time)},
              {"L", to_hex(s.L)},
              {"theta", hex_array(s.theta)},
              {"gamma", hex_array(s.gamma)}};
}

InterfaceState state_from_json(const json& j) {
  InterfaceState s;
  s.time = number_from(j, "time");
  s.L = number_from(j, "L");
  if (!j.contains("theta") || !j.contains("gamma")) throw Error(ErrorKind::IoError, "state lacks theta or gamma");
  s.theta = field_from(j.at("theta"), "theta");
  s.gamma = field_from(j.at("gamma"), "gamma");
  if (s.theta.size() != s.gamma.size()) throw Error(ErrorKind::GridMismatch, "theta and gamma sizes differ");
  return s;
}

void write_states_jsonl(const std::filesystem::path& path, const std::vector<InterfaceState>& states) {
  std::ostringstream os;
  for (const auto& s : states) os << state_to_json(s).dump() << '\n';
  write_text(path, os.str());
}

std::vector<InterfaceState> read_states_jsonl(const std::filesystem::path& path) {
  std::istringstream is(read_text(path));
  std::vector<InterfaceState> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(state_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::IoError, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

json params_to_json(const PhysParams& p) {
  return json{{"rho0", p.rho0}, {"sigma", p.sigma}, {"tau", p.tau},
              {"rho1", p.rho1}, {"rho2", p.rho2},   {"g", p.g}};
}

PhysParams params_from_json(const json& j) {
  PhysParams p;
  p.rho0 = j.at("rho0").get<double>();
  p.sigma = j.at("sigma").get<double>();
  p.tau = j.at("tau").get<double>();
  p.rho1 = j.at("rho1").get<double>();
  p.rho2 = j.at("rho2").get<double>();
  p.g = j.at("g").get<double>();
  return p;
}

json policy_to_json(const StepPolicy& p) {
  json j{{"scheme", to_string(p.scheme)},
         {"cfl", p.cfl},
         {"filter_floor", p.filter_floor},
         {"monitor_cadence", p.monitor_cadence},
         {"probe_cadence", p.probe_cadence},
         {"energy_s", p.energy_s},
         {"correct_closure", p.admissible.correct_closure}};
  j["dt"] = p.dt ? json(*p.dt) : json("auto");
  return j;
}

std::string git_blob_sha1(const std::string& content) {
  const std::string header = "blob " + std::to_string(content.size()) + std::string(1, '\0');
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  const bool ok = ctx && EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, md, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error(ErrorKind::IoError, "SHA-1 digest failed");
  static const char* digits = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += digits[md[i] >> 4];
    hex += digits[md[i] & 15];
  }
  return hex;
}

json trajectory_meta(const Trajectory& traj, const std::string& config_text) {
  json j{{"format", "hexfloat-jsonl v1"},
         {"N", traj.snapshots.empty() ? 0 : traj.snapshots.front().size()},
         {"params", params_to_json(traj.params)},
         {"policy", policy_to_json(traj.policy)},
         {"config_sha1", git_blob_sha1(config_text)},
         {"snapshots", traj.snapshots.size()},
         {"steps", traj.steps.size()},
         {"completed", traj.completed()},
         {"t_reached", traj.snapshots.empty() ? 0.0 : traj.snapshots.back().time},
         {"max_length_drift", traj.max_length_drift},
         {"max_closure_defect", traj.max_closure_defect},
         {"closure_warnings", traj.closure_warnings}};
  if (traj.failure) {
    j["failure"] = json{{"kind", to_string(traj.failure->kind)},
                        {"message", traj.failure->message},
                        {"time", traj.failure->time},
                        {"step", traj.failure->step}};
  }
  double probe_max = -1.0, residual_max = 0.0;
  int iterations_max = 0;
  for (const auto& r : traj.steps) {
    probe_max = std::max(probe_max, r.probe_norm);
    residual_max = std::max(residual_max, r.residual);
    iterations_max = std::max(iterations_max, r.iterations);
  }
  j["max_probe_norm"] = probe_max;
  j["max_fixed_point_residual"] = residual_max;
  j["max_fixed_point_iterations"] = iterations_max;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  os << text;
  if (!os) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IoError, path.string() + ": " + e.what());
  }
}

void write_energy_csv(const std::filesystem::path& path, const std::vector<EnergyReport>& rows) {
  std::ostringstream os;
  write_energy_header(os);
  for (const auto& r : rows) write_energy_row(os, r);
  write_text(path, os.str());
}

void write_trajectory(const std::filesystem::path& dir, const std::string& stem,
                      const Trajectory& traj, const std::string& config_text) {
  write_states_jsonl(dir / (stem + ".jsonl"), traj.snapshots);
  write_json(dir / (stem + ".meta.json"), trajectory_meta(traj, config_text));
  write_energy_csv(dir / (stem + ".energy.csv"), traj.diagnostics);
}

}  // namespace hydroelastic::io
