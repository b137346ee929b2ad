#include <doctest.h>

#include <filesystem>
#include <set>
#include <sstream>

#include "hydroelastic/cli.hpp"
#include "hydroelastic/diagnostics.hpp"
#include "hydroelastic/io.hpp"

namespace fs = std::filesystem;
namespace io = hydroelastic::io;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "hydroelastic");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = hydroelastic::cli::parse_and_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(TEST_SCRATCH_DIR) / "cli" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& text) {
  io::write_text(dir / name, text);
  return dir / name;
}

std::set<std::string> listing(const fs::path& dir) {
  std::set<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.insert(e.path().filename().string());
  return names;
}

const char* kSmall =
    "[grid]\nN = 16\n"
    "[physics]\nrho1 = 0.6\nrho2 = 0.4\nsigma = 0.001\nrho0 = 0.001\n"
    "[initial]\ntheta_sin = 0.1\ngamma_cos = 0.1\n"
    "[time]\nt_end = 0.004\n";

}  // namespace

TEST_CASE("simulate on the equilibrium writes an all-zero energy CSV") {
  const fs::path dir = scratch("eq");
  const fs::path cfg = write_config(dir, "eq.cfg", "[grid]\nN = 16\n[time]\nt_end = 0.05\n");
  const Result r = call({"simulate", "--config", cfg.string(), "--out", (dir / "out").string()});
  CHECK(r.code == 0);
  std::istringstream is(io::read_text(dir / "out" / "energy.csv"));
  const auto rows = hydroelastic::read_energy_csv(is);
  CHECK(!rows.empty());
  for (const auto& row : rows) {
    CHECK(row.E_total == 0.0);
    CHECK(row.E0 == 0.0);
  }
  CHECK(listing(dir / "out") ==
        std::set<std::string>{"config.ini", "energy.csv", "fit.json", "trajectory.jsonl", "trajectory.meta.json"});
  CHECK(listing(dir) == std::set<std::string>{"eq.cfg", "out"});
}

TEST_CASE("usage and configuration errors exit with 2") {
  const fs::path dir = scratch("errors");
  const fs::path missing = dir / "nope.cfg";
  Result r = call({"simulate", "--config", missing.string(), "--out", (dir / "o").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find(missing.string()) != std::string::npos);

  const fs::path bad = write_config(dir, "bad.cfg", "[physics]\nsigma = 0.01\nbogus = 1\n");
  r = call({"simulate", "--config", bad.string(), "--out", (dir / "o").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("bogus") != std::string::npos);
  CHECK(r.err.find(":3") != std::string::npos);

  const fs::path ok = write_config(dir, "ok.cfg", kSmall);
  r = call({"simulate", "--config", ok.string(), "--set", "physics.nosuch=1", "--out", (dir / "o").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("physics.nosuch") != std::string::npos);

  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"simulate"}).code == 2);
  CHECK(call({"report", "--out", (dir / "empty").string()}).code == 2);
}

TEST_CASE("a failed run exits with 1") {
  const fs::path dir = scratch("fail");
  const fs::path cfg = write_config(dir, "f.cfg",
                                    "[grid]\nN = 32\n[physics]\nrho1 = 0.6\nrho2 = 0.4\n"
                                    "[initial]\ntheta_sin = 0.05\n"
                                    "gamma_cos = 0.1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0.001\n"
                                    "[time]\nt_end = 2\ndt = 0.2\n");
  const Result r = call({"simulate", "--config", cfg.string(), "--out", (dir / "o").string()});
  CHECK(r.code == 1);
  const auto meta = io::read_json(dir / "o" / "trajectory.meta.json");
  CHECK(meta.at("completed") == false);
}

TEST_CASE("the echoed configuration reproduces the run bitwise") {
  const fs::path dir = scratch("echo");
  const fs::path cfg = write_config(dir, "run.cfg", kSmall);
  Result r = call({"simulate", "--config", cfg.string(), "--set", "physics.sigma=0.002", "--out",
                   (dir / "a").string()});
  REQUIRE(r.code == 0);
  r = call({"simulate", "--config", (dir / "a" / "config.ini").string(), "--out", (dir / "b").string()});
  REQUIRE(r.code == 0);
  CHECK(io::read_text(dir / "a" / "trajectory.jsonl") == io::read_text(dir / "b" / "trajectory.jsonl"));
  CHECK(io::read_text(dir / "a" / "config.ini") == io::read_text(dir / "b" / "config.ini"));
  CHECK(io::read_text(dir / "a" / "config.ini").find("sigma = 0.002") != std::string::npos);
}

TEST_CASE("sweep, probe and report end to end") {
  const fs::path dir = scratch("sweep");
  const fs::path cfg =
      write_config(dir, "ladder.cfg", std::string(kSmall) + "[sweep]\npairs = 0:0, 0.004:0.004, 0.002:0.002, 0.001:0.001\n");
  Result r = call({"sweep", "--config", cfg.string(), "--out", (dir / "s").string(), "--threads", "2"});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "s" / "pairs.csv"));
  CHECK(fs::exists(dir / "s" / "summary.json"));
  CHECK(fs::exists(dir / "s" / "config.ini"));

  r = call({"report", "--out", (dir / "s").string()});
  CHECK(r.code == 0);
  CHECK(io::read_text(dir / "s" / "report_pairs.csv") == io::read_text(dir / "s" / "pairs.csv"));
  const auto rep = io::read_json(dir / "s" / "report.json");
  const auto summary = io::read_json(dir / "s" / "summary.json");
  CHECK(rep.at("sweep").at("cauchy") == summary.at("cauchy"));

  r = call({"probe", "--config", cfg.string(), "--out", (dir / "p").string(), "--seed", "5"});
  CHECK(r.code == 0);
  const std::string probe = io::read_text(dir / "p" / "probe.csv");
  CHECK(probe.rfind("sigma,rho0,estimated_norm,iterations,converged\n", 0) == 0);
  CHECK(std::count(probe.begin(), probe.end(), '\n') == 5);
  CHECK(io::read_text(dir / "p" / "config.ini").find("seed = 5") != std::string::npos);

  r = call({"simulate", "--config", cfg.string(), "--out", (dir / "one").string()});
  REQUIRE(r.code == 0);
  r = call({"report", "--out", (dir / "one").string()});
  CHECK(r.code == 0);
  const auto fit = io::read_json(dir / "one" / "fit.json");
  const auto refit = io::read_json(dir / "one" / "report.json").at("energy_fit");
  CHECK(fit.at("c1") == refit.at("c1"));
}
