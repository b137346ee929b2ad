#include "hydroelastic/cli.hpp"

#include <filesystem>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "hydroelastic/limit_lab.hpp"

namespace hydroelastic::cli {
namespace {

namespace fs = std::filesystem;
using io::json;

struct Options {
  std::string config;
  std::string out = "out";
  std::vector<std::string> overrides;
  int threads = 1;
  std::optional<std::uint64_t> seed;
};

struct Loaded {
  Config cfg;
  RunConfig rc;
  std::string text;  ///< effective configuration as echoed
};

Loaded load(const Options& o) {
  Loaded l;
  l.cfg = o.config.empty() ? Config() : Config::load(o.config);
  for (const auto& s : o.overrides) l.cfg.apply_override(s);
  if (o.seed) l.cfg.set("probe.seed", std::to_string(*o.seed));
  l.rc = to_run_config(l.cfg);
  l.text = l.cfg.dump();
  return l;
}

InterfaceState initial_state(const RunConfig& rc) {
  try {
    return rc.initial.build(rc.n);
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigError, std::string("[initial]: ") + e.what());
  }
}

json fit_json(const std::vector<EnergyReport>& rows) {
  std::vector<double> t, e;
  for (const auto& r : rows) {
    if (!t.empty() && !(r.time > t.back())) continue;
    t.push_back(r.time);
    e.push_back(r.E_total);
  }
  const LogBoundFit fit = fit_log_bound(t, e);
  double tol_violation = 0.0;
  double e_min = e.empty() ? 0.0 : e.front();
  for (std::size_t i = 0; i < t.size(); ++i) {
    e_min = std::min(e_min, e[i]);
    const double excess = e[i] - log_bound(fit, t[i]) - 1e-8 * (1.0 + std::abs(e[i]));
    tol_violation = std::max(tol_violation, excess);
  }
  return json{{"c1", fit.c1},
              {"c2", fit.c2},
              {"c3", fit.c3},
              {"max_violation", fit.max_violation},
              {"violation_beyond_tolerance", tol_violation},
              {"min_E_total", e_min},
              {"samples", t.size()}};
}

int simulate(const Options& o, std::ostream& out, std::ostream& err) {
  const Loaded l = load(o);
  const InterfaceState init = initial_state(l.rc);
  const fs::path dir = o.out;
  io::write_text(dir / "config.ini", l.text);
  const Trajectory traj = run(init, l.rc.params, l.rc.policy, l.rc.t_end, checkpoint_times(l.rc.t_end));
  io::write_states_jsonl(dir / "trajectory.jsonl", traj.snapshots);
  io::write_json(dir / "trajectory.meta.json", io::trajectory_meta(traj, l.text));
  io::write_energy_csv(dir / "energy.csv", traj.diagnostics);
  if (!traj.diagnostics.empty()) io::write_json(dir / "fit.json", fit_json(traj.diagnostics));
  const InterfaceState& last = traj.snapshots.back();
  out << "simulate: " << traj.steps.size() << " steps to t = " << last.time << ", L = " << last.L << "\n";
  if (traj.closure_warnings > 0) {
    err << "warning: closure defect above tolerance at " << traj.closure_warnings
        << " monitor events (max " << traj.max_closure_defect << ")\n";
  }
  if (traj.failure) {
    err << "run failed at t = " << traj.failure->time << ": " << traj.failure->message << "\n";
    return 1;
  }
  return 0;
}

int do_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const Loaded l = load(o);
  SweepConfig sc;
  sc.initial = initial_state(l.rc);
  sc.base = l.rc.params;
  sc.pairs = l.rc.pairs;
  sc.t_end = l.rc.t_end;
  sc.policy = l.rc.policy;
  sc.output_dir = fs::path(o.out);
  sc.threads = o.threads;
  sc.config_text = l.text;
  if (sc.pairs.empty()) throw Error(ErrorKind::ConfigError, "key 'sweep.pairs': empty parameter list");
  io::write_text(fs::path(o.out) / "config.ini", l.text);
  const SweepResult r = sweep(sc);
  out << "sweep: " << r.pairs.size() << " runs, dt = " << r.dt << "\n";
  if (r.cauchy) {
    out << "cauchy slope " << r.cauchy->slope << ", r^2 " << r.cauchy->r_squared << "\n";
  }
  for (const auto& f : r.failures) err << f << "\n";
  return r.failures.empty() ? 0 : 1;
}

int probe(const Options& o, std::ostream& out, std::ostream&) {
  const Loaded l = load(o);
  const InterfaceState init = initial_state(l.rc);
  std::vector<ParameterPair> pairs = l.rc.pairs;
  if (pairs.empty()) pairs.push_back({l.rc.params.sigma, l.rc.params.rho0});
  const CurveOperators ops(init, l.rc.policy.admissible.closure_tolerance);
  std::ostringstream csv;
  csv << "sigma,rho0,estimated_norm,iterations,converged\n";
  for (const auto& pr : pairs) {
    PhysParams p = l.rc.params;
    p.sigma = pr.sigma;
    p.rho0 = pr.rho0;
    const OperatorProbeReport rep = probe_t_norm(ops, p, l.rc.policy.probe);
    csv << pr.sigma << ',' << pr.rho0 << ',' << rep.estimated_norm << ',' << rep.iterations << ','
        << (rep.converged ? 1 : 0) << '\n';
    out << "sigma=" << pr.sigma << " rho0=" << pr.rho0 << " |D2^-1 T| ~ " << rep.estimated_norm
        << (rep.converged ? "" : " (not converged)") << "\n";
  }
  io::write_text(fs::path(o.out) / "config.ini", l.text);
  io::write_text(fs::path(o.out) / "probe.csv", csv.str());
  return 0;
}

// Recomputes fits and tables from files already in the output directory.
int report(const Options& o, std::ostream& out, std::ostream&) {
  const fs::path dir = o.out;
  bool any = false;
  json rep{{"format", "report v1"}};
  if (fs::exists(dir / "energy.csv")) {
    std::istringstream is(io::read_text(dir / "energy.csv"));
    rep["energy_fit"] = fit_json(read_energy_csv(is));
    any = true;
  }
  if (fs::exists(dir / "summary.json")) {
    const json summary = io::read_json(dir / "summary.json");
    SweepResult r;
    r.checkpoint_times = summary.at("checkpoint_times").get<std::vector<double>>();
    r.zero_index = summary.at("zero_index").get<Eigen::Index>();
    r.dt = summary.at("dt").get<double>();
    for (const auto& p : summary.at("pairs")) {
      r.pairs.push_back({p.at("sigma").get<double>(), p.at("rho0").get<double>()});
      Trajectory t;
      t.snapshots = io::read_states_jsonl(dir / p.at("run").get<std::string>());
      r.runs.push_back(std::move(t));
    }
    fill_tables(r);
    try {
      r.cauchy = cauchy_rate(r);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientData) throw;
    }
    io::write_text(dir / "report_pairs.csv", pair_table_csv(r));
    rep["sweep"] = sweep_summary(r);
    any = true;
  }
  if (!any) {
    throw Error(ErrorKind::ConfigError, "nothing to report in " + dir.string() +
                                            " (expected energy.csv or summary.json)");
  }
  io::write_json(dir / "report.json", rep);
  out << rep.dump(2) << "\n";
  return 0;
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"hydroelastic interface simulator and limit-study harness"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&o](CLI::App* sub, bool need_config) {
    auto* c = sub->add_option("--config", o.config, "configuration file");
    if (need_config) c->required();
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--set", o.overrides, "override, section.key=value (repeatable)");
    sub->add_option("--threads", o.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "seed for probe random starts");
  };
  CLI::App* sim = app.add_subcommand("simulate", "one run plus energy diagnostics");
  CLI::App* swp = app.add_subcommand("sweep", "parameter ladder and Cauchy-rate fit");
  CLI::App* prb = app.add_subcommand("probe", "estimate |D2^-1 T| on the initial state");
  CLI::App* rpt = app.add_subcommand("report", "refit from persisted output");
  add_common(sim, true);
  add_common(swp, true);
  add_common(prb, true);
  add_common(rpt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*sim) return simulate(o, out, err);
    if (*swp) return do_sweep(o, out, err);
    if (*prb) return probe(o, out, err);
    return report(o, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::ConfigError:
      case ErrorKind::InvalidArgument:
      case ErrorKind::ClosureViolated:
      case ErrorKind::DegenerateCurve:
      case ErrorKind::ChordArcFailed:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hydroelastic::cli
