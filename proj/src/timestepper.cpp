#include "hydroelastic/timestepper.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace hydroelastic {
namespace {

constexpr double kNoClosureCheck = std::numeric_limits<double>::infinity();

InterfaceState advance(const InterfaceState& s, const StateDerivative& d, double h) {
  InterfaceState out = s;
  out.theta += h * d.theta_t;
  out.gamma += h * d.gamma_t;
  out.L += h * d.L_t;
  out.time += h;
  return out;
}

StateDerivative eval(const InterfaceState& s, const PhysParams& params, const StepPolicy& policy,
                     StepStats& stats) {
  // Closure is monitored by run(); stages never reject on it.
  const Kinematics kin(s, kNoClosureCheck);
  StateDerivative d = rhs(kin, params, policy.solve);
  stats.iterations = std::max(stats.iterations, d.iterations);
  stats.residual = std::max(stats.residual, d.residual);
  return d;
}

void check_growth(const InterfaceState& out, double before, double after, const char* where) {
  const bool finite = out.theta.allFinite() && out.gamma.allFinite() && std::isfinite(out.L);
  // A floor keeps round-off growth on a quiescent state from tripping the ratio test.
  if (!finite || (after > 10.0 * before && after > 1e-10)) {
    std::ostringstream os;
    os << "norm grew from " << before << " to " << after << " " << where;
    throw Error(ErrorKind::StabilityViolated, os.str());
  }
}

// An exploding rk4 stage would otherwise surface as a geometric error from the
// next rhs evaluation.
InterfaceState stage(const InterfaceState& s, const StateDerivative& d, double h, const StepStats& stats) {
  InterfaceState out = advance(s, d, h);
  check_growth(out, stats.norm_before, stability_norm(out), "within an rk4 stage");
  return out;
}

void finish(InterfaceState& out, const StepPolicy& policy, StepStats& stats) {
  out.theta = spectral::krasny_filter(out.theta, policy.filter_floor);
  out.gamma = spectral::krasny_filter(out.gamma, policy.filter_floor);
  if (policy.admissible.correct_closure && out.theta.allFinite()) out.theta = close_theta(out.theta);
  stats.norm_after = stability_norm(out);
  check_growth(out, stats.norm_before, stats.norm_after, "in one step");
}

}  // namespace

const char* to_string(Scheme s) { return s == Scheme::Rk4 ? "rk4" : "imex"; }

Scheme scheme_from_string(const std::string& name) {
  if (name == "rk4") return Scheme::Rk4;
  if (name == "imex") return Scheme::Imex;
  throw Error(ErrorKind::InvalidArgument, "unknown scheme '" + name + "'");
}

void StepPolicy::validate() const {
  if (dt && !(*dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "fixed dt must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw Error(ErrorKind::InvalidArgument, "cfl must lie in (0, 1]");
  if (filter_floor < 0.0) throw Error(ErrorKind::InvalidArgument, "filter floor must be nonnegative");
  if (monitor_cadence < 1) throw Error(ErrorKind::InvalidArgument, "monitor cadence must be positive");
  if (probe_cadence < 0) throw Error(ErrorKind::InvalidArgument, "probe cadence must be nonnegative");
  if (energy_s < 4) throw Error(ErrorKind::InvalidArgument, "energy index s must be at least 4");
}

double max_frequency(double L, const PhysParams& params, Index n) {
  const double lam = params.lambda(L);
  const double sab = params.sigma * params.a_bar(L);
  double best = 0.0;
  for (Index k = 1; k <= n / 2; ++k) {
    const double kk = static_cast<double>(k);
    const double w2 = 2.0 * kPi * kPi / (L * L) * kk * (lam * kk * kk + sab * kk * kk * kk * kk);
    best = std::max(best, std::sqrt(w2));
  }
  return best;
}

double stable_dt(double L, const PhysParams& params, Index n, double cfl) {
  const double w = max_frequency(L, params, n);
  if (!(w > 0.0)) throw Error(ErrorKind::InvalidArgument, "no positive linear frequency on the grid");
  return cfl / w;
}

double stability_norm(const InterfaceState& state) {
  return spectral::sobolev_norm(state.theta, 2.0) + spectral::sobolev_norm(state.gamma, 1.5);
}

InterfaceState step_rk4(const InterfaceState& s, const PhysParams& params, double dt,
                        const StepPolicy& policy, StepStats* stats_out) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  StepStats stats;
  stats.norm_before = stability_norm(s);
  const StateDerivative k1 = eval(s, params, policy, stats);
  const StateDerivative k2 = eval(stage(s, k1, 0.5 * dt, stats), params, policy, stats);
  const StateDerivative k3 = eval(stage(s, k2, 0.5 * dt, stats), params, policy, stats);
  const StateDerivative k4 = eval(stage(s, k3, dt, stats), params, policy, stats);

  InterfaceState out = s;
  const double w = dt / 6.0;
  out.theta += w * (k1.theta_t + 2.0 * k2.theta_t + 2.0 * k3.theta_t + k4.theta_t);
  out.gamma += w * (k1.gamma_t + 2.0 * k2.gamma_t + 2.0 * k3.gamma_t + k4.gamma_t);
  out.L += w * (k1.L_t + 2.0 * k2.L_t + 2.0 * k3.L_t + k4.L_t);
  out.time += dt;
  finish(out, policy, stats);
  if (stats_out) *stats_out = stats;
  return out;
}

InterfaceState step_imex(const InterfaceState& s, const PhysParams& params, double dt,
                         const StepPolicy& policy, StepStats* stats_out) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  StepStats stats;
  stats.norm_before = stability_norm(s);
  const StateDerivative d = eval(s, params, policy, stats);

  const double L = s.L;
  const double lam = params.lambda(L);
  const double sab = params.sigma * params.a_bar(L);
  const double mass = kTwoPi * params.sheet_density(L) * params.a_tilde() / L;
  const Index n = s.size();

  const ComplexField th = spectral::coefficients(s.theta.cast<Complex>());
  const ComplexField ga = spectral::coefficients(s.gamma.cast<Complex>());
  const ComplexField th_t = spectral::coefficients(d.theta_t.cast<Complex>());
  const ComplexField ga_t = spectral::coefficients(d.gamma_t.cast<Complex>());
  ComplexField th_new(n), ga_new(n);
  for (Index j = 0; j < n; ++j) {
    double p = 0.0, q = 0.0;
    if (j != n / 2) {
      const double k = std::abs(static_cast<double>(spectral::wavenumber(j, n)));
      p = 2.0 * kPi * kPi * k / (L * L);
      q = (lam * k * k + sab * k * k * k * k) / (1.0 + mass * k);
    }
    // theta_t = p gamma + N_theta, gamma_t = -q theta + N_gamma per mode.
    const Complex b_th = th[j] + dt * (th_t[j] - p * ga[j]);
    const Complex b_ga = ga[j] + dt * (ga_t[j] + q * th[j]);
    const double det = 1.0 + dt * dt * p * q;
    th_new[j] = (b_th + dt * p * b_ga) / det;
    ga_new[j] = (b_ga - dt * q * b_th) / det;
  }

  InterfaceState out = s;
  out.theta = spectral::synthesize(th_new).real();
  out.gamma = spectral::synthesize(ga_new).real();
  out.L += dt * d.L_t;
  out.time += dt;
  finish(out, policy, stats);
  if (stats_out) *stats_out = stats;
  return out;
}

InterfaceState step(const InterfaceState& state, const PhysParams& params, double dt,
                    const StepPolicy& policy, StepStats* stats) {
  return policy.scheme == Scheme::Rk4 ? step_rk4(state, params, dt, policy, stats)
                                      : step_imex(state, params, dt, policy, stats);
}

const InterfaceState* Trajectory::snapshot_at(double t) const {
  for (const auto& s : snapshots) {
    if (s.time == t) return &s;
  }
  return nullptr;
}

Trajectory run(const InterfaceState& initial, const PhysParams& params, const StepPolicy& policy,
               double t_end, const std::vector<double>& checkpoints) {
  policy.validate();
  params.validate();
  if (!(t_end >= initial.time)) throw Error(ErrorKind::InvalidArgument, "t_end precedes the initial time");
  check_admissible(initial, policy.admissible);

  std::vector<double> marks;
  for (double c : checkpoints) {
    if (c > initial.time && c < t_end) marks.push_back(c);
  }
  if (t_end > initial.time) marks.push_back(t_end);
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

  Trajectory traj;
  traj.params = params;
  traj.policy = policy;
  traj.snapshots.push_back(initial);

  auto fail = [&](const Error& e, double t, long n) {
    traj.failure = RunFailure{e.kind(), e.what(), t, n};
  };

  AdmissibleSet in_run = policy.admissible;
  in_run.closure_tolerance = kNoClosureCheck;
  auto monitor = [&](const InterfaceState& s, long n) {
    try {
      const double defect = std::abs(closure_defect(s.theta));
      traj.max_closure_defect = std::max(traj.max_closure_defect, defect);
      if (defect > policy.admissible.closure_tolerance) ++traj.closure_warnings;
      const Kinematics kin(s, kNoClosureCheck);
      traj.diagnostics.push_back(energy_report(kin, params, policy.energy_s));
      traj.max_length_drift =
          std::max(traj.max_length_drift, std::abs(s.L - length_of(s.theta)) / s.L);
      check_admissible(s, in_run);
      return true;
    } catch (const Error& e) {
      fail(e, s.time, n);
      return false;
    }
  };
  if (!monitor(initial, 0)) return traj;

  InterfaceState cur = initial;
  long n = 0;
  std::size_t next_mark = 0;
  while (next_mark < marks.size()) {
    const double target = marks[next_mark];
    double dt = policy.dt ? *policy.dt : stable_dt(cur.L, params, cur.size(), policy.cfl);
    const bool landing = target - cur.time <= dt * (1.0 + 1e-9);
    if (landing) dt = target - cur.time;

    StepRecord rec;
    rec.step = n + 1;
    rec.dt = dt;
    StepPolicy local = policy;
    try {
      if (policy.probe_cadence > 0 && n % policy.probe_cadence == 0) {
        const CurveOperators ops(cur, kNoClosureCheck);
        const OperatorProbeReport probe = probe_t_norm(ops, params, policy.probe);
        rec.probe_norm = probe.estimated_norm;
        rec.probe_converged = probe.converged;
        if (probe.estimated_norm >= 0.9) local.solve.damping = 0.5;
      }
      StepStats stats;
      InterfaceState next = step(cur, params, dt, local, &stats);
      if (landing) next.time = target;
      rec.iterations = stats.iterations;
      rec.residual = stats.residual;
      cur = std::move(next);
    } catch (const Error& e) {
      fail(e, cur.time, n + 1);
      break;
    }
    ++n;
    rec.time = cur.time;
    traj.steps.push_back(rec);

    if (landing) ++next_mark;
    if (landing || n % policy.monitor_cadence == 0) {
      traj.snapshots.push_back(cur);
      if (!monitor(cur, n)) break;
    }
  }
  return traj;
}

}  // namespace hydroelastic
