#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hydroelastic/diagnostics.hpp"

namespace hydroelastic {

enum class Scheme { Rk4, Imex };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);

struct StepPolicy {
  Scheme scheme = Scheme::Rk4;
  std::optional<double> dt;  ///< fixed step; unset means cfl / max_k omega(k) each step
  double cfl = 0.5;
  double filter_floor = 1e-13;
  int monitor_cadence = 10;
  /// Probe |D2^{-1} T| every this many steps; 0 disables.
  int probe_cadence = 0;
  int energy_s = 4;
  ProbeOptions probe;
  SolveOptions solve;
  AdmissibleSet admissible;

  void validate() const;
};

/// Largest leading-order linear frequency on the grid,
/// omega(k)^2 = (2 pi^2/L^2) k (lambda k^2 + sigma Abar k^4), k <= N/2.
double max_frequency(double L, const PhysParams& params, Index n);
double stable_dt(double L, const PhysParams& params, Index n, double cfl);

struct StepStats {
  int iterations = 0;       ///< most fixed-point iterations over the stages
  double residual = 0.0;    ///< largest fixed-point residual over the stages
  double norm_before = 0.0;
  double norm_after = 0.0;
};

/// |theta|_{H^2} + |gamma|_{H^{3/2}}, the quantity watched for blow-up.
double stability_norm(const InterfaceState& state);

InterfaceState step_rk4(const InterfaceState& state, const PhysParams& params, double dt,
                        const StepPolicy& policy = {}, StepStats* stats = nullptr);
InterfaceState step_imex(const InterfaceState& state, const PhysParams& params, double dt,
                         const StepPolicy& policy = {}, StepStats* stats = nullptr);
InterfaceState step(const InterfaceState& state, const PhysParams& params, double dt,
                    const StepPolicy& policy = {}, StepStats* stats = nullptr);

struct StepRecord {
  long step = 0;
  double time = 0.0;  ///< time after the step
  double dt = 0.0;
  int iterations = 0;
  double residual = 0.0;
  double probe_norm = -1.0;  ///< negative when not probed on this step
  bool probe_converged = true;
};

struct RunFailure {
  ErrorKind kind = ErrorKind::InvalidArgument;
  std::string message;
  double time = 0.0;
  long step = 0;
};

struct Trajectory {
  PhysParams params;
  StepPolicy policy;
  std::vector<InterfaceState> snapshots;
  std::vector<EnergyReport> diagnostics;
  std::vector<StepRecord> steps;
  std::optional<RunFailure> failure;
  double max_length_drift = 0.0;  ///< max |L - length_of(theta)| / L at monitor events
  double max_closure_defect = 0.0;  ///< max |<sin theta>| at monitor events
  long closure_warnings = 0;        ///< monitor events above the closure tolerance

  bool completed() const { return !failure.has_value(); }
  /// Snapshot whose time equals t exactly, if recorded.
  const InterfaceState* snapshot_at(double t) const;
};

/// Integrates to t_end. Steps are shortened to land on each checkpoint time,
/// and checkpoint states are always stored as snapshots. Monitor failures end
/// the run early with a failure record; an inadmissible initial state throws.
Trajectory run(const InterfaceState& initial, const PhysParams& params, const StepPolicy& policy,
               double t_end, const std::vector<double>& checkpoints = {});

}  // namespace hydroelastic
