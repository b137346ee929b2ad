#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "hydroelastic/evolution.hpp"

namespace hydroelastic {

struct EnergyReport {
  double time = 0.0;
  int sobolev_index_s = 4;
  double E0 = 0.0, E1 = 0.0, E2 = 0.0, E3 = 0.0, E4 = 0.0, E5 = 0.0, E6 = 0.0, E7 = 0.0;
  double E_total = 0.0;
  double chord_arc_min = 0.0;
  double closure_defect = 0.0;
};

/// E0..E7 and their weighted total at s >= 4. E2 and E5 are reported signed.
EnergyReport energy_report(const InterfaceState& state, const PhysParams& params, int s = 4);
/// Same, reusing kinematics already computed for the state.
EnergyReport energy_report(const Kinematics& kin, const PhysParams& params, int s = 4);

struct LogBoundFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double max_violation = 0.0;
  double residual = 0.0;  ///< sum of squared misfits
};

struct LogBoundOptions {
  int grid_c2 = 48;
  int grid_c3 = 48;
  /// Upper bound on c1; the fit is infeasible when the envelope would need more.
  std::optional<double> c1_max;
};

/// Fits E(t) <= -c1 ln(c2 - c3 t) with c1 > 0, 0 < c2 < 1, c3 > 0 and
/// c2 - c3 t > 0 on the series. c1 is the least-squares value raised, if
/// needed, so the curve envelopes every sample.
LogBoundFit fit_log_bound(const std::vector<double>& t, const std::vector<double>& e,
                          const LogBoundOptions& options = {});

/// -c1 ln(c2 - c3 t).
double log_bound(const LogBoundFit& fit, double t);

/// |theta_a - theta_b|_{H^2} + |gamma_a - gamma_b|_{H^{3/2}}.
double difference_norm(const InterfaceState& a, const InterfaceState& b);

inline constexpr const char* kEnergyCsvVersion = "energy-csv v1";
void write_energy_header(std::ostream& os);
void write_energy_row(std::ostream& os, const EnergyReport& r);
/// Parses a file written by write_energy_header/write_energy_row.
std::vector<EnergyReport> read_energy_csv(std::istream& is);

}  // namespace hydroelastic
