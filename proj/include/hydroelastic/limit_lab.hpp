#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hydroelastic/config.hpp"
#include "hydroelastic/io.hpp"

namespace hydroelastic {

struct SweepConfig {
  InterfaceState initial;
  PhysParams base;  ///< sigma and rho0 are replaced per pair
  std::vector<ParameterPair> pairs;
  double t_end = 0.25;
  StepPolicy policy;
  std::optional<std::filesystem::path> output_dir;
  int threads = 1;
  std::string config_text;  ///< hashed into every trajectory sidecar
};

struct CauchyFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int samples = 0;
};

struct SweepResult {
  std::vector<ParameterPair> pairs;
  std::vector<Trajectory> runs;
  double dt = 0.0;  ///< step shared by every run
  std::vector<double> checkpoint_times;
  /// D(j, k) per checkpoint; NaN where a run did not reach it.
  std::vector<Eigen::MatrixXd> tables;
  Eigen::Index zero_index = 0;
  /// d_k = D(k, zero_index) per checkpoint.
  std::vector<Eigen::VectorXd> limit_distances;
  std::optional<CauchyFit> cauchy;
  std::vector<std::string> failures;

  const Eigen::MatrixXd& final_table() const { return tables.back(); }
};

/// |sigma_j - sigma_k| + |rho0_j - rho0_k|.
double parameter_distance(const ParameterPair& a, const ParameterPair& b);

/// Checkpoint times t_end * {1/4, 1/2, 3/4, 1}.
std::vector<double> checkpoint_times(double t_end);

/// Largest step stable for every pair, shrunk so each checkpoint is hit
/// after a whole number of steps.
double shared_dt(const SweepConfig& config);

/// Pairwise difference tables from per-run checkpoint states.
void fill_tables(SweepResult& result);

/// Runs every pair, tabulates difference_norm at the checkpoints and, when
/// output_dir is set, persists trajectories, pairs.csv and summary.json.
SweepResult sweep(const SweepConfig& config);

/// Log-log least squares of D against parameter distance over all j < k.
CauchyFit cauchy_rate(const std::vector<double>& distances, const std::vector<double>& differences);
CauchyFit cauchy_rate(const SweepResult& result);

std::string pair_table_csv(const SweepResult& result);
io::json sweep_summary(const SweepResult& result);

}  // namespace hydroelastic
