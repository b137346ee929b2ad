#include "hydroelastic/limit_lab.hpp"

#include <atomic>
#include <cstdio>
#include <limits>
#include <sstream>
#include <thread>

namespace hydroelastic {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate(const SweepConfig& c) {
  if (!(c.t_end > 0.0)) throw Error(ErrorKind::InvalidArgument, "sweep needs t_end > 0");
  int zeros = 0;
  for (const auto& p : c.pairs) {
    if (!(p.sigma >= 0.0 && p.rho0 >= 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "sweep parameters must be nonnegative");
    }
    if (p.sigma == 0.0 && p.rho0 == 0.0) ++zeros;
  }
  if (zeros > 1) throw Error(ErrorKind::DuplicateZeroPair, "(0,0) appears more than once");
  if (zeros == 0) throw Error(ErrorKind::InvalidArgument, "parameter list must contain (0,0)");
  if (c.threads < 1) throw Error(ErrorKind::InvalidArgument, "threads must be positive");
  c.policy.validate();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string run_stem(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "pair_%02zu", i);
  return buf;
}

}  // namespace

double parameter_distance(const ParameterPair& a, const ParameterPair& b) {
  return std::abs(a.sigma - b.sigma) + std::abs(a.rho0 - b.rho0);
}

std::vector<double> checkpoint_times(double t_end) {
  return {0.25 * t_end, 0.5 * t_end, 0.75 * t_end, t_end};
}

double shared_dt(const SweepConfig& c) {
  if (c.policy.dt) return *c.policy.dt;
  double dt = std::numeric_limits<double>::infinity();
  for (const auto& pr : c.pairs) {
    PhysParams p = c.base;
    p.sigma = pr.sigma;
    p.rho0 = pr.rho0;
    dt = std::min(dt, stable_dt(c.initial.L, p, c.initial.size(), c.policy.cfl));
  }
  const double span = 0.25 * c.t_end;
  return span / std::ceil(span / dt);
}

void fill_tables(SweepResult& r) {
  const Eigen::Index m = static_cast<Eigen::Index>(r.pairs.size());
  r.tables.assign(r.checkpoint_times.size(), Eigen::MatrixXd::Constant(m, m, kNaN));
  r.limit_distances.assign(r.checkpoint_times.size(), Eigen::VectorXd::Constant(m, kNaN));
  for (std::size_t c = 0; c < r.checkpoint_times.size(); ++c) {
    const double t = r.checkpoint_times[c];
    std::vector<const InterfaceState*> at(m);
    for (Eigen::Index j = 0; j < m; ++j) at[j] = r.runs[j].snapshot_at(t);
    Eigen::MatrixXd& d = r.tables[c];
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!at[j]) continue;
      d(j, j) = 0.0;
      for (Eigen::Index k = j + 1; k < m; ++k) {
        if (!at[k]) continue;
        d(j, k) = d(k, j) = difference_norm(*at[j], *at[k]);
      }
    }
    r.limit_distances[c] = d.col(r.zero_index);
  }
}

SweepResult sweep(const SweepConfig& config) {
  validate(config);
  check_admissible(config.initial, config.policy.admissible);

  SweepResult result;
  result.pairs = config.pairs;
  result.checkpoint_times = checkpoint_times(config.t_end);
  result.dt = shared_dt(config);
  for (std::size_t i = 0; i < config.pairs.size(); ++i) {
    if (config.pairs[i].sigma == 0.0 && config.pairs[i].rho0 == 0.0) {
      result.zero_index = static_cast<Eigen::Index>(i);
    }
  }

  StepPolicy policy = config.policy;
  policy.dt = result.dt;
  result.runs.resize(config.pairs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < config.pairs.size(); i = next++) {
      PhysParams p = config.base;
      p.sigma = config.pairs[i].sigma;
      p.rho0 = config.pairs[i].rho0;
      try {
        result.runs[i] = run(config.initial, p, policy, config.t_end, result.checkpoint_times);
      } catch (const Error& e) {
        Trajectory t;
        t.params = p;
        t.policy = policy;
        t.failure = RunFailure{e.kind(), e.what(), config.initial.time, 0};
        result.runs[i] = std::move(t);
      }
    }
  };
  const int threads = std::min<int>(config.threads, static_cast<int>(config.pairs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    if (const auto& f = result.runs[i].failure) {
      std::ostringstream os;
      os << "pair " << i << " (sigma=" << config.pairs[i].sigma << ", rho0=" << config.pairs[i].rho0
         << "): " << f->message;
      result.failures.push_back(os.str());
    }
  }
  fill_tables(result);
  try {
    result.cauchy = cauchy_rate(result);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InsufficientData) throw;
  }

  if (config.output_dir) {
    const auto& dir = *config.output_dir;
    for (std::size_t i = 0; i < result.runs.size(); ++i) {
      io::write_trajectory(dir / "runs", run_stem(i), result.runs[i], config.config_text);
    }
    io::write_text(dir / "pairs.csv", pair_table_csv(result));
    io::write_json(dir / "summary.json", sweep_summary(result));
  }
  return result;
}

CauchyFit cauchy_rate(const std::vector<double>& distances, const std::vector<double>& differences) {
  if (distances.size() != differences.size()) {
    throw Error(ErrorKind::InvalidArgument, "distance and difference lists differ in length");
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const double a = distances[i], b = differences[i];
    if (a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b)) {
      x.push_back(std::log(a));
      y.push_back(std::log(b));
    }
  }
  if (x.size() < 3) throw Error(ErrorKind::InsufficientData, "need at least 3 positive (distance, D) samples");
  Eigen::MatrixXd design(x.size(), 2);
  Eigen::VectorXd rhs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    design(i, 0) = x[i];
    design(i, 1) = 1.0;
    rhs[i] = y[i];
  }
  const Eigen::VectorXd xs = design.col(0);
  if ((xs.array() - xs.mean()).abs().maxCoeff() == 0.0) {
    throw Error(ErrorKind::InsufficientData, "parameter distances are all equal");
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXd resid = rhs - design * coef;
  const double ss_tot = (rhs.array() - rhs.mean()).square().sum();
  CauchyFit fit;
  fit.slope = coef[0];
  fit.intercept = coef[1];
  fit.r_squared = ss_tot > 0.0 ? 1.0 - resid.squaredNorm() / ss_tot : 1.0;
  fit.samples = static_cast<int>(x.size());
  return fit;
}

CauchyFit cauchy_rate(const SweepResult& r) {
  if (r.tables.empty()) throw Error(ErrorKind::InsufficientData, "sweep has no difference table");
  const Eigen::MatrixXd& d = r.final_table();
  std::vector<double> dist, diff;
  for (Eigen::Index j = 0; j < d.rows(); ++j) {
    for (Eigen::Index k = j + 1; k < d.cols(); ++k) {
      if (std::isnan(d(j, k))) continue;
      dist.push_back(parameter_distance(r.pairs[j], r.pairs[k]));
      diff.push_back(d(j, k));
    }
  }
  return cauchy_rate(dist, diff);
}

std::string pair_table_csv(const SweepResult& r) {
  std::ostringstream os;
  os << "checkpoint_time,j,k,sigma_j,rho0_j,sigma_k,rho0_k,param_distance,difference_norm\n";
  for (std::size_t c = 0; c < r.tables.size(); ++c) {
    const Eigen::MatrixXd& d = r.tables[c];
    for (Eigen::Index j = 0; j < d.rows(); ++j) {
      for (Eigen::Index k = j + 1; k < d.cols(); ++k) {
        const auto& a = r.pairs[j];
        const auto& b = r.pairs[k];
        os << fmt(r.checkpoint_times[c]) << ',' << j << ',' << k << ',' << fmt(a.sigma) << ','
           << fmt(a.rho0) << ',' << fmt(b.sigma) << ',' << fmt(b.rho0) << ','
           << fmt(parameter_distance(a, b)) << ',' << (std::isnan(d(j, k)) ? "nan" : fmt(d(j, k)))
           << '\n';
      }
    }
  }
  return os.str();
}

io::json sweep_summary(const SweepResult& r) {
  using io::json;
  auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
  json pairs = json::array();
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    json p{{"sigma", r.pairs[i].sigma},
           {"rho0", r.pairs[i].rho0},
           {"run", "runs/" + run_stem(i) + ".jsonl"},
           {"completed", i < r.runs.size() && r.runs[i].completed()},
           {"t_reached", i < r.runs.size() && !r.runs[i].snapshots.empty() ? r.runs[i].snapshots.back().time : 0.0}};
    if (i < r.runs.size() && r.runs[i].failure) {
      p["failure"] = json{{"kind", to_string(r.runs[i].failure->kind)},
                          {"message", r.runs[i].failure->message},
                          {"time", r.runs[i].failure->time}};
    }
    pairs.push_back(p);
  }
  json limits = json::array();
  for (std::size_t c = 0; c < r.limit_distances.size(); ++c) {
    json d = json::array();
    for (Eigen::Index k = 0; k < r.limit_distances[c].size(); ++k) d.push_back(num(r.limit_distances[c][k]));
    limits.push_back(json{{"time", r.checkpoint_times[c]}, {"d", d}});
  }
  json s{{"format", "sweep-summary v1"},
         {"dt", r.dt},
         {"N", r.runs.empty() || r.runs[0].snapshots.empty() ? 0 : r.runs[0].snapshots[0].size()},
         {"checkpoint_times", r.checkpoint_times},
         {"zero_index", r.zero_index},
         {"pairs", pairs},
         {"limit_distances", limits},
         {"failures", r.failures}};
  if (r.cauchy) {
    s["cauchy"] = json{{"slope", r.cauchy->slope},
                       {"intercept", r.cauchy->intercept},
                       {"r_squared", r.cauchy->r_squared},
                       {"samples", r.cauchy->samples}};
  } else {
    s["cauchy"] = nullptr;
  }
  return s;
}

}  // namespace hydroelastic
