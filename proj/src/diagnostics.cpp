#include "hydroelastic/diagnostics.hpp"

#include <array>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace hydroelastic {
namespace {

using spectral::derivative;
using spectral::hilbert;
using spectral::integrate;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct Profile {
  const std::vector<double>& t;
  const std::vector<double>& e;
  double t_max;

  // (c2, c3) from unconstrained coordinates.
  std::pair<double, double> unpack(double x, double y) const {
    const double c2 = sigmoid(x);
    const double v = sigmoid(y);
    const double c3 = t_max > 0.0 ? v * c2 / t_max : v;
    return {c2, c3};
  }

  // Best c1 for (c2, c3) and the resulting misfit.
  std::pair<double, double> evaluate(double c2, double c3) const {
    double num = 0.0, den = 0.0, envelope = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double arg = c2 - c3 * t[i];
      if (!(arg > 0.0 && arg < 1.0)) return {0.0, std::numeric_limits<double>::infinity()};
      const double phi = -std::log(arg);
      num += phi * e[i];
      den += phi * phi;
      envelope = std::max(envelope, e[i] / phi);
    }
    const double c1 = std::max({num / den, envelope, std::numeric_limits<double>::min()});
    double sq = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double r = e[i] + c1 * std::log(c2 - c3 * t[i]);
      sq += r * r;
    }
    return {c1, sq};
  }

  double objective(const Eigen::Vector2d& p) const {
    const auto [c2, c3] = unpack(p[0], p[1]);
    return evaluate(c2, c3).second;
  }
};

// Plain Nelder-Mead on R^2.
Eigen::Vector2d nelder_mead(const Profile& prof, Eigen::Vector2d start, double step) {
  std::array<Eigen::Vector2d, 3> x{start, start + Eigen::Vector2d(step, 0.0),
                                   start + Eigen::Vector2d(0.0, step)};
  std::array<double, 3> f{};
  for (int i = 0; i < 3; ++i) f[i] = prof.objective(x[i]);
  for (int it = 0; it < 4000; ++it) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return f[a] < f[b]; });
    const int lo = order[0], mid = order[1], hi = order[2];
    const double size = std::max((x[mid] - x[lo]).norm(), (x[hi] - x[lo]).norm());
    if (size < 1e-13 || std::abs(f[hi] - f[lo]) <= 1e-30) break;

    const Eigen::Vector2d centroid = 0.5 * (x[lo] + x[mid]);
    const Eigen::Vector2d xr = centroid + (centroid - x[hi]);
    const double fr = prof.objective(xr);
    if (fr < f[lo]) {
      const Eigen::Vector2d xe = centroid + 2.0 * (centroid - x[hi]);
      const double fe = prof.objective(xe);
      if (fe < fr) {
        x[hi] = xe;
        f[hi] = fe;
      } else {
        x[hi] = xr;
        f[hi] = fr;
      }
    } else if (fr < f[mid]) {
      x[hi] = xr;
      f[hi] = fr;
    } else {
      const bool outside = fr < f[hi];
      const Eigen::Vector2d xc =
          outside ? Eigen::Vector2d(centroid + 0.5 * (xr - centroid))
                  : Eigen::Vector2d(centroid + 0.5 * (x[hi] - centroid));
      const double fc = prof.objective(xc);
      if (fc < (outside ? fr : f[hi])) {
        x[hi] = xc;
        f[hi] = fc;
      } else {
        for (int i : {mid, hi}) {
          x[i] = x[lo] + 0.5 * (x[i] - x[lo]);
          f[i] = prof.objective(x[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i < 3; ++i) {
    if (f[i] < f[best]) best = i;
  }
  return x[best];
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

EnergyReport energy_report(const Kinematics& kin, const PhysParams& params, int s) {
  if (s < 4) throw Error(ErrorKind::InvalidArgument, "energy index s must be at least 4");
  const InterfaceState& st = kin.state;
  const double L = st.L;
  const double At = params.a_tilde();
  const Field& theta = st.theta;
  const Field& gamma = st.gamma;

  const Field th_s = derivative(theta, s);
  const Field th_s1 = derivative(theta, s - 1);
  const Field ga_s1 = derivative(gamma, s - 1);
  const Field ga_s2 = derivative(gamma, s - 2);
  const Field ga_s3 = derivative(gamma, s - 3);
  const Field h_ga_s1 = hilbert(ga_s1);
  const Field h_ga_s2 = hilbert(ga_s2);
  const Field stretch = (kin.theta_a.array().square() + 1.0).matrix();

  EnergyReport r;
  r.time = st.time;
  r.sobolev_index_s = s;
  r.E0 = 0.5 * integrate(Field(theta.cwiseAbs2() + gamma.cwiseAbs2()));
  r.E1 = L * L * params.a_bar(L) / (4.0 * kPi * kPi) * integrate(Field(th_s.cwiseAbs2()));
  r.E2 = 0.5 * integrate(Field(ga_s2.cwiseProduct(h_ga_s1)));
  r.E3 = (params.tau * L / (kPi * (params.rho1 + params.rho2)) +
          params.sigma * params.a_bar(L) * L * L / (8.0 * kPi * kPi)) *
         integrate(Field(th_s1.cwiseAbs2()));
  r.E4 = kPi * At / L * integrate(Field(h_ga_s1.cwiseAbs2()));
  const Field u = (0.5 * stretch).cwiseSqrt().cwiseProduct(ga_s3);
  r.E5 = 0.5 * integrate(Field(u.cwiseProduct(spectral::fractional_lambda(u, 1.0))));
  r.E6 = integrate(Field((At * kPi / (2.0 * L)) * stretch.cwiseProduct(h_ga_s2.cwiseAbs2())));
  r.E7 = L * At / kPi * integrate(Field(kin.V_W.cwiseAbs2().cwiseProduct(th_s1.cwiseAbs2())));
  r.E_total = r.E0 + params.sigma * r.E1 + r.E2 + r.E3 + r.E5 +
              (kTwoPi * params.rho0 / L) * (r.E4 + r.E6 + r.E7);
  r.chord_arc_min = chord_arc_min(kin.ops.zd());
  r.closure_defect = closure_defect(theta);
  return r;
}

EnergyReport energy_report(const InterfaceState& state, const PhysParams& params, int s) {
  // Diagnostics report the closure defect rather than enforce it.
  return energy_report(Kinematics(state, 1.0), params, s);
}

LogBoundFit fit_log_bound(const std::vector<double>& t, const std::vector<double>& e,
                          const LogBoundOptions& options) {
  if (t.empty() || t.size() != e.size()) {
    throw Error(ErrorKind::InvalidArgument, "log-bound fit needs a nonempty (t, E) series");
  }
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw Error(ErrorKind::InvalidArgument, "series times must increase");
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(e[i]) || t[i] < 0.0) {
      throw Error(ErrorKind::InfeasibleFit, "series contains non-finite or negative-time samples");
    }
  }
  const Profile prof{t, e, t.back()};

  Eigen::Vector2d best(0.0, 0.0);
  double best_f = std::numeric_limits<double>::infinity();
  const int g2 = std::max(2, options.grid_c2);
  const int g3 = std::max(2, options.grid_c3);
  for (int i = 0; i < g2; ++i) {
    for (int j = 0; j < g3; ++j) {
      const Eigen::Vector2d p(-9.0 + 18.0 * i / (g2 - 1), -9.0 + 18.0 * j / (g3 - 1));
      const double f = prof.objective(p);
      if (f < best_f) {
        best_f = f;
        best = p;
      }
    }
  }
  if (!std::isfinite(best_f)) throw Error(ErrorKind::InfeasibleFit, "no admissible (c2, c3)");
  best = nelder_mead(prof, best, 0.25);
  best = nelder_mead(prof, best, 1e-3);

  LogBoundFit fit;
  std::tie(fit.c2, fit.c3) = prof.unpack(best[0], best[1]);
  std::tie(fit.c1, fit.residual) = prof.evaluate(fit.c2, fit.c3);
  if (!(fit.c2 > 0.0 && fit.c2 < 1.0 && fit.c3 > 0.0 && std::isfinite(fit.residual))) {
    throw Error(ErrorKind::InfeasibleFit, "log-bound fit left the admissible region");
  }
  if (options.c1_max && fit.c1 > *options.c1_max) {
    std::ostringstream os;
    os << "envelope needs c1 = " << fit.c1 << " > " << *options.c1_max;
    throw Error(ErrorKind::InfeasibleFit, os.str());
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    fit.max_violation = std::max(fit.max_violation, e[i] - log_bound(fit, t[i]));
  }
  return fit;
}

double log_bound(const LogBoundFit& fit, double t) { return -fit.c1 * std::log(fit.c2 - fit.c3 * t); }

double difference_norm(const InterfaceState& a, const InterfaceState& b) {
  if (a.size() != b.size() || a.gamma.size() != b.gamma.size()) {
    throw Error(ErrorKind::GridMismatch, "states live on different grids");
  }
  return spectral::sobolev_norm(Field(a.theta - b.theta), 2.0) +
         spectral::sobolev_norm(Field(a.gamma - b.gamma), 1.5);
}

void write_energy_header(std::ostream& os) {
  os << "# " << kEnergyCsvVersion << "\n"
     << "time,E0,E1,E2,E3,E4,E5,E6,E7,E_total,chord_arc_min,closure_defect\n";
}

void write_energy_row(std::ostream& os, const EnergyReport& r) {
  os << fmt(r.time) << ',' << fmt(r.E0) << ',' << fmt(r.E1) << ',' << fmt(r.E2) << ','
     << fmt(r.E3) << ',' << fmt(r.E4) << ',' << fmt(r.E5) << ',' << fmt(r.E6) << ','
     << fmt(r.E7) << ',' << fmt(r.E_total) << ',' << fmt(r.chord_arc_min) << ','
     << fmt(r.closure_defect) << '\n';
}

std::vector<EnergyReport> read_energy_csv(std::istream& is) {
  std::vector<EnergyReport> rows;
  std::string line;
  bool header = false;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line.rfind("time,E0", 0) != 0) {
        throw Error(ErrorKind::IoError, "energy CSV header not recognized");
      }
      header = true;
      continue;
    }
    std::array<double, 12> v{};
    std::istringstream ls(line);
    std::string cell;
    std::size_t k = 0;
    while (std::getline(ls, cell, ',') && k < v.size()) {
      char* end = nullptr;
      v[k] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) {
        throw Error(ErrorKind::IoError, "bad number on energy CSV line " + std::to_string(lineno));
      }
      ++k;
    }
    if (k != v.size()) {
      throw Error(ErrorKind::IoError, "short row on energy CSV line " + std::to_string(lineno));
    }
    EnergyReport r;
    r.time = v[0];
    r.E0 = v[1];
    r.E1 = v[2];
    r.E2 = v[3];
    r.E3 = v[4];
    r.E4 = v[5];
    r.E5 = v[6];
    r.E6 = v[7];
    r.E7 = v[8];
    r.E_total = v[9];
    r.chord_arc_min = v[10];
    r.closure_defect = v[11];
    rows.push_back(r);
  }
  if (!header) throw Error(ErrorKind::IoError, "energy CSV has no header");
  return rows;
}

}  // namespace hydroelastic
