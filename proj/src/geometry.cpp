#include "hydroelastic/geometry.hpp"

#include <limits>
#include <sstream>

namespace hydroelastic {

void PhysParams::validate() const {
  if (!(tau > 0.0)) throw Error(ErrorKind::InvalidArgument, "surface tension must be positive");
  if (rho1 < 0.0 || rho2 < 0.0 || !(rho1 + rho2 > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "fluid densities must be nonnegative with positive sum");
  }
  if (rho0 < 0.0) throw Error(ErrorKind::InvalidArgument, "sheet mass must be nonnegative");
  if (sigma < 0.0) throw Error(ErrorKind::InvalidArgument, "bending modulus must be nonnegative");
}

double length_of(const Field& theta) {
  const double mean_cos = theta.array().cos().mean();
  if (!(mean_cos > 1e-8)) {
    throw Error(ErrorKind::DegenerateCurve, "int cos(theta) is not positive");
  }
  return kTwoPi / mean_cos;
}

InterfaceState make_state(Field theta, Field gamma, double time) {
  if (theta.size() != gamma.size()) {
    throw Error(ErrorKind::GridMismatch, "theta and gamma live on different grids");
  }
  Grid grid(theta.size());
  InterfaceState s;
  s.L = length_of(theta);
  s.theta = std::move(theta);
  s.gamma = std::move(gamma);
  s.time = time;
  return s;
}

double closure_defect(const Field& theta) { return theta.array().sin().mean(); }

Field close_theta(const Field& theta) {
  Field out = theta;
  for (int it = 0; it < 8; ++it) {
    const double c = out.array().cos().mean();
    if (!(c > 0.0)) throw Error(ErrorKind::DegenerateCurve, "<cos theta> is not positive");
    const double shift = closure_defect(out) / c;
    out.array() -= shift;
    if (std::abs(shift) < 1e-17) break;
  }
  return out;
}

ComplexField reconstruct_zd(const InterfaceState& state, double closure_tolerance) {
  const double defect = closure_defect(state.theta);
  if (std::abs(defect) > closure_tolerance) {
    std::ostringstream os;
    os << "<sin theta> = " << defect << " exceeds " << closure_tolerance;
    throw Error(ErrorKind::ClosureViolated, os.str());
  }
  const Index n = state.size();
  const Grid grid(n);
  const double s_alpha = state.L / kTwoPi;
  ComplexField e(n);
  for (Index j = 0; j < n; ++j) e[j] = std::polar(1.0, state.theta[j]);
  const double mean_cos = e.real().mean();
  ComplexField oscillating = e;
  oscillating.array() -= e.mean();
  ComplexField zd = s_alpha * spectral::antiderivative(oscillating);
  for (Index j = 0; j < n; ++j) zd[j] += s_alpha * mean_cos * grid.node(j);
  zd.array() -= zd[0];
  return zd;
}

Frame frame(const Field& theta) {
  Frame f;
  const Index n = theta.size();
  f.tangent.resize(n, 2);
  f.normal.resize(n, 2);
  const Eigen::ArrayXd c = theta.array().cos();
  const Eigen::ArrayXd s = theta.array().sin();
  f.tangent.col(0) = c.matrix();
  f.tangent.col(1) = s.matrix();
  f.normal.col(0) = -s.matrix();
  f.normal.col(1) = c.matrix();
  return f;
}

double chord_arc_min(const ComplexField& zd) {
  const Index n = zd.size();
  const Grid grid(n);
  double best = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < n; ++j) {
    for (Index m = j + 1; m < n; ++m) {
      const double span = grid.node(m) - grid.node(j);
      const double forward = std::abs(zd[m] - zd[j]) / span;
      const double backward = std::abs(zd[m] - kTwoPi - zd[j]) / (kTwoPi - span);
      best = std::min({best, forward, backward});
    }
  }
  return n < 2 ? 0.0 : best;
}

Field curvature(const InterfaceState& state) {
  return (kTwoPi / state.L) * spectral::derivative(state.theta, 1);
}

void check_admissible(const InterfaceState& state, const AdmissibleSet& set) {
  Grid grid(state.size());
  if (state.gamma.size() != state.size()) {
    throw Error(ErrorKind::GridMismatch, "theta and gamma live on different grids");
  }
  const double L = length_of(state.theta);
  if (L >= set.max_length) {
    throw Error(ErrorKind::DegenerateCurve, "period length exceeds the admissible bound");
  }
  const ComplexField zd = reconstruct_zd(state, set.closure_tolerance);
  const double chord = chord_arc_min(zd);
  if (!(chord > set.min_chord_arc)) {
    std::ostringstream os;
    os << "chord-arc minimum " << chord << " is below " << set.min_chord_arc;
    throw Error(ErrorKind::ChordArcFailed, os.str());
  }
}

Field dot(const VectorField& a, const VectorField& b) {
  return (a.array() * b.array()).rowwise().sum().matrix();
}

}  // namespace hydroelastic
