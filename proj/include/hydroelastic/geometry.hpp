#pragma once

#include "hydroelastic/spectral.hpp"

namespace hydroelastic {

/// Physical constants of the two-fluid system with an elastic interface.
struct PhysParams {
  double rho0 = 0.0;   ///< sheet mass density
  double sigma = 0.0;  ///< bending modulus
  double tau = 1.0;    ///< surface tension
  double rho1 = 0.5;   ///< lower fluid density
  double rho2 = 0.5;   ///< upper fluid density
  double g = 0.0;      ///< gravity

  /// Atwood number (rho1 - rho2)/(rho1 + rho2).
  double atwood() const { return (rho1 - rho2) / (rho1 + rho2); }
  /// 1/(rho1 + rho2).
  double a_tilde() const { return 1.0 / (rho1 + rho2); }
  /// Density of the deformed sheet, rho0 / s_alpha.
  double sheet_density(double L) const { return rho0 * kTwoPi / L; }
  /// 8 pi^3 / (L^3 (rho1 + rho2)).
  double a_bar(double L) const { return 8.0 * kPi * kPi * kPi / (L * L * L) * a_tilde(); }
  /// 4 tau pi / (L (rho1 + rho2)).
  double lambda(double L) const { return 4.0 * tau * kPi / L * a_tilde(); }

  /// Throws InvalidArgument unless tau > 0, rho1 + rho2 > 0 and the rest are nonnegative.
  void validate() const;
};

/// The evolved unknowns: tangent angle, sheet strength, period length, time.
struct InterfaceState {
  Field theta;
  Field gamma;
  double L = kTwoPi;
  double time = 0.0;

  Index size() const { return theta.size(); }
};

inline constexpr double kDefaultClosureTolerance = 1e-10;

/// Bounds defining the admissible set; the numeric defaults are configuration.
struct AdmissibleSet {
  double max_length = 4.0 * kPi;
  double min_chord_arc = 0.1;
  double closure_tolerance = kDefaultClosureTolerance;
  /// During a run a closure violation is only counted unless this is set, in
  /// which case the mean of theta is shifted after each step to restore it.
  bool correct_closure = false;
};

/// L = 4 pi^2 / int cos(theta). Throws DegenerateCurve when the integral is not positive.
double length_of(const Field& theta);

/// Builds a state with L = length_of(theta).
InterfaceState make_state(Field theta, Field gamma, double time = 0.0);

/// Shifts the mean of theta (a rigid rotation) so that <sin theta> = 0.
Field close_theta(const Field& theta);

/// <sin theta>, which must vanish for a horizontally periodic curve.
double closure_defect(const Field& theta);

/// z_d(alpha) = (L/2pi) int_0^alpha exp(i theta), with z_d(0) = 0. The imaginary
/// mean of exp(i theta) is dropped so the curve is periodic in y.
ComplexField reconstruct_zd(const InterfaceState& state,
                            double closure_tolerance = kDefaultClosureTolerance);

struct Frame {
  VectorField tangent;
  VectorField normal;
};

/// t = (cos theta, sin theta), n = (-sin theta, cos theta).
Frame frame(const Field& theta);

/// Smallest |z_d(a_j) - z_d(a_m)| / (a_m - a_j) over node pairs, also taking the
/// pair the other way around the period.
double chord_arc_min(const ComplexField& zd);

/// kappa = theta_alpha / s_alpha.
Field curvature(const InterfaceState& state);

/// Throws ClosureViolated, DegenerateCurve or ChordArcFailed when the state leaves the set.
void check_admissible(const InterfaceState& state, const AdmissibleSet& set = {});

/// Pointwise dot product of two vector fields.
Field dot(const VectorField& a, const VectorField& b);

}  // namespace hydroelastic
