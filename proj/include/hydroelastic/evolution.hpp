#pragma once

// Right-hand side of the (theta, gamma, L) system in the normalized-arclength
// frame. Everything that does not depend on gamma_t is gathered in Kinematics;
// the gamma_t equation
//
//   gamma_t + (2 pi rho A~/L) H(gamma_t)_a + T gamma_t = F
//
// is then solved by fixed-point iteration on D2^{-1}.

#include <optional>

#include "hydroelastic/singular_ops.hpp"

namespace hydroelastic {

/// Velocities and geometric rates at one state. Nothing here depends on gamma_t.
struct Kinematics {
  explicit Kinematics(const InterfaceState& state,
                      double closure_tolerance = kDefaultClosureTolerance);

  InterfaceState state;
  CurveOperators ops;
  Frame tn;
  Field theta_a, theta_aa, gamma_a;
  VectorField W;  ///< Birkhoff-Rott velocity
  VectorField m;  ///< smooth part of W_alpha
  Field U;        ///< W . n
  Field W_dot_t;
  Field m_dot_n, m_dot_t;
  double L_t = 0.0;
  Field V_W;  ///< V - W . t
  Field V;    ///< tangential velocity
  Field theta_t;
  ComplexField z_t;        ///< C(U n + V t)
  ComplexField z_t_alpha;  ///< spectral derivative of z_t
};

/// Lower-order collections appearing in the gamma_t equation.
struct RemainderBundle {
  VectorField m;
  Field R1;
  /// Kernel and commutator part of the integrated-by-parts W_t term,
  /// -Re{z_a K(gamma z_ta/z_a)} - Re{(z_a/2i)[H,1/z_a](gamma z_ta/z_a)}.
  Field R2_smooth;
  Field R3;
  Field R5;
  Field Rt1;
  Field Rt2;
  Field R;
};

struct StateDerivative {
  Field theta_t;
  Field gamma_t;
  double L_t = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

struct SolveOptions {
  double tolerance = 1e-12;
  int max_iterations = 200;
  /// Relaxation weight for the fixed-point update; 1 is plain Picard.
  double damping = 1.0;
};

struct GammaSolveResult {
  Field gamma_t;
  int iterations = 0;
  double residual = 0.0;
};

Field normal_velocity(const InterfaceState& state);
double length_rate(const InterfaceState& state);
Field tangential_correction(const InterfaceState& state);
Field full_tangential(const InterfaceState& state);
Field theta_rhs(const InterfaceState& state);
ComplexField z_time_derivative(const InterfaceState& state);

RemainderBundle assemble_remainders(const Kinematics& kin, const PhysParams& params);
Field assemble_F(const Kinematics& kin, const PhysParams& params, const RemainderBundle& rem);
Field assemble_F(const Kinematics& kin, const PhysParams& params);

/// gamma_t = (I + D2^{-1} T)^{-1} D2^{-1} F by fixed-point iteration.
/// Throws FixedPointDiverged when max_iterations is exhausted.
GammaSolveResult solve_gamma_t(const Kinematics& kin, const PhysParams& params, const Field& F,
                               const SolveOptions& options = {});

StateDerivative rhs(const InterfaceState& state, const PhysParams& params,
                    const SolveOptions& options = {});
StateDerivative rhs(const Kinematics& kin, const PhysParams& params,
                    const SolveOptions& options = {});

}  // namespace hydroelastic
