#pragma once

#include <cstdint>

#include "hydroelastic/geometry.hpp"

namespace hydroelastic {

/// Curve data and the discretized smooth remainder operator K[z_d] for one state.
///
/// K[z_d]f(a) = (1/4 pi i) int f(a') [cot((z_d(a) - z_d(a'))/2) - cot((a - a')/2) / z_alpha(a')] da'
///
/// The kernel is smooth, so the trapezoid rule applies directly. Its value on
/// the diagonal is the removable limit -z_aa(a) / z_a(a)^2 = -i theta_a(a) / z_a(a).
class CurveOperators {
 public:
  explicit CurveOperators(const InterfaceState& state,
                          double closure_tolerance = kDefaultClosureTolerance);

  Index size() const { return zd_.size(); }
  double length() const { return L_; }
  double s_alpha() const { return L_ / kTwoPi; }

  const Field& theta() const { return theta_; }
  const Field& theta_alpha() const { return theta_alpha_; }
  const ComplexField& zd() const { return zd_; }
  /// z_alpha = s_alpha exp(i theta).
  const ComplexField& z_alpha() const { return z_alpha_; }
  /// Trapezoid weights already folded in: K[z_d]f = k_matrix() * f.
  const Eigen::MatrixXcd& k_matrix() const { return kernel_; }

  ComplexField apply_k(const ComplexField& f) const { return kernel_ * f; }
  ComplexField apply_k(const Field& f) const { return kernel_ * f.cast<Complex>(); }

 private:
  double L_;
  Field theta_;
  Field theta_alpha_;
  ComplexField zd_;
  ComplexField z_alpha_;
  Eigen::MatrixXcd kernel_;
};

/// Kernel entry of K[z_d] (without the 1/(4 pi i) prefactor) at an off-diagonal pair.
Complex k_kernel_offdiagonal(Complex zd_a, Complex zd_b, double alpha_a, double alpha_b,
                             Complex z_alpha_b);

/// [H, phi] f = H(phi f) - phi H(f).
template <class D1, class D2>
auto hilbert_commutator(const Eigen::MatrixBase<D1>& phi, const Eigen::MatrixBase<D2>& f) {
  if constexpr (!spectral::detail::is_complex_v<D1> && !spectral::detail::is_complex_v<D2>) {
    const Field p = phi;
    const Field g = f;
    Field out = spectral::hilbert(Field(p.cwiseProduct(g))) - p.cwiseProduct(spectral::hilbert(g));
    return out;
  } else {
    const ComplexField p = phi.template cast<Complex>();
    const ComplexField g = f.template cast<Complex>();
    ComplexField out =
        spectral::hilbert(ComplexField(p.cwiseProduct(g))) - p.cwiseProduct(spectral::hilbert(g));
    return out;
  }
}

/// Converts C(v)^* = v1 - i v2 back to the real pair (v1, v2).
VectorField from_conjugate(const ComplexField& conj_form);
/// C(v)^* for a real pair field.
ComplexField to_conjugate(const VectorField& v);

/// C(W)^* = K[z_d] gamma + (1/2i) H(gamma / z_alpha).
ComplexField birkhoff_rott_conjugate(const CurveOperators& ops, const Field& gamma);
VectorField birkhoff_rott(const CurveOperators& ops, const Field& gamma);
VectorField birkhoff_rott(const InterfaceState& state);

/// C(m)^* = z_a K[z_d]((gamma/z_a)_a) + (z_a/2i) [H, 1/z_a^2](z_a (gamma/z_a)_a).
ComplexField m_conjugate(const CurveOperators& ops, const Field& gamma);
VectorField m_term(const CurveOperators& ops, const Field& gamma);
VectorField m_term(const InterfaceState& state);

/// J[z_d] f = Re{ z_a K[z_d] f + (z_a/2i) [H, 1/z_a] f }.
Field j_operator(const CurveOperators& ops, const Field& f);
/// S[z_d] f = Re{ (i z_a^2/s_a) K[z_d]((f/z_a)_a) } + Re{ (z_a^2/2 s_a) [H, 1/z_a^2](z_a (f/z_a)_a) }.
Field s_operator(const CurveOperators& ops, const Field& f);

/// The gamma_t coupling operator, defined so the gamma_t equation reads
///   (I + (2 pi rho A~/L) Lambda) gamma_t + T gamma_t = F,
/// i.e. T f = 2A J f + 2 rho A~ (S f - (2 pi theta_a / L) J f).
Field t_operator(const CurveOperators& ops, const PhysParams& params, const Field& f);

/// Multiplier (1 + (2 pi rho A~/L) |k|)^{-1}.
Field apply_d2_inverse(const Field& f, double L, const PhysParams& params);

struct OperatorProbeReport {
  double estimated_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct ProbeOptions {
  int trials = 16;
  int max_iterations = 200;
  double tolerance = 1e-6;
  std::uint64_t seed = 20240607;
};

/// Power-iteration estimate of the L2 operator norm of D2^{-1} T.
OperatorProbeReport probe_t_norm(const CurveOperators& ops, const PhysParams& params,
                                 const ProbeOptions& options = {});
OperatorProbeReport probe_t_norm(const InterfaceState& state, const PhysParams& params,
                                 const ProbeOptions& options = {});

/// Dense matrix of D2^{-1} T on the grid.
Eigen::MatrixXd t_matrix(const CurveOperators& ops, const PhysParams& params);

}  // namespace hydroelastic
