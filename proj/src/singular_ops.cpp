#include "hydroelastic/singular_ops.hpp"

#include <random>

namespace hydroelastic {
namespace {

constexpr Complex kI(0.0, 1.0);

// cot(x + iy) = (sin 2x - i sinh 2y) / (cosh 2y - cos 2x), with the denominator
// written as 2 (sin^2 x + sinh^2 y) to avoid cancellation near the diagonal.
Complex complex_cot(Complex w) {
  const double sx = std::sin(w.real());
  const double sy = std::sinh(w.imag());
  const double den = 2.0 * (sx * sx + sy * sy);
  return Complex(std::sin(2.0 * w.real()), -std::sinh(2.0 * w.imag())) / den;
}

}  // namespace

Complex k_kernel_offdiagonal(Complex zd_a, Complex zd_b, double alpha_a, double alpha_b,
                             Complex z_alpha_b) {
  return complex_cot(0.5 * (zd_a - zd_b)) - complex_cot(Complex(0.5 * (alpha_a - alpha_b))).real() / z_alpha_b;
}

CurveOperators::CurveOperators(const InterfaceState& state, double closure_tolerance)
    : L_(state.L), theta_(state.theta) {
  const Index n = state.size();
  zd_ = reconstruct_zd(state, closure_tolerance);
  theta_alpha_ = spectral::derivative(state.theta, 1);
  z_alpha_.resize(n);
  for (Index j = 0; j < n; ++j) z_alpha_[j] = std::polar(s_alpha(), state.theta[j]);

  // The flat cotangent goes through the same routine and node differences as
  // the curve one, so the two cancel exactly when z_d is the identity.
  const Field nodes = Grid(n).nodes();
  const ComplexField inv_za = z_alpha_.cwiseInverse();
  const Complex weight = 1.0 / (2.0 * kI * static_cast<double>(n));
  kernel_.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    kernel_(j, j) = weight * (-kI * theta_alpha_[j] * inv_za[j]);
    for (Index m = j + 1; m < n; ++m) {
      const Complex c = complex_cot(0.5 * (zd_[j] - zd_[m]));
      const double fc = complex_cot(Complex(0.5 * (nodes[j] - nodes[m]))).real();
      // Both cotangents are odd, so the (m, j) entry reuses them negated.
      kernel_(j, m) = weight * (c - fc * inv_za[m]);
      kernel_(m, j) = weight * (-c + fc * inv_za[j]);
    }
  }
  if (!kernel_.allFinite()) {
    throw Error(ErrorKind::DegenerateCurve, "curve self-intersects at the grid nodes");
  }
}

VectorField from_conjugate(const ComplexField& conj_form) {
  VectorField v(conj_form.size(), 2);
  v.col(0) = conj_form.real();
  v.col(1) = -conj_form.imag();
  return v;
}

ComplexField to_conjugate(const VectorField& v) {
  ComplexField c(v.rows());
  for (Index j = 0; j < v.rows(); ++j) c[j] = Complex(v(j, 0), -v(j, 1));
  return c;
}

ComplexField birkhoff_rott_conjugate(const CurveOperators& ops, const Field& gamma) {
  const ComplexField over_za = gamma.cast<Complex>().cwiseQuotient(ops.z_alpha());
  return ops.apply_k(gamma) + spectral::hilbert(over_za) / (2.0 * kI);
}

VectorField birkhoff_rott(const CurveOperators& ops, const Field& gamma) {
  return from_conjugate(birkhoff_rott_conjugate(ops, gamma));
}

VectorField birkhoff_rott(const InterfaceState& state) {
  return birkhoff_rott(CurveOperators(state), state.gamma);
}

ComplexField m_conjugate(const CurveOperators& ops, const Field& gamma) {
  const ComplexField& za = ops.z_alpha();
  const ComplexField g1 = spectral::derivative(ComplexField(gamma.cast<Complex>().cwiseQuotient(za)));
  const ComplexField inv_za2 = za.cwiseProduct(za).cwiseInverse();
  return za.cwiseProduct(ops.apply_k(g1)) +
         za.cwiseProduct(hilbert_commutator(inv_za2, za.cwiseProduct(g1))) / (2.0 * kI);
}

VectorField m_term(const CurveOperators& ops, const Field& gamma) {
  return from_conjugate(m_conjugate(ops, gamma));
}

VectorField m_term(const InterfaceState& state) { return m_term(CurveOperators(state), state.gamma); }

Field j_operator(const CurveOperators& ops, const Field& f) {
  const ComplexField& za = ops.z_alpha();
  const ComplexField inv_za = za.cwiseInverse();
  const ComplexField out =
      za.cwiseProduct(ops.apply_k(f)) + za.cwiseProduct(hilbert_commutator(inv_za, f)) / (2.0 * kI);
  return out.real();
}

Field s_operator(const CurveOperators& ops, const Field& f) {
  const ComplexField& za = ops.z_alpha();
  const ComplexField za2 = za.cwiseProduct(za);
  const ComplexField g1 = spectral::derivative(ComplexField(f.cast<Complex>().cwiseQuotient(za)));
  const ComplexField first = (kI / ops.s_alpha()) * za2.cwiseProduct(ops.apply_k(g1));
  const ComplexField second = za2.cwiseProduct(
                                  hilbert_commutator(za2.cwiseInverse(), za.cwiseProduct(g1))) /
                              (2.0 * ops.s_alpha());
  return (first + second).real();
}

Field t_operator(const CurveOperators& ops, const PhysParams& params, const Field& f) {
  const double L = ops.length();
  const double rho = params.sheet_density(L);
  const Field jf = j_operator(ops, f);
  Field out = 2.0 * params.atwood() * jf;
  if (rho != 0.0) {
    const Field sf = s_operator(ops, f);
    out += 2.0 * rho * params.a_tilde() *
           (sf - (kTwoPi / L) * ops.theta_alpha().cwiseProduct(jf));
  }
  return out;
}

Field apply_d2_inverse(const Field& f, double L, const PhysParams& params) {
  const double c = kTwoPi * params.sheet_density(L) * params.a_tilde() / L;
  if (c == 0.0) return f;
  return spectral::apply_even_symbol(f, [c](int k) { return 1.0 / (1.0 + c * k); });
}

Eigen::MatrixXd t_matrix(const CurveOperators& ops, const PhysParams& params) {
  const Index n = ops.size();
  Eigen::MatrixXd m(n, n);
  Field e = Field::Zero(n);
  for (Index j = 0; j < n; ++j) {
    e.setZero();
    e[j] = 1.0;
    m.col(j) = apply_d2_inverse(t_operator(ops, params, e), ops.length(), params);
  }
  return m;
}

OperatorProbeReport probe_t_norm(const CurveOperators& ops, const PhysParams& params,
                                 const ProbeOptions& options) {
  if (options.trials < 1) throw Error(ErrorKind::InvalidArgument, "probe needs at least one trial");
  OperatorProbeReport report;
  report.converged = true;
  if (params.atwood() == 0.0 && params.rho0 == 0.0) return report;

  const Eigen::MatrixXd b = t_matrix(ops, params);
  const Eigen::MatrixXd gram = b.transpose() * b;
  const Index n = ops.size();
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;

  for (int trial = 0; trial < options.trials; ++trial) {
    Eigen::VectorXd x(n);
    for (Index j = 0; j < n; ++j) x[j] = normal(rng);
    x.normalize();
    double estimate = 0.0;
    bool converged = false;
    int it = 0;
    for (; it < options.max_iterations && !converged; ++it) {
      const Eigen::VectorXd y = gram * x;
      const double next = std::sqrt(std::max(0.0, x.dot(y)));
      const double ynorm = y.norm();
      converged = std::abs(next - estimate) < options.tolerance || ynorm == 0.0;
      estimate = next;
      if (ynorm == 0.0) break;
      x = y / ynorm;
    }
    report.estimated_norm = std::max(report.estimated_norm, estimate);
    report.iterations = std::max(report.iterations, it);
    report.converged = report.converged && converged;
  }
  return report;
}

OperatorProbeReport probe_t_norm(const InterfaceState& state, const PhysParams& params,
                                 const ProbeOptions& options) {
  return probe_t_norm(CurveOperators(state), params, options);
}

}  // namespace hydroelastic
