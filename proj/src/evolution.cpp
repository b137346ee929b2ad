#include "hydroelastic/evolution.hpp"

#include <sstream>

namespace hydroelastic {
namespace {

constexpr Complex kI(0.0, 1.0);

using spectral::antiderivative;
using spectral::derivative;
using spectral::hilbert;
using spectral::project_zero_mean;

Field re(const ComplexField& c) { return c.real(); }

Field mul(const Field& a, const Field& b) { return a.cwiseProduct(b); }

double l2(const Field& f) { return spectral::sobolev_norm(f, 0.0); }

}  // namespace

Kinematics::Kinematics(const InterfaceState& s, double closure_tolerance)
    : state(s), ops(s, closure_tolerance), tn(frame(s.theta)) {
  const double L = s.L;
  theta_a = ops.theta_alpha();
  theta_aa = derivative(s.theta, 2);
  gamma_a = derivative(s.gamma, 1);

  W = birkhoff_rott(ops, s.gamma);
  m = m_term(ops, s.gamma);
  U = dot(W, tn.normal);
  W_dot_t = dot(W, tn.tangent);
  m_dot_n = dot(m, tn.normal);
  m_dot_t = dot(m, tn.tangent);

  const Field theta_a_U = mul(theta_a, U);
  L_t = -spectral::integrate(theta_a_U);

  const Field vw_rate = (kPi / L) * hilbert(mul(s.gamma, theta_a)) - project_zero_mean(m_dot_t);
  V_W = antiderivative(vw_rate);
  V = antiderivative(project_zero_mean(theta_a_U));
  V.array() += W_dot_t.mean();

  theta_t = (2.0 * kPi * kPi / (L * L)) * hilbert(gamma_a) + (kTwoPi / L) * mul(V_W, theta_a) +
            (kTwoPi / L) * m_dot_n;

  z_t.resize(s.size());
  for (Index j = 0; j < s.size(); ++j) {
    z_t[j] = Complex(V[j], U[j]) * std::polar(1.0, s.theta[j]);
  }
  z_t_alpha = derivative(z_t, 1);
}

Field normal_velocity(const InterfaceState& state) { return Kinematics(state).U; }

double length_rate(const InterfaceState& state) { return Kinematics(state).L_t; }

Field tangential_correction(const InterfaceState& state) { return Kinematics(state).V_W; }

Field full_tangential(const InterfaceState& state) { return Kinematics(state).V; }

Field theta_rhs(const InterfaceState& state) { return Kinematics(state).theta_t; }

ComplexField z_time_derivative(const InterfaceState& state) { return Kinematics(state).z_t; }

RemainderBundle assemble_remainders(const Kinematics& kin, const PhysParams& params) {
  const CurveOperators& ops = kin.ops;
  const Field& gamma = kin.state.gamma;
  const Field& theta_a = kin.theta_a;
  const Field& gamma_a = kin.gamma_a;
  const double L = kin.state.L;
  const double sa = ops.s_alpha();
  const double a = kTwoPi / L;
  const double b = kPi / L;
  const double A = params.atwood();
  const double At = params.a_tilde();

  const ComplexField& za = ops.z_alpha();
  const ComplexField inv_za = za.cwiseInverse();
  const ComplexField za2 = za.cwiseProduct(za);
  const ComplexField inv_za2 = za2.cwiseInverse();
  const ComplexField& zt = kin.z_t;
  const ComplexField& zta = kin.z_t_alpha;
  const ComplexField gc = gamma.cast<Complex>();

  // (gamma / z_a)_a
  const ComplexField g1 = derivative(ComplexField(gc.cwiseProduct(inv_za)));

  RemainderBundle rem;
  rem.m = kin.m;

  rem.R1 = re(za.cwiseProduct(zt).cwiseProduct(ops.apply_k(g1))) -
           re(za.cwiseProduct(ops.apply_k(ComplexField(zt.cwiseProduct(g1))))) -
           re(za.cwiseProduct(hilbert_commutator(zt, inv_za.cwiseProduct(g1))) / (2.0 * kI));

  const ComplexField q = gc.cwiseProduct(zta).cwiseProduct(inv_za);
  rem.R2_smooth = -re(za.cwiseProduct(ops.apply_k(q))) -
                  re(za.cwiseProduct(hilbert_commutator(inv_za, q)) / (2.0 * kI));

  {
    const ComplexField c1 = (kI / sa) * za2;
    const ComplexField c2 = za2 / (2.0 * sa);
    const ComplexField h1 = derivative(ComplexField(-gc.cwiseProduct(zta).cwiseProduct(inv_za2)));
    const ComplexField g2 = derivative(ComplexField(g1.cwiseProduct(inv_za)));
    Field r3 = re(c1.cwiseProduct(ops.apply_k(h1))) +
               re(c2.cwiseProduct(hilbert_commutator(inv_za2, za.cwiseProduct(h1))));
    r3 += re(-c2.cwiseProduct(hilbert_commutator(inv_za2, g1.cwiseProduct(zta))) -
             c1.cwiseProduct(ops.apply_k(ComplexField(g1.cwiseProduct(zta).cwiseProduct(inv_za)))));
    r3 += re(c1.cwiseProduct(zt).cwiseProduct(ops.apply_k(g2))) -
          re(c1.cwiseProduct(ops.apply_k(ComplexField(zt.cwiseProduct(g2)))));
    r3 -= re(c2.cwiseProduct(hilbert_commutator(zt, inv_za.cwiseProduct(g2))));
    rem.R3 = r3;
  }

  const Field& mn = kin.m_dot_n;
  const Field& mt = kin.m_dot_t;
  const Field& vw = kin.V_W;
  const Field mt_sum = project_zero_mean(mt) + mt;
  const Field vw_a = derivative(vw, 1);
  const Field gamma_theta_a = mul(gamma, theta_a);
  const Field h_gamma_a = hilbert(gamma_a);
  // Theta = theta_t minus its leading Hilbert part.
  const Field big_theta = a * mul(vw, theta_a) + a * mn;

  rem.R5 = -a * hilbert_commutator(big_theta, gamma_theta_a) + a * mul(mul(vw, vw_a), theta_a) +
           a * mul(vw, derivative(mn, 1)) - mul(mt_sum, big_theta);

  const double L2 = L * L;
  const double L3 = L2 * L;
  const double pi3 = kPi * kPi * kPi;
  rem.Rt1 = 2.0 * At *
            ((2.0 * pi3 / L3) * mul(mul(theta_a, gamma), gamma_a) +
             (4.0 * pi3 / L3) * hilbert_commutator(h_gamma_a, gamma_theta_a) +
             (2.0 * kPi * kPi / L2) * mul(mt_sum, h_gamma_a) + (kPi * kin.L_t / L2) * h_gamma_a);

  const Field sin_theta = kin.state.theta.array().sin().matrix();
  const Field x_aa = -sa * mul(sin_theta, theta_a);
  const Field y_a = sa * sin_theta;

  const Field gamma_bracket = (kPi * kPi / L2) * hilbert_commutator(gamma, h_gamma_a) +
                              hilbert(Field(b * mul(vw, gamma_theta_a) + b * mul(gamma, mn)));
  const Field theta_weight = (4.0 * kPi * At / L) * theta_a;
  rem.Rt2 = -mul(theta_weight, gamma_bracket) + mul(theta_weight, rem.R1 + rem.R2_smooth) -
            2.0 * At * ((kin.L_t / L) * mn + (kTwoPi * params.g / L) * x_aa + rem.R3 + rem.R5);

  rem.R = a * mul(vw_a, gamma) +
          2.0 * A *
              ((kPi * kPi / L2) * hilbert_commutator(gamma, h_gamma_a) + hilbert(Field(b * mul(gamma, mn))) +
               b * hilbert_commutator(vw, gamma_theta_a) + mul(vw, mt) - params.g * y_a - rem.R1 -
               rem.R2_smooth);
  return rem;
}

Field assemble_F(const Kinematics& kin, const PhysParams& params, const RemainderBundle& rem) {
  const double L = kin.state.L;
  const double L2 = L * L;
  const double rho = params.sheet_density(L);
  const double At = params.a_tilde();
  const double A = params.atwood();
  const double sigma_abar = params.sigma * params.a_bar(L);
  const Field& theta_aa = kin.theta_aa;
  const Field& vw = kin.V_W;

  Field F = params.lambda(L) * theta_aa;
  if (sigma_abar != 0.0) {
    F -= sigma_abar * derivative(kin.state.theta, 4);
    F -= (1.5 * sigma_abar) * mul(kin.theta_a.cwiseAbs2(), theta_aa);
  }
  F += mul((kTwoPi / L) * vw - (4.0 * A * kPi * kPi / L2) * kin.state.gamma, kin.gamma_a);
  if (rho != 0.0) {
    F -= (4.0 * kPi * rho * At / L) * mul(vw.cwiseAbs2(), theta_aa);
    F -= (4.0 * rho * At * kPi * kPi / L2) * mul(vw, hilbert(derivative(kin.state.gamma, 2)));
    F += rho * (rem.Rt1 + rem.Rt2);
  }
  F += rem.R;
  return F;
}

Field assemble_F(const Kinematics& kin, const PhysParams& params) {
  return assemble_F(kin, params, assemble_remainders(kin, params));
}

GammaSolveResult solve_gamma_t(const Kinematics& kin, const PhysParams& params, const Field& F,
                               const SolveOptions& options) {
  const double L = kin.state.L;
  GammaSolveResult result;
  const Field target = apply_d2_inverse(F, L, params);
  if (params.atwood() == 0.0 && params.rho0 == 0.0) {
    result.gamma_t = target;
    result.iterations = 1;
    return result;
  }
  const double stop = options.tolerance * (1.0 + l2(F));
  const double w = options.damping;
  auto apply_b = [&](const Field& x) {
    return apply_d2_inverse(t_operator(kin.ops, params, x), L, params);
  };

  Field x = target;
  Field bx = apply_b(x);
  bool converged = false;
  int it = 0;
  while (it < options.max_iterations) {
    ++it;
    const Field next = (1.0 - w) * x + w * (target - bx);
    const double change = l2(next - x);
    x = next;
    bx = apply_b(x);
    if (!std::isfinite(change)) break;
    if (change < stop) {
      converged = true;
      break;
    }
  }
  result.gamma_t = x;
  result.iterations = it;
  result.residual = l2(x + bx - target);
  if (!converged || !(result.residual < 10.0 * stop)) {
    std::ostringstream os;
    os << "gamma_t fixed point failed after " << it << " iterations (residual " << result.residual
       << ")";
    throw Error(ErrorKind::FixedPointDiverged, os.str());
  }
  return result;
}

StateDerivative rhs(const Kinematics& kin, const PhysParams& params, const SolveOptions& options) {
  const Field F = assemble_F(kin, params);
  const GammaSolveResult solved = solve_gamma_t(kin, params, F, options);
  StateDerivative d;
  d.theta_t = kin.theta_t;
  d.gamma_t = solved.gamma_t;
  d.L_t = kin.L_t;
  d.iterations = solved.iterations;
  d.residual = solved.residual;
  return d;
}

StateDerivative rhs(const InterfaceState& state, const PhysParams& params,
                    const SolveOptions& options) {
  return rhs(Kinematics(state), params, options);
}

}  // namespace hydroelastic
