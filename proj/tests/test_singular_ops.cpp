#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace testing;
namespace sp = hydroelastic::spectral;

namespace {

VectorField d_alpha(const VectorField& v) {
  VectorField out(v.rows(), 2);
  out.col(0) = sp::derivative(Field(v.col(0)));
  out.col(1) = sp::derivative(Field(v.col(1)));
  return out;
}

double l2(const Field& f) { return sp::sobolev_norm(f, 0.0); }

}  // namespace

TEST_CASE("Birkhoff-Rott on the flat interface") {
  const Index n = 64;
  CHECK(max_abs(birkhoff_rott(flat_state(n, Field::Constant(n, 0.7)))) < 1e-14);
  const VectorField w = birkhoff_rott(flat_state(n, wave(n, 1, 1, false)));
  CHECK(max_abs(Field(w.col(0))) < 1e-14);
  CHECK(max_abs(Field(w.col(1) - wave(n, 0.5, 1, true))) < 1e-14);
  const VectorField pv = oracle::pv_birkhoff_rott(flat_state(n, wave(n, 1, 1, false)));
  CHECK(max_abs(VectorField(w - pv)) < 1e-12);
}

TEST_CASE("Birkhoff-Rott matches the principal value quadrature oracle") {
  const InterfaceState s = wavy_state(64);
  const VectorField w = birkhoff_rott(s);
  const VectorField pv = oracle::pv_birkhoff_rott(s);
  CHECK(max_abs(VectorField(w - pv)) < 1e-10);
  // Same decomposition built entry by entry.
  const CurveOperators ops(s);
  const oracle::Curve c = oracle::curve(s);
  const ComplexField direct = oracle::K(c, s.gamma.cast<Complex>()) +
                              oracle::H(ComplexField(s.gamma.cast<Complex>().cwiseQuotient(c.za))) /
                                  Complex(0.0, 2.0);
  CHECK(max_abs(VectorField(w - oracle::real_pair(direct))) < 1e-13);
}

TEST_CASE("Birkhoff-Rott resolution self-convergence is spectral") {
  // Broad spectrum so the coarse grids are visibly under-resolved.
  auto state = [](Index n) {
    return make_state(Field(wave(n, 0.5, 1, true) + wave(n, 0.15, 2, true)),
                      Field(wave(n, 1, 1, false) + wave(n, 0.3, 3, true)));
  };
  const VectorField ref = birkhoff_rott(state(256));
  auto err = [&](Index n) {
    const VectorField w = birkhoff_rott(state(n));
    const Index stride = 256 / n;
    double e = 0.0;
    for (Index j = 0; j < n; ++j) e = std::max(e, (w.row(j) - ref.row(stride * j)).cwiseAbs().maxCoeff());
    return e;
  };
  const double e8 = err(8), e16 = err(16);
  MESSAGE("BR self-convergence errors: N=8 " << e8 << ", N=16 " << e16);
  CHECK(e16 > 0.0);
  CHECK(std::log2(e8 / e16) > 6.0);
}

TEST_CASE("K diagonal equals the Richardson limit of off-diagonal values") {
  const InterfaceState s = make_state(Field(wave(32, 0.3, 1, true) + wave(32, 0.1, 2, true)), Field::Zero(32));
  const CurveOperators ops(s);
  const Index n = s.size();
  const Complex w = Complex(kTwoPi / n) / (Complex(0.0, 4.0 * kPi));
  for (Index j : {0, 5, 11, 20}) {
    const double a = kTwoPi * j / n;
    const double h = 1e-3;
    const Complex k1 = oracle::kernel_between(s, a, a + h);
    const Complex k2 = oracle::kernel_between(s, a, a + h / 2);
    const Complex k4 = oracle::kernel_between(s, a, a + h / 4);
    const Complex r1 = 2.0 * k2 - k1;
    const Complex r2 = 2.0 * k4 - k2;
    const Complex limit = (4.0 * r2 - r1) / 3.0;
    const Complex diag = ops.k_matrix()(j, j) / w;
    CHECK(std::abs(limit - diag) < 1e-7 * (1.0 + std::abs(diag)));
  }
}

TEST_CASE("flat-curve annihilation of K, J, S, T and m") {
  const Index n = 64;
  std::mt19937_64 rng(21);
  const Field gamma = random_trig(n, 20, rng);
  const InterfaceState flat = flat_state(n, gamma);
  const CurveOperators ops(flat);
  PhysParams p;
  p.rho1 = 0.8;
  p.rho2 = 0.2;
  p.rho0 = 0.3;
  for (int trial = 0; trial < 5; ++trial) {
    const Field f = random_trig(n, 25, rng);
    CHECK(max_abs(ops.apply_k(f)) < 1e-12);
    CHECK(max_abs(j_operator(ops, f)) < 1e-12);
    CHECK(max_abs(s_operator(ops, f)) < 1e-12);
    CHECK(max_abs(t_operator(ops, p, f)) < 1e-12);
  }
  CHECK(max_abs(m_term(flat)) < 1e-12);
  CHECK(probe_t_norm(ops, p).estimated_norm < 1e-12);
}

TEST_CASE("hilbert_commutator") {
  const Index n = 64;
  std::mt19937_64 rng(4);
  const Field f = random_trig(n, 20, rng);
  CHECK(max_abs(Field(hilbert_commutator(Field(Field::Constant(n, 2.5)), f))) < 1e-13);
  CHECK(max_abs(Field(hilbert_commutator(f, Field(Field::Zero(n))))) == 0.0);
  const Field phi = wave(n, 1, 1, false);
  const Field f8 = wave(n, 1, 8, false);
  const Field out = hilbert_commutator(phi, f8);
  // cos(8a) has no modes that cos(a) can move across k = 0, so the output stays at the round-off level.
  CHECK(sp::sobolev_norm(out, 4.0) < 1e-12 * sp::sobolev_norm(f8, 4.0));
  CHECK(sp::sobolev_norm(f8, 4.0) > 4000.0);
  const ComplexField oc = hilbert_commutator(phi.cast<Complex>(), f.cast<Complex>());
  CHECK(max_abs(ComplexField(oc - oracle::comm(phi.cast<Complex>(), f.cast<Complex>()))) < 1e-12);
}

TEST_CASE("m term examples and the W_a decomposition") {
  const Index n = 64;
  CHECK(max_abs(m_term(flat_state(n, wave(n, 1, 1, false)))) < 1e-14);
  CHECK(max_abs(m_term(make_state(wave(n, 0.2, 1, true), Field::Zero(n)))) == 0.0);

  const InterfaceState s = wavy_state(n);
  const CurveOperators ops(s);
  const Frame f = frame(s.theta);
  const double b = kPi / s.L;
  const Field hga = sp::hilbert(Field(sp::derivative(s.gamma)));
  const Field hgt = sp::hilbert(Field(s.gamma.cwiseProduct(ops.theta_alpha())));
  VectorField assembled = m_term(ops, s.gamma);
  for (int c = 0; c < 2; ++c) {
    assembled.col(c) += b * hga.cwiseProduct(Field(f.normal.col(c)));
    assembled.col(c) -= b * hgt.cwiseProduct(Field(f.tangent.col(c)));
  }
  CHECK(max_abs(VectorField(assembled - d_alpha(birkhoff_rott(ops, s.gamma)))) < 1e-7);
  // Oracle route: m from differentiating the oracle W.
  const oracle::DirectF o = oracle::direct_F(s, PhysParams{});
  CHECK(max_abs(VectorField(o.m - m_term(ops, s.gamma))) < 1e-11);
}

TEST_CASE("J and S agree with the oracle transcription") {
  const Index n = 48;
  const InterfaceState s = make_state(Field(wave(n, 0.25, 1, true) + wave(n, 0.05, 2, true)), Field::Zero(n));
  const CurveOperators ops(s);
  const oracle::Curve c = oracle::curve(s);
  std::mt19937_64 rng(5);
  const Field f = random_trig(n, 16, rng);
  CHECK(max_abs(Field(j_operator(ops, f) - oracle::J(c, f))) < 1e-12);
  CHECK(max_abs(Field(s_operator(ops, f) - oracle::S(c, f))) < 1e-11);
  CHECK(max_abs(s_operator(ops, Field(Field::Zero(n)))) == 0.0);
}

TEST_CASE("J is far smaller than its input in H^3") {
  const Index n = 256;
  const InterfaceState s = make_state(wave(n, 0.2, 1, true), Field::Zero(n));
  const CurveOperators ops(s);
  const Field f = wave(n, 1, 6, false);
  const double ratio = sp::sobolev_norm(Field(j_operator(ops, f)), 3.0) / sp::sobolev_norm(f, 3.0);
  MESSAGE("|Jf|_3 / |f|_3 = " << ratio);
  CHECK(ratio < 0.1);
}

TEST_CASE("property: K, J and S smooth high modes") {
  const Index n = 64;
  const InterfaceState s = wavy_state(n);
  const CurveOperators ops(s);
  auto norms = [&](int k) {
    const Field f = wave(n, 1, k, false);
    return std::array<double, 3>{l2(Field(ops.apply_k(f).cwiseAbs())), l2(j_operator(ops, f)),
                                 l2(s_operator(ops, f))};
  };
  const auto lo = norms(n / 8);
  const auto hi = norms(n / 4);
  for (int i = 0; i < 3; ++i) {
    for (int p : {2, 4, 6}) {
      CHECK(hi[i] <= std::pow(0.5, p) * lo[i] + 1e-12);
    }
  }
}

TEST_CASE("property: linearity in f") {
  const Index n = 48;
  const InterfaceState s = wavy_state(n);
  const CurveOperators ops(s);
  PhysParams p;
  p.rho1 = 0.7;
  p.rho2 = 0.3;
  p.rho0 = 0.05;
  std::mt19937_64 rng(6);
  const Field f = random_trig(n, 16, rng), g = random_trig(n, 16, rng);
  const double a = 1.7, b = -0.4;
  auto check = [&](auto op) {
    const Field lhs = op(Field(a * f + b * g));
    CHECK(max_abs(Field(lhs - a * op(f) - b * op(g))) < 1e-12 * (1.0 + max_abs(lhs)));
  };
  check([&](const Field& x) { return Field(ops.apply_k(x).real()); });
  check([&](const Field& x) { return j_operator(ops, x); });
  check([&](const Field& x) { return s_operator(ops, x); });
  check([&](const Field& x) { return t_operator(ops, p, x); });
  check([&](const Field& x) { return Field(hilbert_commutator(s.theta, x)); });
}

TEST_CASE("property: J and S are Lipschitz in the curve") {
  const Index n = 48;
  const Field base = wave(n, 0.2, 1, true);
  const Field bump = wave(n, 1, 2, true);
  const Field f = wave(n, 1, 3, false);
  const CurveOperators ops0(make_state(base, Field::Zero(n)));
  std::vector<double> rj, rs;
  for (double delta : {1e-2, 1e-3, 1e-4}) {
    const CurveOperators ops(make_state(Field(base + delta * bump), Field::Zero(n)));
    rj.push_back(l2(Field(j_operator(ops, f) - j_operator(ops0, f))) / delta);
    rs.push_back(l2(Field(s_operator(ops, f) - s_operator(ops0, f))) / delta);
  }
  for (std::size_t i = 1; i < rj.size(); ++i) {
    CHECK(rj[i] == doctest::Approx(rj[0]).epsilon(0.2));
    CHECK(rs[i] == doctest::Approx(rs[0]).epsilon(0.2));
  }
}

TEST_CASE("T operator and the norm probe") {
  const Index n = 64;
  const InterfaceState s = make_state(wave(n, 0.2, 1, true), Field::Zero(n));
  const CurveOperators ops(s);
  std::mt19937_64 rng(12);
  const Field f = random_trig(n, 20, rng);

  PhysParams matched;  // A = 0, rho0 = 0
  CHECK(max_abs(t_operator(ops, matched, f)) == 0.0);
  CHECK(probe_t_norm(ops, matched).estimated_norm == 0.0);

  PhysParams p;
  p.rho1 = 0.55;
  p.rho2 = 0.45;  // A = 0.1
  p.rho0 = 0.01;
  const OperatorProbeReport rep = probe_t_norm(ops, p);
  MESSAGE("probe A=0.1 rho0=0.01: " << rep.estimated_norm << " after " << rep.iterations << " iterations");
  CHECK(rep.converged);
  CHECK(rep.estimated_norm >= 0.0);
  CHECK(rep.estimated_norm < 1.0);
  // The probe estimates the largest singular value of the dense matrix.
  const Eigen::MatrixXd m = t_matrix(ops, p);
  const double exact = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()[0];
  CHECK(rep.estimated_norm == doctest::Approx(exact).epsilon(1e-4));

  PhysParams massless;
  massless.rho1 = 0.75;
  massless.rho2 = 0.25;  // A = 0.5
  const OperatorProbeReport rm = probe_t_norm(ops, massless);
  MESSAGE("probe A=0.5 rho0=0: " << rm.estimated_norm);
  CHECK(rm.estimated_norm < 1.0);

  // Deterministic for a fixed seed.
  CHECK(probe_t_norm(ops, p).estimated_norm == rep.estimated_norm);
}
