#include <doctest.h>

#include <filesystem>

#include "helpers.hpp"
#include "hydroelastic/io.hpp"

using namespace testing;
namespace sp = hydroelastic::spectral;
namespace fs = std::filesystem;

namespace {

PhysParams stiff_params() {
  PhysParams p;
  p.rho1 = 0.6;
  p.rho2 = 0.4;
  p.sigma = 0.01;
  p.rho0 = 0.01;
  return p;
}

InterfaceState small_state(Index n) {
  return make_state(wave(n, 0.1, 1, true), wave(n, 0.1, 1, false));
}

InterfaceState integrate(InterfaceState s, const PhysParams& p, double t, int steps, Scheme scheme) {
  StepPolicy pol;
  pol.scheme = scheme;
  pol.filter_floor = 0.0;
  for (int i = 0; i < steps; ++i) s = step(s, p, t / steps, pol);
  return s;
}

double state_distance(const InterfaceState& a, const InterfaceState& b) {
  return max_abs(Field(a.theta - b.theta)) + max_abs(Field(a.gamma - b.gamma)) + std::abs(a.L - b.L);
}

}  // namespace

TEST_CASE("equilibrium is a fixed point of both schemes") {
  const Index n = 32;
  const InterfaceState eq = flat_state(n, Field::Zero(n));
  for (Scheme sc : {Scheme::Rk4, Scheme::Imex}) {
    StepPolicy pol;
    pol.scheme = sc;
    InterfaceState s = eq;
    for (int i = 0; i < 20; ++i) s = step(s, stiff_params(), 0.3, pol);
    CHECK(max_abs(s.theta) == 0.0);
    CHECK(max_abs(s.gamma) == 0.0);
    CHECK(s.L == eq.L);
  }
}

TEST_CASE("rk4 converges at fourth order") {
  const Index n = 32;
  const PhysParams p = stiff_params();
  // Energy in every resolved mode, so the stiff end sets both dt and the error.
  const InterfaceState s0 = make_state(Field(wave(n, 0.1, 1, true) + wave(n, 1e-3, 12, true)),
                                       Field(wave(n, 0.1, 1, false) + wave(n, 1e-3, 13, false)));
  const double t = 0.05;
  const double limit = stable_dt(s0.L, p, n, 0.9);
  const int base = static_cast<int>(std::ceil(t / limit));
  const InterfaceState ref = integrate(s0, p, t, 8 * base, Scheme::Rk4);
  const double e1 = state_distance(integrate(s0, p, t, base, Scheme::Rk4), ref);
  const double e2 = state_distance(integrate(s0, p, t, 2 * base, Scheme::Rk4), ref);
  MESSAGE("rk4 errors " << e1 << " " << e2 << " ratio " << e1 / e2);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
}

TEST_CASE("imex agrees with rk4 at first order in the linear regime") {
  const Index n = 32;
  PhysParams p = stiff_params();
  const InterfaceState s0 = make_state(wave(n, 1e-6, 1, true), wave(n, 1e-6, 1, false));
  const double t = 0.2;
  const InterfaceState ref = integrate(s0, p, t, 200, Scheme::Rk4);
  const double e1 = state_distance(integrate(s0, p, t, 20, Scheme::Imex), ref);
  const double e2 = state_distance(integrate(s0, p, t, 40, Scheme::Imex), ref);
  const double e3 = state_distance(integrate(s0, p, t, 80, Scheme::Imex), ref);
  MESSAGE("imex errors " << e1 << " " << e2 << " " << e3);
  CHECK(std::log2(e2 / e3) == doctest::Approx(1.0).epsilon(0.15));
  CHECK(e3 < 1e-7);
}

TEST_CASE("imex stays stable far above the rk4 limit") {
  const Index n = 256;
  PhysParams p;
  p.sigma = 1.0;
  const InterfaceState s0 = small_state(n);
  const double dt = 100.0 * stable_dt(s0.L, p, n, 0.5);
  StepPolicy pol;
  pol.scheme = Scheme::Imex;
  InterfaceState s = s0;
  for (int i = 0; i < 3; ++i) CHECK_NOTHROW(s = step(s, p, dt, pol));
  CHECK(stability_norm(s) <= stability_norm(s0) * 1.01);
}

TEST_CASE("rk4 above its stability limit raises StabilityViolated") {
  const Index n = 32;
  PhysParams p = stiff_params();
  const InterfaceState s0 = make_state(wave(n, 0.05, 1, true), Field(wave(n, 0.1, 1, false) + wave(n, 1e-3, 15, false)));
  const double dt = 40.0 * stable_dt(s0.L, p, n, 0.5);
  try {
    step_rk4(s0, p, dt);
    FAIL("expected StabilityViolated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StabilityViolated);
  }
  StepPolicy pol;
  pol.dt = dt;
  const Trajectory traj = run(s0, p, pol, 10 * dt);
  REQUIRE(traj.failure.has_value());
  CHECK(traj.failure->kind == ErrorKind::StabilityViolated);
  CHECK(traj.snapshots.size() >= 1);
}

TEST_CASE("run bookkeeping") {
  const Index n = 32;
  const PhysParams p = stiff_params();
  SUBCASE("t_end = 0 keeps only the initial snapshot") {
    const Trajectory t = run(small_state(n), p, StepPolicy{}, 0.0);
    CHECK(t.snapshots.size() == 1);
    CHECK(t.steps.empty());
    CHECK(t.completed());
  }
  SUBCASE("equilibrium to t = 1") {
    const InterfaceState eq = flat_state(n, Field::Zero(n));
    const Trajectory t = run(eq, p, StepPolicy{}, 1.0, {0.25, 0.5});
    CHECK(t.completed());
    CHECK(t.snapshots.back().time == 1.0);
    for (const auto& s : t.snapshots) {
      CHECK(s.theta == eq.theta);
      CHECK(s.gamma == eq.gamma);
      CHECK(s.L == eq.L);
    }
    for (const auto& r : t.diagnostics) CHECK(r.E_total == 0.0);
  }
  SUBCASE("times increase, checkpoints are hit exactly, grid is shared") {
    const Trajectory t = run(small_state(n), p, StepPolicy{}, 0.01, {0.0025, 0.005, 0.0075});
    CHECK(t.completed());
    for (std::size_t i = 1; i < t.snapshots.size(); ++i) {
      CHECK(t.snapshots[i].time > t.snapshots[i - 1].time);
      CHECK(t.snapshots[i].size() == n);
    }
    for (double c : {0.0025, 0.005, 0.0075, 0.01}) CHECK(t.snapshot_at(c) != nullptr);
    for (const auto& s : t.steps) CHECK(s.residual < 1e-11);
  }
  SUBCASE("inadmissible initial data throws") {
    StepPolicy pol;
    pol.admissible.min_chord_arc = 1.5;
    CHECK_THROWS_AS(run(small_state(n), p, pol, 0.01), Error);
  }
  SUBCASE("policy validation") {
    StepPolicy pol;
    pol.cfl = 1.5;
    CHECK_THROWS_AS(pol.validate(), Error);
    pol.cfl = 0.5;
    pol.dt = -1.0;
    CHECK_THROWS_AS(pol.validate(), Error);
  }
}

TEST_CASE("runs are deterministic and restart bitwise from hex JSONL") {
  const Index n = 32;
  const PhysParams p = stiff_params();
  const InterfaceState s0 = small_state(n);
  StepPolicy pol;
  const double t1 = 0.004, t2 = 0.01;
  const Trajectory full = run(s0, p, pol, t2, {t1});
  const Trajectory again = run(s0, p, pol, t2, {t1});
  REQUIRE(full.snapshots.size() == again.snapshots.size());
  for (std::size_t i = 0; i < full.snapshots.size(); ++i) {
    CHECK(full.snapshots[i].theta == again.snapshots[i].theta);
    CHECK(full.snapshots[i].gamma == again.snapshots[i].gamma);
  }

  const Trajectory first = run(s0, p, pol, t1);
  const fs::path dir = fs::path(TEST_SCRATCH_DIR) / "restart";
  hydroelastic::io::write_states_jsonl(dir / "first.jsonl", first.snapshots);
  const InterfaceState resumed_from = hydroelastic::io::read_states_jsonl(dir / "first.jsonl").back();
  CHECK(resumed_from.theta == first.snapshots.back().theta);
  CHECK(resumed_from.time == t1);
  const Trajectory second = run(resumed_from, p, pol, t2);
  const InterfaceState& a = second.snapshots.back();
  const InterfaceState& b = full.snapshots.back();
  CHECK(a.time == b.time);
  CHECK(a.theta == b.theta);
  CHECK(a.gamma == b.gamma);
  CHECK(a.L == b.L);
}

TEST_CASE("stored L stays consistent with the length functional") {
  const Index n = 64;
  StepPolicy pol;
  pol.monitor_cadence = 5;
  const Trajectory t = run(make_state(wave(n, 0.2, 1, true), wave(n, 0.3, 1, false)), stiff_params(), pol, 0.05);
  CHECK(t.completed());
  MESSAGE("max length drift " << t.max_length_drift);
  CHECK(t.max_length_drift < 1e-6);
  for (const auto& s : t.snapshots) CHECK(std::abs(s.L - length_of(s.theta)) / s.L < 1e-6);
}

TEST_CASE("stable_dt follows the leading-order frequency") {
  PhysParams p;
  const double L = kTwoPi;
  const Index n = 32;
  const double k = n / 2;
  CHECK(max_frequency(L, p, n) == doctest::Approx(std::sqrt(2.0 * kPi * kPi / (L * L) * k * p.lambda(L) * k * k)));
  CHECK(stable_dt(L, p, n, 0.5) == doctest::Approx(0.5 / max_frequency(L, p, n)));
  CHECK(scheme_from_string("imex") == Scheme::Imex);
  CHECK(std::string(to_string(Scheme::Rk4)) == "rk4");
  CHECK_THROWS_AS(scheme_from_string("euler"), Error);
}

TEST_CASE("closure violations during a run warn by default and can be corrected") {
  const Index n = 32;
  const PhysParams p = stiff_params();
  const InterfaceState s0 = make_state(Field(wave(n, 0.1, 1, true) + wave(n, 1e-3, 12, true)),
                                       Field(wave(n, 0.1, 1, false) + wave(n, 1e-3, 13, false)));
  StepPolicy pol;
  pol.dt = stable_dt(s0.L, p, n, 0.9);
  pol.filter_floor = 0.0;
  pol.admissible.closure_tolerance = 1e-14;
  const Trajectory warned = run(s0, p, pol, 40 * *pol.dt);
  CHECK(warned.completed());
  CHECK(warned.closure_warnings > 0);
  CHECK(warned.max_closure_defect > 1e-14);

  pol.admissible.correct_closure = true;
  const Trajectory fixed = run(s0, p, pol, 40 * *pol.dt);
  CHECK(fixed.completed());
  CHECK(fixed.max_closure_defect < 1e-15);
  CHECK(std::abs(closure_defect(fixed.snapshots.back().theta)) < 1e-15);

  CHECK(std::abs(closure_defect(close_theta(Field(Field::Constant(n, 0.3) + wave(n, 0.2, 2, false))))) < 1e-16);
}
