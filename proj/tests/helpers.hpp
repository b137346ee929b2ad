#pragma once

#include <random>

#include "hydroelastic/evolution.hpp"

namespace testing {

using namespace hydroelastic;

inline Field wave(Index n, double amp, int k, bool sine) {
  const Field a = Grid(n).nodes();
  const Eigen::ArrayXd ka = static_cast<double>(k) * a.array();
  return amp * (sine ? Eigen::ArrayXd(ka.sin()) : Eigen::ArrayXd(ka.cos())).matrix();
}

inline double max_abs(const Field& f) { return f.cwiseAbs().maxCoeff(); }
inline double max_abs(const ComplexField& f) { return f.cwiseAbs().maxCoeff(); }
inline double max_abs(const VectorField& f) { return f.cwiseAbs().maxCoeff(); }

/// Random trigonometric polynomial with modes 0..kmax and coefficients decaying like exp(-k/2).
inline Field random_trig(Index n, int kmax, std::mt19937_64& rng, bool zero_mean = false) {
  std::normal_distribution<double> nd;
  const Field a = Grid(n).nodes();
  Field f = Field::Constant(n, zero_mean ? 0.0 : nd(rng));
  for (int k = 1; k <= kmax; ++k) {
    const double w = std::exp(-0.5 * k);
    f += (w * nd(rng)) * (static_cast<double>(k) * a.array()).cos().matrix();
    f += (w * nd(rng)) * (static_cast<double>(k) * a.array()).sin().matrix();
  }
  return f;
}

/// theta = eps sin(alpha) + small higher harmonics; odd, so the curve closes.
inline InterfaceState wavy_state(Index n, double eps = 0.2, double gamma_amp = 1.0) {
  Field th = wave(n, eps, 1, true);
  Field ga = wave(n, gamma_amp, 1, false);
  return make_state(th, ga);
}

inline InterfaceState flat_state(Index n, const Field& gamma) {
  return make_state(Field::Zero(n), gamma);
}

}  // namespace testing
