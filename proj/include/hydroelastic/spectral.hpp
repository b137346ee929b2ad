#pragma once

// Fourier-side primitives on the uniform 2*pi-periodic grid alpha_j = 2*pi*j/N.
//
// Coefficients follow f_hat_k = (1/N) sum_j f(alpha_j) exp(-i k alpha_j). Odd
// multipliers (derivatives, Hilbert transform) zero the Nyquist mode k = N/2 so
// that real input stays real. Every operator accepts real (VectorXd) or complex
// (VectorXcd) fields and returns the same type.

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "hydroelastic/errors.hpp"

namespace hydroelastic {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Field = Eigen::VectorXd;
using ComplexField = Eigen::VectorXcd;
/// Pointwise 2-vectors: column 0 is the x component, column 1 the y component.
using VectorField = Eigen::Matrix<double, Eigen::Dynamic, 2>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Number of collocation points and node positions.
struct Grid {
  Index n = 0;

  explicit Grid(Index points);

  double spacing() const { return kTwoPi / static_cast<double>(n); }
  double node(Index j) const { return spacing() * static_cast<double>(j); }
  Field nodes() const;
};

namespace spectral {

/// Signed wavenumber stored at FFT slot j (Nyquist reported as +N/2).
inline int wavenumber(Index j, Index n) {
  return static_cast<int>(j <= n / 2 ? j : j - n);
}

/// Normalized coefficients f_hat_k in FFT slot order.
ComplexField coefficients(const ComplexField& values);
/// Inverse of coefficients().
ComplexField synthesize(const ComplexField& coeffs);

namespace detail {

template <class Derived>
using Plain = typename Derived::PlainObject;

template <class Derived>
inline constexpr bool is_complex_v = Eigen::NumTraits<typename Derived::Scalar>::IsComplex;

template <class Derived>
Plain<Derived> from_complex(const ComplexField& v) {
  if constexpr (is_complex_v<Derived>) {
    return v;
  } else {
    return v.real();
  }
}

/// Applies symbol(k) to every non-Nyquist mode; the Nyquist slot is multiplied
/// by nyquist_factor.
template <class Derived, class Symbol>
Plain<Derived> multiply(const Eigen::MatrixBase<Derived>& f, Symbol&& symbol,
                        Complex nyquist_factor) {
  ComplexField c = coefficients(f.template cast<Complex>());
  const Index n = c.size();
  for (Index j = 0; j < n; ++j) {
    if (n % 2 == 0 && j == n / 2) {
      c[j] *= nyquist_factor;
    } else {
      c[j] *= symbol(wavenumber(j, n));
    }
  }
  return from_complex<Derived>(synthesize(c));
}

}  // namespace detail

template <class Derived>
double mean_abs_scale(const Eigen::MatrixBase<Derived>& f) {
  return f.size() == 0 ? 0.0 : f.cwiseAbs().maxCoeff();
}

/// Trapezoid mean (1/2pi) int f.
template <class Derived>
typename Derived::Scalar mean(const Eigen::MatrixBase<Derived>& f) {
  return f.mean();
}

/// Trapezoid quadrature of int_0^{2pi} f.
template <class Derived>
typename Derived::Scalar integrate(const Eigen::MatrixBase<Derived>& f) {
  return f.mean() * kTwoPi;
}

/// Multiplier (ik)^order; Nyquist zeroed for order >= 1.
template <class Derived>
detail::Plain<Derived> derivative(const Eigen::MatrixBase<Derived>& f, int order = 1) {
  if (order < 0) throw Error(ErrorKind::InvalidArgument, "derivative order must be nonnegative");
  if (order == 0) return f;
  return detail::multiply(
      f, [order](int k) { return std::pow(Complex(0.0, static_cast<double>(k)), order); },
      Complex(0.0));
}

/// Periodic Hilbert transform, symbol -i sgn(k).
template <class Derived>
detail::Plain<Derived> hilbert(const Eigen::MatrixBase<Derived>& f) {
  return detail::multiply(
      f,
      [](int k) {
        if (k == 0) return Complex(0.0);
        return Complex(0.0, k > 0 ? -1.0 : 1.0);
      },
      Complex(0.0));
}

/// Removes the mean.
template <class Derived>
detail::Plain<Derived> project_zero_mean(const Eigen::MatrixBase<Derived>& f) {
  detail::Plain<Derived> out = f;
  out.array() -= f.mean();
  return out;
}

/// Mean-zero antiderivative of a mean-zero field.
template <class Derived>
detail::Plain<Derived> antiderivative(const Eigen::MatrixBase<Derived>& f) {
  const double tol = 1e-12 * std::max(1.0, mean_abs_scale(f));
  if (std::abs(f.mean()) > tol) {
    throw Error(ErrorKind::NonZeroMean, "antiderivative of a field with nonzero mean");
  }
  return detail::multiply(
      f,
      [](int k) {
        if (k == 0) return Complex(0.0);
        return Complex(0.0, -1.0 / static_cast<double>(k));
      },
      Complex(0.0));
}

/// Lambda^s with symbol |k|^s; k = 0 and Nyquist mapped to 0.
template <class Derived>
detail::Plain<Derived> fractional_lambda(const Eigen::MatrixBase<Derived>& f, double s) {
  if (s < 0.0) throw Error(ErrorKind::InvalidArgument, "fractional_lambda needs s >= 0");
  return detail::multiply(
      f,
      [s](int k) {
        if (k == 0) return Complex(0.0);
        return Complex(std::pow(std::abs(static_cast<double>(k)), s));
      },
      Complex(0.0));
}

/// Diagonal Fourier multiplier with a real even symbol; the Nyquist slot uses
/// the symbol at +N/2.
template <class Derived, class Symbol>
detail::Plain<Derived> apply_even_symbol(const Eigen::MatrixBase<Derived>& f, Symbol&& symbol) {
  const Index n = f.size();
  return detail::multiply(
      f, [&symbol](int k) { return Complex(symbol(std::abs(k))); },
      Complex(symbol(static_cast<int>(n / 2))));
}

/// (sum_k (1 + k^2)^s |f_hat_k|^2 * 2pi)^{1/2}; equals the L2 norm on [0, 2pi] at s = 0.
template <class Derived>
double sobolev_norm(const Eigen::MatrixBase<Derived>& f, double s) {
  const ComplexField c = coefficients(f.template cast<Complex>());
  const Index n = c.size();
  double sum = 0.0;
  for (Index j = 0; j < n; ++j) {
    const double k = static_cast<double>(wavenumber(j, n));
    sum += std::pow(1.0 + k * k, s) * std::norm(c[j]);
  }
  return std::sqrt(kTwoPi * sum);
}

/// Zeroes every Fourier mode with |f_hat_k| < floor. floor = 0 disables.
template <class Derived>
detail::Plain<Derived> krasny_filter(const Eigen::MatrixBase<Derived>& f, double floor) {
  if (floor < 0.0) throw Error(ErrorKind::InvalidArgument, "filter floor must be nonnegative");
  if (floor == 0.0) return f;
  ComplexField c = coefficients(f.template cast<Complex>());
  for (auto& ck : c) {
    if (std::abs(ck) < floor) ck = 0.0;
  }
  return detail::from_complex<Derived>(synthesize(c));
}

/// Trigonometric interpolation onto a grid of m points (zero padding or truncation).
template <class Derived>
detail::Plain<Derived> resample(const Eigen::MatrixBase<Derived>& f, Index m) {
  const Index n = f.size();
  if (m == n) return f;
  if (m <= 0 || m % 2 != 0 || n % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "resample needs even grid sizes");
  }
  const ComplexField c = coefficients(f.template cast<Complex>());
  ComplexField out = ComplexField::Zero(m);
  const Index half = std::min(n, m) / 2;
  for (Index k = 0; k < half; ++k) {
    out[k] = c[k];
    if (k > 0) out[m - k] = c[n - k];
  }
  if (m > n) {
    out[half] = 0.5 * c[half];
    out[m - half] = 0.5 * c[half];
  } else {
    out[half] = c[half] + c[n - half];
  }
  return detail::from_complex<Derived>(synthesize(out));
}

}  // namespace spectral
}  // namespace hydroelastic
