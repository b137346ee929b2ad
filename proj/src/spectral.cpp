#include "hydroelastic/spectral.hpp"

#include <unsupported/Eigen/FFT>

namespace hydroelastic {

Grid::Grid(Index points) : n(points) {
  if (points <= 0 || points % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "grid size must be a positive even integer");
  }
}

Field Grid::nodes() const {
  Field a(n);
  for (Index j = 0; j < n; ++j) a[j] = node(j);
  return a;
}

namespace spectral {
namespace {

// Plans are cached inside Eigen::FFT, so each thread keeps its own instance.
Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::Unscaled);
    return f;
  }();
  return fft;
}

}  // namespace

ComplexField coefficients(const ComplexField& values) {
  ComplexField out(values.size());
  if (values.size() == 0) return out;
  engine().fwd(out, values);
  out /= static_cast<double>(values.size());
  return out;
}

ComplexField synthesize(const ComplexField& coeffs) {
  ComplexField out(coeffs.size());
  if (coeffs.size() == 0) return out;
  engine().inv(out, coeffs);
  return out;
}

}  // namespace spectral
}  // namespace hydroelastic
