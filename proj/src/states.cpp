#include "sepgram/states.hpp"

#include "sepgram/errors.hpp"

#include <cmath>
#include <numbers>

namespace sepgram {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cplx Rng::complex_normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(t), r * std::sin(t)};
}

ComplexVector Rng::gaussian_vector(int n) {
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v[i] = complex_normal();
  return v;
}

ComplexMatrix Rng::gaussian_matrix(int rows, int cols) {
  ComplexMatrix g(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) g(r, c) = complex_normal();
  }
  return g;
}

ComplexMatrix Rng::haar_unitary(int n) { return unitary_from_gaussian(gaussian_matrix(n, n)); }

DensityMatrix werner(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::OutOfRange, "Werner parameter must lie in [0, 1]", p);
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = m(3, 3) = 1.0 + p;
  m(1, 1) = m(2, 2) = 1.0 - p;
  m(0, 3) = m(3, 0) = 2.0 * p;
  return DensityMatrix::validate(m / 4.0, 2, 2);
}

Horodecki97 horodecki97_data(double b) {
  if (b == 0.0) throw Error(ErrorCode::LimitingCase, "b = 0 is the limiting case where Lambda diverges");
  if (!(b > 0.0 && b <= 1.0)) throw Error(ErrorCode::OutOfRange, "rho_97 parameter must lie in (0, 1]", b);
  ComplexMatrix shift = ComplexMatrix::Zero(4, 4);
  shift(0, 1) = shift(1, 2) = shift(2, 3) = 1.0;
  ComplexVector lambda = ComplexVector::Zero(4);
  lambda[0] = std::sqrt((1.0 - b) / (2.0 * b));
  lambda[3] = std::sqrt((1.0 + b) / (2.0 * b));
  const ComplexVector lambda_tilde = lambda.reverse();

  ComplexMatrix raw = ComplexMatrix::Zero(8, 8);
  raw.topLeftCorner(4, 4) = shift * shift.adjoint() + lambda * lambda.adjoint();
  raw.topRightCorner(4, 4) = shift;
  raw.bottomLeftCorner(4, 4) = shift.adjoint();
  raw.bottomRightCorner(4, 4).setIdentity();
  DensityMatrix rho = DensityMatrix::validate(raw / raw.trace().real(), 2, 4);
  return Horodecki97{b, shift, lambda, lambda_tilde, raw, rho};
}

DensityMatrix horodecki97(double b) { return horodecki97_data(b).rho; }

SeparableSample random_separable(int m, int n, int k, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorCode::OutOfRange, "need at least one product term", k);
  Rng rng(seed);
  SeparableDecomposition sd;
  sd.dims = Dims{m, n};
  sd.phi.resize(m, k);
  sd.psi.resize(n, k);
  std::vector<double> weights(k);
  double total = 0.0;
  for (int t = 0; t < k; ++t) {
    const ComplexVector e = rng.gaussian_vector(m);
    const ComplexVector f = rng.gaussian_vector(n);
    sd.phi.col(t) = e / e.norm();
    sd.psi.col(t) = f / f.norm();
    weights[t] = -std::log(1.0 - rng.uniform());
    total += weights[t];
  }
  for (int t = 0; t < k; ++t) sd.phi.col(t) *= std::sqrt(weights[t] / total);
  ComplexMatrix mat = sd.density();
  mat /= mat.trace().real();
  return SeparableSample{DensityMatrix::validate(mat, m, n), sd};
}

DensityMatrix random_density(int m, int n, int r, std::uint64_t seed) {
  if (r < 1 || r > m * n) throw Error(ErrorCode::OutOfRange, "rank must lie in [1, mn]", r);
  Rng rng(seed);
  const ComplexMatrix g = rng.gaussian_matrix(m * n, r);
  ComplexMatrix mat = g * g.adjoint();
  mat /= mat.trace().real();
  return DensityMatrix::validate(mat, m, n);
}

bool brute_force_separability(const DensityMatrix& rho, double tol) {
  if (rho.dim_a() != 2 || (rho.dim_b() != 2 && rho.dim_b() != 3)) {
    throw Error(ErrorCode::UnsupportedDimension, "PPT is only decisive for 2x2 and 2x3");
  }
  return is_ppt(rho, tol).ppt;
}

}  // namespace sepgram
