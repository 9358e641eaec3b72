#pragma once

// Reference data and independent oracles shared by the unit tests and the
// acceptance binary. Nothing here calls the library's decision code.

#include "sepgram/states.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace fixtures {

using sepgram::ComplexMatrix;
using sepgram::ComplexVector;
using sepgram::cplx;

inline constexpr cplx I{0.0, 1.0};

// Two-qubit Werner matrix written out entry by entry.
inline ComplexMatrix werner_literal(double p) {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = m(3, 3) = 1.0 + p;
  m(1, 1) = m(2, 2) = 1.0 - p;
  m(0, 3) = m(3, 0) = 2.0 * p;
  return m / 4.0;
}

// T_A by explicit index permutation: rho_{ij,mn} -> rho_{mj,in}.
inline ComplexMatrix partial_transpose_a(const ComplexMatrix& rho, int m, int n) {
  ComplexMatrix out(rho.rows(), rho.cols());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < n; ++l) out(i * n + j, k * n + l) = rho(k * n + j, i * n + l);
  return out;
}

inline Eigen::VectorXd eigenvalues(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();  // ascending
}

inline int rank_of(const ComplexMatrix& h, double rel = 1e-9) {
  const Eigen::VectorXd v = eigenvalues(h);
  const double top = v.cwiseAbs().maxCoeff();
  int r = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) r += std::abs(v[i]) > rel * top ? 1 : 0;
  return r;
}

// rho_{ij,mn} = <D_i v_j, D_m v_n> evaluated term by term. `d` is K x M
// (diagonals), `v` is K x N, and an optional A basis rotates the result back.
inline ComplexMatrix certificate_density(const ComplexMatrix& d, const ComplexMatrix& v,
                                         const ComplexMatrix* a_basis = nullptr) {
  const int k = static_cast<int>(d.rows());
  const int m = static_cast<int>(d.cols());
  const int n = static_cast<int>(v.cols());
  ComplexMatrix rho = ComplexMatrix::Zero(m * n, m * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < n; ++b) {
          cplx acc = 0.0;
          for (int l = 0; l < k; ++l) acc += std::conj(d(l, i) * v(l, j)) * d(l, a) * v(l, b);
          rho(i * n + j, a * n + b) = acc;
        }
  if (a_basis) {
    ComplexMatrix lift = ComplexMatrix::Zero(m * n, m * n);
    for (int i = 0; i < m; ++i)
      for (int a = 0; a < m; ++a)
        for (int j = 0; j < n; ++j) lift(i * n + j, a * n + j) = (*a_basis)(i, a);
    rho = lift * rho * lift.adjoint();
  }
  return rho;
}

// Worked Werner example: Gram vectors, the diagonal certificate, the unitary
// V and the factor maps F_m, all as closed-form functions of p.
struct WernerWorked {
  double p = 0.0;
  std::vector<ComplexVector> w;  // w_{00}, w_{01}, w_{10}, w_{11}
  ComplexMatrix d;               // 4 x 2, column m = diagonal of D_m
  ComplexMatrix v;               // 4 x 2, column n = v'_n
  ComplexMatrix big_v;           // V
  ComplexMatrix f1, f2;
};

inline WernerWorked werner_worked(double p) {
  using std::sqrt;
  WernerWorked x;
  x.p = p;
  const double a = sqrt((1.0 - p) / 8.0), c = sqrt((1.0 + 3.0 * p) / 8.0);
  ComplexVector w00(4), w01(4), w10(4), w11(4);
  w00 << 0, a, 0, c;
  w01 << a, 0, a, 0;
  w10 << -a, 0, a, 0;
  w11 << 0, -a, 0, c;
  x.w = {w00, w01, w10, w11};

  const double s13 = sqrt(1 - 3 * p), s1p = sqrt(1 + p), s1m = sqrt(1 - p), s3p = sqrt(1 + 3 * p);
  const cplx d1 = (1.0 - I) * (s13 + s1p) / (std::numbers::sqrt2 * (s1m + s3p));
  const cplx d2 = -(1.0 + I) * (s1p - s13) / (std::numbers::sqrt2 * (s1m - s3p));
  x.d.resize(4, 2);
  x.d.col(0).setOnes();
  x.d.col(1) << d1, d2, -d1, -d2;

  const cplx up = std::polar(1.0, std::numbers::pi / 2), dn = std::polar(1.0, -std::numbers::pi / 2);
  const cplx p3 = std::polar(1.0, 3 * std::numbers::pi / 4), m3 = std::polar(1.0, -3 * std::numbers::pi / 4);
  const double norm = 4.0 * std::numbers::sqrt2;
  x.v.resize(4, 2);
  x.v.col(0) << (s1m + s3p) * up, (s1m - s3p) * up, (s1m + s3p) * dn, (s1m - s3p) * dn;
  x.v.col(1) << (s1p - s13) * p3, (s13 + s1p) * m3, (s1p - s13) * p3, (s13 + s1p) * m3;
  x.v /= norm;

  const double q = sqrt(8.0) * s1m;
  const cplx xx = (-s1p + I * s13) / q, yy = (s13 - I * s1p) / q;
  x.big_v.resize(4, 4);
  x.big_v << xx, -0.5 * I, yy, -0.5 * I,
             xx, -0.5 * I, -yy, 0.5 * I,
             xx, 0.5 * I, yy, 0.5 * I,
             xx, 0.5 * I, -yy, -0.5 * I;
  x.f1 = ComplexMatrix::Identity(4, 4);
  x.f2 = ComplexMatrix::Zero(4, 4);
  x.f2(0, 1) = x.f2(1, 0) = -1.0;
  x.f2(2, 3) = sqrt((1 - p) / (1 + 3 * p));
  x.f2(3, 2) = sqrt((1 + 3 * p) / (1 - p));
  return x;
}

// 2 x 4 state with ranks (5, 7): canonical blocks A = B B^H + t^2 |l><l| with
// t^2 chosen so that A - B^H B loses exactly one rank, then a random local
// invertible map. Returns false when the draw has no positive t^2.
inline bool state_57(std::uint64_t seed, ComplexMatrix* out) {
  sepgram::Rng rng(seed);
  const ComplexMatrix b = rng.gaussian_matrix(4, 4);
  const ComplexVector l = rng.gaussian_vector(4);
  const ComplexMatrix h = b * b.adjoint() - b.adjoint() * b;
  const cplx quad = (l.adjoint() * h.fullPivLu().solve(l))(0, 0);
  const double t2 = -1.0 / quad.real();
  if (!(t2 > 0.0) || !std::isfinite(t2)) return false;
  const ComplexMatrix a = b * b.adjoint() + t2 * l * l.adjoint();
  ComplexMatrix rho(8, 8);
  rho << a, b, b.adjoint(), ComplexMatrix::Identity(4, 4);
  const ComplexMatrix g = rng.gaussian_matrix(2, 2);
  const ComplexMatrix r = rng.gaussian_matrix(4, 4);
  ComplexMatrix local(8, 8);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) local.block(4 * i, 4 * k, 4, 4) = g(i, k) * r;
  rho = local * rho * local.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  *out = rho / rho.trace().real();
  return true;
}

// Chordal distance between alpha parameters (the Riemann sphere metric).
inline double chordal(cplx a, cplx b) {
  return std::abs(a - b) / (std::sqrt(1.0 + std::norm(a)) * std::sqrt(1.0 + std::norm(b)));
}

}  // namespace fixtures
