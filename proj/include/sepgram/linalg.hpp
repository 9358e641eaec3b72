#pragma once

// Dense complex linear algebra shared by every module. Matrices are Eigen
// column-major containers; the JSON layer is responsible for row-major I/O.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sepgram {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

// Hermitian eigendecomposition with eigenvalues sorted in descending order.
struct HermitianEigen {
  RealVector values;
  ComplexMatrix vectors;  // columns, matching `values`
};

HermitianEigen hermitian_eigen(const ComplexMatrix& h);

// Canonical basis for the eigenvectors: clusters of eigenvalues closer than
// `cluster_tol * max|lambda|` are re-spanned by Gram-Schmidt on the projected
// standard basis vectors (taken in index order), and every vector gets its
// largest-magnitude component real positive.
HermitianEigen canonical_hermitian_eigen(const ComplexMatrix& h, double cluster_tol = 1e-10);

// Rotate `v` so that its largest-magnitude component (first one on ties) is
// real and positive.
void fix_phase(Eigen::Ref<ComplexVector> v);

double max_abs(const ComplexMatrix& m);
double hermitian_defect(const ComplexMatrix& m);  // max |m - m^H| entry

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

// ||[m, m^H]||_F / ||m||_F^2, zero for the zero matrix.
double normality_residual(const ComplexMatrix& m);

// ||[a, b]||_F / (||a||_F ||b||_F), zero if either factor vanishes.
double commutation_residual(const ComplexMatrix& a, const ComplexMatrix& b);

// Orthonormal basis of the eigenvectors of a Hermitian matrix whose
// eigenvalues are at most `rel_tol * max|lambda|` (the numerical kernel).
ComplexMatrix hermitian_kernel(const ComplexMatrix& h, double rel_tol);

// Moore-Penrose inverse restricted to eigenvalues above `rel_tol * max|lambda|`.
ComplexMatrix hermitian_pinv(const ComplexMatrix& h, double rel_tol);

// Haar-distributed unitary from a complex Gaussian sample (QR with phase fix).
ComplexMatrix unitary_from_gaussian(const ComplexMatrix& g);

// exp(i h) for Hermitian h.
ComplexMatrix expi_hermitian(const ComplexMatrix& h);

// Kronecker product.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Smallest right singular vector (unit norm) and the smallest singular value.
struct NullDirection {
  ComplexVector vector;
  double singular_value = 0.0;
  double largest_singular_value = 0.0;
};
NullDirection smallest_right_singular(const ComplexMatrix& m);

}  // namespace sepgram
