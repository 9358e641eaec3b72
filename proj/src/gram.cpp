#include "sepgram/gram.hpp"

#include "sepgram/errors.hpp"
#include "sepgram/kernels.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace sepgram {

GramSystem::GramSystem(Dims dims, ComplexMatrix vecs) : dims_(dims), vecs_(std::move(vecs)) {
  if (vecs_.cols() != dims_.total()) {
    throw Error(ErrorCode::SizeMismatch, "Gram system needs one vector per product index");
  }
}

ComplexMatrix GramSystem::gram_matrix() const {
  const Eigen::Index count = vecs_.cols();
  ComplexMatrix out(count, count);
  if (count == 0) return out;
  if (vecs_.rows() == 0) return ComplexMatrix::Zero(count, count);
  kernels::active().gram(vecs_.data(), static_cast<std::size_t>(vecs_.rows()),
                         static_cast<std::size_t>(count), out.data());
  return out;
}

double GramSystem::residual(const ComplexMatrix& rho) const {
  const ComplexMatrix g = gram_matrix();
  if (g.rows() != rho.rows() || g.cols() != rho.cols()) {
    throw Error(ErrorCode::SizeMismatch, "Gram system and state differ in size");
  }
  return kernels::active().max_abs_diff(g.data(), rho.data(), static_cast<std::size_t>(g.size()));
}

Decomposition spectral_decomposition(const DensityMatrix& rho, double rel_tol) {
  const HermitianEigen eig = canonical_hermitian_eigen(rho.mat());
  const double top = std::max(eig.values[0], 0.0);
  int rank = 0;
  while (rank < eig.values.size() && eig.values[rank] > rel_tol * top) ++rank;
  Decomposition d;
  d.dims = rho.dims();
  d.vectors.resize(rho.mat().rows(), rank);
  for (int l = 0; l < rank; ++l) d.vectors.col(l) = std::sqrt(eig.values[l]) * eig.vectors.col(l);
  return d;
}

GramSystem spectral_gram(const DensityMatrix& rho, double rel_tol) {
  return gram_from_decomposition(spectral_decomposition(rho, rel_tol));
}

GramSystem gram_from_decomposition(const Decomposition& d, const std::optional<LocalBasis>& basis,
                                   const ComplexMatrix* rho, double tol) {
  const int size = d.dims.total();
  if (d.vectors.rows() != size) throw Error(ErrorCode::SizeMismatch, "decomposition vectors have wrong length");
  if (rho != nullptr) {
    const double scale = std::max(1.0, max_abs(*rho));
    const double res = max_abs(d.density() - *rho);
    if (res > tol * scale) throw Error(ErrorCode::DecompositionMismatch, "decomposition does not sum to rho", res);
  }
  if (!basis) return GramSystem(d.dims, d.vectors.adjoint());
  const ComplexMatrix frame = kron(basis->a, basis->b);
  if (frame.rows() != size || frame.cols() != size) {
    throw Error(ErrorCode::SizeMismatch, "local basis does not match the state dimensions");
  }
  return GramSystem(d.dims, d.vectors.adjoint() * frame);
}

GramSystem embed_gram(const GramSystem& g, const ComplexMatrix& v, double tol) {
  if (v.cols() != g.k() || v.rows() < v.cols()) {
    throw Error(ErrorCode::SizeMismatch, "embedding must be K' x K with K' >= K");
  }
  const double defect = max_abs(v.adjoint() * v - ComplexMatrix::Identity(v.cols(), v.cols()));
  if (defect > tol) throw Error(ErrorCode::NotIsometry, "V^H V differs from identity", defect);
  return GramSystem(g.dims(), v * g.vectors());
}

Connection connect_gram(const GramSystem& g1, const GramSystem& g2, double tol) {
  if (g1.k() != g2.k() || g1.dims() != g2.dims()) {
    throw Error(ErrorCode::SizeMismatch, "Gram systems differ in shape");
  }
  const ComplexMatrix gram1 = g1.gram_matrix();
  const ComplexMatrix gram2 = g2.gram_matrix();
  const double scale = std::max(1.0, max_abs(gram1));
  const double mismatch = max_abs(gram1 - gram2);
  if (mismatch > tol * scale) throw Error(ErrorCode::GramMismatch, "Gram matrices differ", mismatch);

  // Polar factor of X2 X1^H agrees with the partial isometry X1 -> X2 on the
  // span of X1 and completes it to a unitary.
  const ComplexMatrix cross = g2.vectors() * g1.vectors().adjoint();
  Eigen::JacobiSVD<ComplexMatrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Connection out;
  out.u = svd.matrixU() * svd.matrixV().adjoint();
  const ComplexMatrix diff = out.u * g1.vectors() - g2.vectors();
  out.residual = 0.0;
  for (Eigen::Index c = 0; c < diff.cols(); ++c) out.residual = std::max(out.residual, diff.col(c).norm());
  return out;
}

GramSystem FactorMapSystem::gram() const {
  ComplexMatrix vecs(k(), dims.total());
  for (int m = 0; m < dims.m; ++m) {
    for (int n = 0; n < dims.n; ++n) vecs.col(m * dims.n + n) = maps[m] * base.col(n);
  }
  return GramSystem(dims, vecs);
}

double FactorMapSystem::residual(const GramSystem& g) const {
  double worst = 0.0;
  for (int m = 0; m < dims.m; ++m) {
    for (int n = 0; n < dims.n; ++n) worst = std::max(worst, (maps[m] * base.col(n) - g.w(m, n)).norm());
  }
  return worst;
}

FactorMapSystem factor_maps(const GramSystem& g, const std::optional<ComplexMatrix>& base) {
  const Dims dims = g.dims();
  FactorMapSystem out;
  out.dims = dims;
  if (base) {
    if (base->rows() != g.k() || base->cols() != dims.n) {
      throw Error(ErrorCode::SizeMismatch, "base must be K x N");
    }
    out.base = *base;
  } else {
    out.base = g.vectors().leftCols(dims.n);
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(out.base, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  const double smallest = out.base.cols() > out.base.rows() ? 0.0 : sv[sv.size() - 1];
  if (sv.size() == 0 || smallest <= 1e-9 * sv[0]) {
    throw Error(ErrorCode::DependentBase, "base vectors are linearly dependent", smallest);
  }
  // pinv(V) = W S^-1 U^H; F_m = [w_m0 .. w_mN-1] pinv(V).
  const ComplexMatrix pinv =
      svd.matrixV() * sv.cwiseInverse().cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
  for (int m = 0; m < dims.m; ++m) {
    out.maps.push_back(g.vectors().middleCols(m * dims.n, dims.n) * pinv);
  }
  return out;
}

Relation relate_decompositions(const FactorMapSystem& f1, const FactorMapSystem& f2, double tol) {
  const int r = f1.k();
  const int k = f2.k();
  if (f1.dims != f2.dims) throw Error(ErrorCode::SizeMismatch, "factor systems differ in dimensions");
  if (k < r) throw Error(ErrorCode::SizeMismatch, "second system must have K >= r");

  // Embed the r-term system into C^K and connect it to the K-term one.
  ComplexMatrix pad = ComplexMatrix::Zero(k, r);
  pad.topRows(r).setIdentity();
  const GramSystem g1 = f1.gram();
  const GramSystem g2 = f2.gram();
  const Connection link = connect_gram(embed_gram(g1, pad), g2, tol);

  Relation out;
  out.v = link.u * pad;
  // V~ sends v_n to v'_n and acts as V off the span of the base.
  const ComplexMatrix base_pinv =
      f1.base.completeOrthogonalDecomposition().pseudoInverse();
  const ComplexMatrix off_span = ComplexMatrix::Identity(r, r) - f1.base * base_pinv;
  out.v_tilde = f2.base * base_pinv + out.v * off_span;

  double worst = 0.0;
  double scale = 1.0;
  for (int m = 0; m < f1.dims.m; ++m) {
    const ComplexMatrix lhs = out.v.adjoint() * f2.maps[m] * out.v_tilde;
    for (int n = 0; n < f1.dims.n; ++n) {
      worst = std::max(worst, ((lhs - f1.maps[m]) * f1.base.col(n)).norm());
      scale = std::max(scale, (f1.maps[m] * f1.base.col(n)).norm());
    }
  }
  out.residual = worst;
  if (worst > tol * scale) throw Error(ErrorCode::NoSolution, "factor systems are inconsistent", worst);
  return out;
}

}  // namespace sepgram
