#include "sepgram/densmat.hpp"

#include "sepgram/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sepgram {

int product_index(int i, int j, Dims dims) {
  if (i < 0 || i >= dims.m || j < 0 || j >= dims.n) {
    throw Error(ErrorCode::OutOfRange,
                "product index (" + std::to_string(i) + "," + std::to_string(j) + ") outside " +
                    std::to_string(dims.m) + "x" + std::to_string(dims.n));
  }
  return i * dims.n + j;
}

std::pair<int, int> split_index(int flat, Dims dims) {
  if (flat < 0 || flat >= dims.total()) {
    throw Error(ErrorCode::OutOfRange, "flat index " + std::to_string(flat) + " out of range");
  }
  return {flat / dims.n, flat % dims.n};
}

DensityMatrix DensityMatrix::validate(const ComplexMatrix& mat, int dim_a, int dim_b, double tol,
                                      bool unnormalized) {
  if (dim_a < 2 || dim_b < dim_a) {
    throw Error(ErrorCode::UnsupportedDimension,
                "need 2 <= M <= N, got " + std::to_string(dim_a) + "x" + std::to_string(dim_b));
  }
  const Eigen::Index size = static_cast<Eigen::Index>(dim_a) * dim_b;
  if (mat.rows() != size || mat.cols() != size) {
    throw Error(ErrorCode::SizeMismatch, "matrix is " + std::to_string(mat.rows()) + "x" +
                                             std::to_string(mat.cols()) + ", expected " +
                                             std::to_string(size) + "x" + std::to_string(size));
  }
  if (!mat.allFinite()) throw Error(ErrorCode::NotHermitian, "non-finite entries");

  const double scale = max_abs(mat);
  const double defect = hermitian_defect(mat);
  if (defect > tol * scale) throw Error(ErrorCode::NotHermitian, "max |rho - rho^H| too large", defect);

  ComplexMatrix sym = 0.5 * (mat + mat.adjoint());
  const HermitianEigen eig = hermitian_eigen(sym);
  const double top = eig.values[0];
  const double bottom = eig.values[size - 1];
  if (bottom < -tol * std::max(top, 0.0)) {
    throw Error(ErrorCode::NotPSD, "negative eigenvalue", bottom);
  }
  if (!unnormalized) {
    const double tr = sym.trace().real();
    if (std::abs(tr - 1.0) > tol) throw Error(ErrorCode::TraceDeviation, "trace is not 1", tr);
  }
  return DensityMatrix(std::move(sym), Dims{dim_a, dim_b}, tol, unnormalized);
}

ComplexMatrix partial_transpose(const ComplexMatrix& mat, Dims dims, Subsystem which) {
  const int m = dims.m;
  const int n = dims.n;
  ComplexMatrix out(mat.rows(), mat.cols());
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < m; ++k) {
        for (int l = 0; l < n; ++l) {
          const cplx value = mat(i * n + j, k * n + l);
          if (which == Subsystem::A) {
            out(k * n + j, i * n + l) = value;
          } else {
            out(i * n + l, k * n + j) = value;
          }
        }
      }
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const DensityMatrix& rho, Subsystem which) {
  return partial_transpose(rho.mat(), rho.dims(), which);
}

RankReport numeric_rank(const ComplexMatrix& h, double rel_tol) {
  const double scale = max_abs(h);
  if (hermitian_defect(h) > 1e-9 * std::max(scale, 1e-300) && scale > 0.0) {
    throw Error(ErrorCode::NotHermitian, "rank needs a Hermitian matrix", hermitian_defect(h));
  }
  RankReport out;
  out.eigenvalues = hermitian_eigen(h).values;
  double top = 0.0;
  for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i) top = std::max(top, std::abs(out.eigenvalues[i]));
  out.threshold = rel_tol * top;
  for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i) {
    if (std::abs(out.eigenvalues[i]) > out.threshold) ++out.rank;
  }
  return out;
}

PptReport is_ppt(const DensityMatrix& rho, double tol) {
  const HermitianEigen eig = hermitian_eigen(partial_transpose(rho, Subsystem::A));
  PptReport out;
  out.max_eigenvalue = eig.values[0];
  out.min_eigenvalue = eig.values[eig.values.size() - 1];
  out.ppt = out.min_eigenvalue >= -tol * std::max(out.max_eigenvalue, 0.0);
  return out;
}

ComplexMatrix reduce_to_a(const ComplexMatrix& mat, Dims dims) {
  ComplexMatrix out = ComplexMatrix::Zero(dims.m, dims.m);
  for (int i = 0; i < dims.m; ++i) {
    for (int k = 0; k < dims.m; ++k) {
      out(i, k) = mat.block(i * dims.n, k * dims.n, dims.n, dims.n).trace();
    }
  }
  return out;
}

ComplexMatrix reduce_to_b(const ComplexMatrix& mat, Dims dims) {
  ComplexMatrix out = ComplexMatrix::Zero(dims.n, dims.n);
  for (int i = 0; i < dims.m; ++i) out += mat.block(i * dims.n, i * dims.n, dims.n, dims.n);
  return out;
}

}  // namespace sepgram
