#include "sepgram/linalg.hpp"

#include "sepgram/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sepgram {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::TraceDeviation: return "TraceDeviation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::LimitingCase: return "LimitingCase";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::DecompositionMismatch: return "DecompositionMismatch";
    case ErrorCode::NotIsometry: return "NotIsometry";
    case ErrorCode::GramMismatch: return "GramMismatch";
    case ErrorCode::DependentBase: return "DependentBase";
    case ErrorCode::CertificateInvalid: return "CertificateInvalid";
    case ErrorCode::NotPPT: return "NotPPT";
    case ErrorCode::NotSelfPT: return "NotSelfPT";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::NotInRange: return "NotInRange";
    case ErrorCode::UnsupportedRankPattern: return "UnsupportedRankPattern";
    case ErrorCode::EigensolverFailure: return "EigensolverFailure";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::ZeroDiagonal: return "ZeroDiagonal";
    case ErrorCode::SingularD: return "SingularD";
    case ErrorCode::SingularC: return "SingularC";
    case ErrorCode::JointDiagonalizationFailed: return "JointDiagonalizationFailed";
    case ErrorCode::DegenerateSystem: return "DegenerateSystem";
    case ErrorCode::NoneFound: return "NoneFound";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::EigensolverFailure:
    case ErrorCode::NoSolution:
    case ErrorCode::ZeroDiagonal:
    case ErrorCode::SingularD:
    case ErrorCode::SingularC:
    case ErrorCode::JointDiagonalizationFailed:
    case ErrorCode::DegenerateSystem:
    case ErrorCode::NoneFound:
      return false;
    default:
      return true;
  }
}

HermitianEigen hermitian_eigen(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) {
    throw Error(ErrorCode::SizeMismatch, "eigensolver needs a square matrix");
  }
  const Eigen::Index n = h.rows();
  HermitianEigen out;
  if (n == 0) {
    out.values.resize(0);
    out.vectors.resize(0, 0);
    return out;
  }
  // Symmetrize: the solver reads only the lower triangle.
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolverFailure, "Hermitian eigensolver did not converge");
  }
  // Eigen returns ascending order.
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

void fix_phase(Eigen::Ref<ComplexVector> v) {
  if (v.size() == 0) return;
  Eigen::Index best = 0;
  double best_mag = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    // Ties within rounding go to the earlier index.
    if (mag > best_mag * (1.0 + 1e-12) + 1e-300) {
      best_mag = mag;
      best = i;
    }
  }
  if (best_mag <= 0.0) return;
  const cplx phase = std::conj(v[best]) / best_mag;
  v *= phase;
  v[best] = cplx(best_mag, 0.0);
}

HermitianEigen canonical_hermitian_eigen(const ComplexMatrix& h, double cluster_tol) {
  HermitianEigen eig = hermitian_eigen(h);
  const Eigen::Index n = eig.values.size();
  if (n == 0) return eig;
  const double scale = std::max(std::abs(eig.values[0]), std::abs(eig.values[n - 1]));
  const double gap = cluster_tol * std::max(scale, 1e-300);

  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && eig.values[stop - 1] - eig.values[stop] <= gap) ++stop;
    const Eigen::Index width = stop - start;
    if (width > 1) {
      const ComplexMatrix basis = eig.vectors.middleCols(start, width);
      const ComplexMatrix projector = basis * basis.adjoint();
      ComplexMatrix fresh(n, width);
      Eigen::Index filled = 0;
      for (Eigen::Index j = 0; j < n && filled < width; ++j) {
        ComplexVector cand = projector.col(j);
        for (Eigen::Index k = 0; k < filled; ++k) {
          cand -= fresh.col(k) * fresh.col(k).dot(cand);
        }
        const double norm = cand.norm();
        if (norm > 1e-8) fresh.col(filled++) = cand / norm;
      }
      if (filled == width) eig.vectors.middleCols(start, width) = fresh;
    }
    start = stop;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    ComplexVector col = eig.vectors.col(j);
    fix_phase(col);
    eig.vectors.col(j) = col;
  }
  return eig;
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermitian_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(m - m.adjoint());
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

double normality_residual(const ComplexMatrix& m) {
  const double norm2 = m.squaredNorm();
  if (norm2 == 0.0) return 0.0;
  return commutator(m, m.adjoint()).norm() / norm2;
}

double commutation_residual(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double denom = a.norm() * b.norm();
  if (denom == 0.0) return 0.0;
  return commutator(a, b).norm() / denom;
}

ComplexMatrix hermitian_kernel(const ComplexMatrix& h, double rel_tol) {
  const HermitianEigen eig = hermitian_eigen(h);
  const Eigen::Index n = eig.values.size();
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(eig.values[i]));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(eig.values[i]) <= rel_tol * scale) keep.push_back(i);
  }
  ComplexMatrix out(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = eig.vectors.col(keep[k]);
  return out;
}

ComplexMatrix hermitian_pinv(const ComplexMatrix& h, double rel_tol) {
  const HermitianEigen eig = hermitian_eigen(h);
  const Eigen::Index n = eig.values.size();
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(eig.values[i]));
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(eig.values[i]) > rel_tol * scale) {
      out += eig.vectors.col(i) * (1.0 / eig.values[i]) * eig.vectors.col(i).adjoint();
    }
  }
  return out;
}

ComplexMatrix unitary_from_gaussian(const ComplexMatrix& g) {
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(g.rows(), g.cols());
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < std::min(q.cols(), r.rows()); ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

ComplexMatrix expi_hermitian(const ComplexMatrix& h) {
  const HermitianEigen eig = hermitian_eigen(h);
  const Eigen::Index n = eig.values.size();
  ComplexVector phases(n);
  for (Eigen::Index i = 0; i < n; ++i) phases[i] = std::polar(1.0, eig.values[i]);
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

NullDirection smallest_right_singular(const ComplexMatrix& m) {
  NullDirection out;
  const Eigen::Index n = m.cols();
  if (n == 0) return out;
  if (m.rows() == 0) {
    out.vector = ComplexVector::Unit(n, 0);
    return out;
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  out.largest_singular_value = sv.size() > 0 ? sv[0] : 0.0;
  // With fewer rows than columns the trailing right singular vectors span an
  // exact null space.
  out.singular_value = m.rows() < n ? 0.0 : sv[n - 1];
  out.vector = svd.matrixV().col(n - 1);
  return out;
}

}  // namespace sepgram
