// Joint diagonalization of commuting normal matrices: each matrix is split
// into its Hermitian and anti-Hermitian parts, and complex Jacobi rotations
// (Cardoso-Souloumiac) minimize the summed off-diagonal mass.

#include "sepgram/errors.hpp"
#include "sepgram/sep.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace sepgram {
namespace {

struct Mass {
  double on = 0.0;
  double off = 0.0;
};

Mass mass(const std::vector<ComplexMatrix>& mats) {
  Mass out;
  for (const ComplexMatrix& a : mats) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        (i == j ? out.on : out.off) += std::norm(a(i, j));
      }
    }
  }
  return out;
}

}  // namespace

JointDiagonalization joint_diagonalize(const std::vector<ComplexMatrix>& inputs, double fail_ratio) {
  JointDiagonalization out;
  if (inputs.empty()) throw Error(ErrorCode::SizeMismatch, "nothing to diagonalize");
  const Eigen::Index n = inputs.front().rows();
  for (const ComplexMatrix& a : inputs) {
    if (a.rows() != n || a.cols() != n) throw Error(ErrorCode::SizeMismatch, "joint diagonalization needs equal square matrices");
  }

  std::vector<ComplexMatrix> parts;
  for (const ComplexMatrix& a : inputs) {
    parts.push_back(0.5 * (a + a.adjoint()));
    parts.push_back(cplx(0.0, -0.5) * (a - a.adjoint()));
  }

  // Warm start from a fixed generic real combination of the parts.
  ComplexMatrix mix = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < parts.size(); ++i) mix += (1.0 + 0.6180339887 * static_cast<double>(i) + 0.1 * std::sqrt(static_cast<double>(i) + 2.0)) * parts[i];
  ComplexMatrix v = hermitian_eigen(mix).vectors;
  for (ComplexMatrix& a : parts) a = v.adjoint() * a * v;

  constexpr double kSkip = 1e-15;
  int sweeps = 0;
  for (; sweeps < 200; ++sweeps) {
    const Mass m = mass(parts);
    if (std::sqrt(m.off) <= 1e-10 * std::sqrt(m.on)) break;
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
        for (const ComplexMatrix& a : parts) {
          const Eigen::Vector3cd h(a(p, p) - a(q, q), a(p, q) + a(q, p), cplx(0.0, 1.0) * (a(q, p) - a(p, q)));
          g += (h * h.adjoint()).real();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g);
        Eigen::Vector3d angles = es.eigenvectors().col(2);
        if (angles[0] < 0.0) angles = -angles;
        const double c = std::sqrt(0.5 + 0.5 * angles[0]);
        const cplx s = 0.5 * cplx(angles[1], -angles[2]) / c;
        if (std::abs(s) <= kSkip) continue;
        rotated = true;
        const cplx sc = std::conj(s);
        for (ComplexMatrix& a : parts) {
          const ComplexVector colp = a.col(p);
          const ComplexVector colq = a.col(q);
          a.col(p) = c * colp + s * colq;
          a.col(q) = c * colq - sc * colp;
          const Eigen::RowVectorXcd rowp = a.row(p);
          const Eigen::RowVectorXcd rowq = a.row(q);
          a.row(p) = c * rowp + sc * rowq;
          a.row(q) = c * rowq - s * rowp;
        }
        const ComplexVector vp = v.col(p);
        v.col(p) = c * vp + s * v.col(q);
        v.col(q) = c * v.col(q) - sc * vp;
      }
    }
    if (!rotated) break;
  }

  const Mass m = mass(parts);
  out.u = v;
  out.sweeps = sweeps;
  out.off_ratio = (m.on + m.off) > 0.0 ? std::sqrt(m.off / (m.on + m.off)) : 0.0;
  if (out.off_ratio > fail_ratio) {
    throw Error(ErrorCode::JointDiagonalizationFailed, "matrices are not jointly diagonalizable", out.off_ratio);
  }
  return out;
}

}  // namespace sepgram
