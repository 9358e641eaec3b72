#include "sepgram/twoxn.hpp"

#include "sepgram/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sepgram {

ComplexMatrix CanonicalForm2xN::rho() const {
  ComplexMatrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = a;
  out.topRightCorner(n, n) = b;
  out.bottomLeftCorner(n, n) = b.adjoint();
  out.bottomRightCorner(n, n).setIdentity();
  return out;
}

ComplexMatrix factor_psd(const ComplexMatrix& h, double rel_tol, double scale) {
  if (h.rows() != h.cols()) throw Error(ErrorCode::SizeMismatch, "factor_psd needs a square matrix");
  const Eigen::Index n = h.rows();
  if (n == 0) return ComplexMatrix(0, 0);
  const HermitianEigen eig = canonical_hermitian_eigen(0.5 * (h + h.adjoint()));
  if (scale < 0.0) scale = std::max(std::abs(eig.values[0]), std::abs(eig.values[n - 1]));
  const double floor = rel_tol * scale;
  if (eig.values[n - 1] < -floor) throw Error(ErrorCode::NotPSD, "matrix has a negative eigenvalue", eig.values[n - 1]);
  Eigen::Index width = 0;
  while (width < n && eig.values[width] > floor) ++width;
  ComplexMatrix f(n, width);
  for (Eigen::Index c = 0; c < width; ++c) f.col(c) = std::sqrt(eig.values[c]) * eig.vectors.col(c);
  return f;
}

CanonicalForm2xN canonical_form(const ComplexMatrix& rho, int n, double rel_tol) {
  if (rho.rows() != 2 * n || rho.cols() != 2 * n) throw Error(ErrorCode::SizeMismatch, "canonical form needs a 2N x 2N state");
  const ComplexMatrix c = rho.bottomRightCorner(n, n);
  const HermitianEigen eig = hermitian_eigen(c);
  const double top = eig.values[0];
  const double bottom = eig.values[n - 1];
  if (!(top > 0.0) || bottom <= 1e-12 * top) {
    throw Error(ErrorCode::SingularC, "lower-right block is singular", bottom);
  }
  RealVector inv_sqrt(n), sqrt_vals(n);
  for (int i = 0; i < n; ++i) {
    sqrt_vals[i] = std::sqrt(eig.values[i]);
    inv_sqrt[i] = 1.0 / sqrt_vals[i];
  }
  CanonicalForm2xN cf;
  cf.n = n;
  cf.t = eig.vectors * inv_sqrt.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
  cf.t_inv = eig.vectors * sqrt_vals.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
  cf.a = cf.t * rho.topLeftCorner(n, n) * cf.t;
  cf.a = 0.5 * (cf.a + cf.a.adjoint());
  cf.b = cf.t * rho.topRightCorner(n, n) * cf.t;
  cf.scale = std::max(max_abs(cf.a), 1e-300);

  cf.lam = factor_psd(cf.a - cf.b * cf.b.adjoint(), rel_tol, cf.scale);
  cf.p = static_cast<int>(cf.lam.cols());

  const ComplexMatrix pt_block = cf.a - cf.b.adjoint() * cf.b;
  const RealVector pt_eigs = hermitian_eigen(pt_block).values;
  cf.min_eig_ppt_block = pt_eigs[n - 1];
  cf.ppt = cf.min_eig_ppt_block >= -rel_tol * cf.scale;
  if (cf.ppt) {
    cf.lam_tilde = factor_psd(pt_block, rel_tol, cf.scale).adjoint();
    cf.p_tilde = static_cast<int>(cf.lam_tilde.rows());
  } else {
    cf.lam_tilde.resize(0, n);
  }
  return cf;
}

CanonicalForm2xN canonical_form(const DensityMatrix& rho, double rel_tol) {
  if (rho.dim_a() != 2) throw Error(ErrorCode::UnsupportedDimension, "canonical form is defined for 2 x N");
  return canonical_form(rho.mat(), rho.dim_b(), rel_tol);
}

KnownPart known_part(const CanonicalForm2xN& cf) {
  if (!cf.ppt) throw Error(ErrorCode::NotPPT, "A - B^H B is not positive semidefinite", cf.min_eig_ppt_block);
  KnownPart kp;
  kp.n = cf.n;
  kp.p = cf.p;
  kp.p_tilde = cf.p_tilde;
  const int rows = cf.n + cf.p_tilde;
  const int cols = cf.n + cf.p;
  kp.mhat = ComplexMatrix::Zero(rows, cols);
  kp.mhat.topLeftCorner(cf.n, cf.n) = cf.b;
  kp.mhat.topRightCorner(cf.n, cf.p) = cf.lam;
  kp.mhat.bottomLeftCorner(cf.p_tilde, cf.n) = cf.lam_tilde;
  kp.classes.resize(rows, cols);
  kp.classes.setConstant(EntryClass::Fixed);
  kp.classes.bottomLeftCorner(cf.p_tilde, cf.n).setConstant(EntryClass::UnitaryOrbit);
  kp.classes.bottomRightCorner(cf.p_tilde, cf.p).setConstant(EntryClass::Free);
  return kp;
}

RankNResult rank_n_test(const CanonicalForm2xN& cf, double tol) {
  if (cf.p != 0) throw Error(ErrorCode::RankMismatch, "rank of rho exceeds N", cf.p);
  RankNResult r;
  r.residual = normality_residual(cf.b);
  r.separable = r.residual <= tol;
  return r;
}

ExtensionProblem ExtensionProblem::from(const CanonicalForm2xN& cf) {
  if (!cf.ppt) throw Error(ErrorCode::NotPPT, "extension problems need a PPT state", cf.min_eig_ppt_block);
  ExtensionProblem ep;
  ep.b = cf.b;
  ep.lam = cf.lam;
  ep.lam_tilde0 = cf.lam_tilde;
  ep.p = cf.p;
  ep.p_tilde = cf.p_tilde;
  return ep;
}

ComplexMatrix ExtensionSolution::mhat() const {
  const Eigen::Index n = b.rows();
  const Eigen::Index q = s.rows();
  ComplexMatrix m(n + q, n + q);
  m.topLeftCorner(n, n) = b;
  m.topRightCorner(n, q) = lam;
  m.bottomLeftCorner(q, n) = lam_tilde;
  m.bottomRightCorner(q, q) = s;
  return m;
}

std::string_view to_string(ExtensionStatus status) {
  switch (status) {
    case ExtensionStatus::Solved: return "solved";
    case ExtensionStatus::NoSolution: return "no_solution";
    case ExtensionStatus::Undecided: return "undecided";
  }
  return "unknown";
}

ExtensionResult self_pt_extension(const CanonicalForm2xN& cf, double tol) {
  const double defect = max_abs(cf.b - cf.b.adjoint());
  if (defect > tol * cf.scale) throw Error(ErrorCode::NotSelfPT, "rho differs from its partial transpose", defect);
  ExtensionResult r;
  ExtensionSolution& sol = r.solution;
  sol.b = 0.5 * (cf.b + cf.b.adjoint());
  sol.lam = cf.lam;
  sol.lam_tilde = cf.lam.adjoint();
  sol.s = ComplexMatrix::Zero(cf.p, cf.p);
  sol.mixing = ComplexMatrix::Identity(cf.p, cf.p);
  sol.residual = normality_residual(sol.mhat());
  r.residual = sol.residual;
  r.status = sol.residual <= 1e-10 ? ExtensionStatus::Solved : ExtensionStatus::Undecided;
  r.method = "self_pt";
  return r;
}

SeparableDecomposition decomposition_from_extension(const ExtensionSolution& sol) {
  const ComplexMatrix m = sol.mhat();
  const int n = static_cast<int>(sol.b.rows());
  const int k = static_cast<int>(m.rows());
  const Dims dims{2, n};

  // w_{1n} = e_n and w_{0n} = Mhat^H e_n reproduce [[A, B], [B^H, I]].
  ComplexMatrix vecs(k, 2 * n);
  vecs.leftCols(n) = m.adjoint().leftCols(n);
  vecs.rightCols(n) = ComplexMatrix::Identity(k, n);
  const GramSystem g(dims, vecs);

  FfcnmFamily family;
  family.dim_a = 2;
  family.k = k;
  family.entries.push_back({1, 0, m.adjoint()});
  const DiagonalGramCertificate c = extract_certificate(family, g);
  return certificate_to_decomposition(c);
}

}  // namespace sepgram
