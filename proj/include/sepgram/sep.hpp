#pragma once

// Separable decompositions, diagonal Gram certificates w_{ij} = D_i v_j, and
// families of commuting normal matrices M_{mk} with M_{mk} w_{kn} = w_{mn}.

#include "sepgram/gram.hpp"

#include <optional>
#include <vector>

namespace sepgram {

// rho = sum_k |phi_k (x) psi_k><phi_k (x) psi_k|, columns unnormalized.
struct SeparableDecomposition {
  Dims dims;
  ComplexMatrix phi;  // M x K
  ComplexMatrix psi;  // N x K

  int size() const { return static_cast<int>(phi.cols()); }
  ComplexMatrix density() const;
  // Drops terms whose norm is below `rel_tol` times the largest.
  SeparableDecomposition without_null_terms(double rel_tol = 1e-12) const;
};

// (D_m)_{ll} = <phi_l|e_m>, (v_n)_l = <psi_l|f_n>. When `a_basis` is present
// the e_m are its columns, otherwise the standard basis.
struct DiagonalGramCertificate {
  Dims dims;
  ComplexMatrix d;  // K x M, column m is the diagonal of D_m
  ComplexMatrix v;  // K x N, column n is v_n
  std::optional<ComplexMatrix> a_basis;

  int k() const { return static_cast<int>(d.rows()); }
  GramSystem gram() const;
  // The state the certificate describes, in the standard basis.
  ComplexMatrix density() const;
};

inline constexpr double kZeroDiagonalTol = 1e-12;

// ZeroDiagonal if some phi_l has a vanishing component in the chosen basis.
DiagonalGramCertificate decomposition_to_certificate(const SeparableDecomposition& sd,
                                                     const std::optional<ComplexMatrix>& a_basis = std::nullopt);

// Same, but rotates the A basis by small deterministic Givens rotations until
// every diagonal entry is nonzero. Null terms are dropped first.
DiagonalGramCertificate certificate_with_nonsingular_d(const SeparableDecomposition& sd);

// phi_l = sum_m conj((D_m)_ll) e_m, psi_l = sum_n conj((v_n)_l) f_n. When
// `rho` is given the reconstruction must match it within `tol`.
SeparableDecomposition certificate_to_decomposition(const DiagonalGramCertificate& c,
                                                    const ComplexMatrix* rho = nullptr, double tol = 1e-9);

struct CertificateCheck {
  double residual = 0.0;
  bool pass = false;
};

CertificateCheck verify_certificate(const DiagonalGramCertificate& c, const ComplexMatrix& rho, double tol = 1e-9);

// Conjugating the frame certifies rho^{T_B}; conjugating the diagonals
// certifies rho^{T_A}.
DiagonalGramCertificate conjugate_frame(const DiagonalGramCertificate& c);
DiagonalGramCertificate conjugate_diagonals(const DiagonalGramCertificate& c);

struct FfcnmEntry {
  int from = 0;
  int to = 0;
  ComplexMatrix mat;  // maps w_{from,n} to w_{to,n}
};

struct FfcnmFamily {
  int dim_a = 0;
  int k = 0;
  std::vector<FfcnmEntry> entries;
};

struct FfcnmReport {
  double normality = 0.0;
  double commutation = 0.0;
  double relation = 0.0;
  bool pass = false;
};

// M_{mk} = U D_m D_k^{-1} U^H for every k < m. SingularD if a D_k is singular.
FfcnmFamily build_ffcnm(const DiagonalGramCertificate& c, const ComplexMatrix& u);

// The Gram system the family built from (c, u) relates: w'' = U D_i v_j.
GramSystem ffcnm_gram(const DiagonalGramCertificate& c, const ComplexMatrix& u);

// Normality, mutual commutation (both relative Frobenius) and the worst
// absolute relation residual ||M w_from - w_to||.
FfcnmReport verify_ffcnm(const FfcnmFamily& f, const GramSystem& g, double tol = 1e-8);

// Residual of a single relation M w_{from,n} = w_{to,n} over all n.
double pair_relation_residual(const ComplexMatrix& mat, const GramSystem& g, int from, int to);

struct JointDiagonalization {
  ComplexMatrix u;          // unitary, u^H A u nearly diagonal for every A
  double off_ratio = 0.0;   // off-diagonal mass / total mass
  int sweeps = 0;
};

// Jacobi sweeps on the Hermitian parts of the inputs. Throws
// JointDiagonalizationFailed when the family is not jointly diagonalizable.
JointDiagonalization joint_diagonalize(const std::vector<ComplexMatrix>& mats, double fail_ratio = 1e-6);

// Joint diagonalization of the family followed by read-off relative to a
// reference A index r that has entries r -> m for every other m:
// v_n = U^H w_{rn}, D_r = I, D_m = diag(U^H M_{rm} U).
DiagonalGramCertificate extract_certificate(const FfcnmFamily& f, const GramSystem& g, double tol = 1e-8);

}  // namespace sepgram
