#pragma once

// 2 x N states. A local map I (x) C^{-1/2} brings rho to [[A, B], [B^H, I]],
// A = B B^H + Lambda Lambda^H, and PPT reads A - B^H B = Lambda~^H Lambda~ >= 0.
// Separability with N + q terms is then equivalent to the partially known
// matrix Mhat = [[B, Lambda], [Lambda~, S]] having a normal extension.

#include "sepgram/sep.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sepgram {

struct CanonicalForm2xN {
  int n = 0;
  ComplexMatrix a;          // N x N
  ComplexMatrix b;          // N x N
  ComplexMatrix t;          // C^{-1/2}, applied as I (x) t
  ComplexMatrix t_inv;      // C^{1/2}
  ComplexMatrix lam;        // N x p, lam lam^H = A - B B^H
  ComplexMatrix lam_tilde;  // p~ x N, lam_tilde^H lam_tilde = A - B^H B (empty if not PPT)
  int p = 0;
  int p_tilde = 0;
  bool ppt = false;
  double min_eig_ppt_block = 0.0;  // smallest eigenvalue of A - B^H B
  double scale = 0.0;              // ||A||_max, the reference for relative tolerances

  ComplexMatrix rho() const;  // [[A, B], [B^H, I]]
};

// SingularC when the lower-right block is singular (min eigenvalue reported).
CanonicalForm2xN canonical_form(const DensityMatrix& rho, double rel_tol = kDefaultTol);
CanonicalForm2xN canonical_form(const ComplexMatrix& rho, int n, double rel_tol = kDefaultTol);

// F with F F^H = h and minimal width; eigenvalues below rel_tol * scale count
// as zero (scale defaults to max|lambda|). Columns follow descending
// eigenvalues with the gram phase convention. NotPSD below -rel_tol * scale.
ComplexMatrix factor_psd(const ComplexMatrix& h, double rel_tol = kDefaultTol, double scale = -1.0);

enum class EntryClass { Fixed, UnitaryOrbit, Free };

struct KnownPart {
  int n = 0;
  int p = 0;
  int p_tilde = 0;
  ComplexMatrix mhat;                                                   // free entries zero
  Eigen::Matrix<EntryClass, Eigen::Dynamic, Eigen::Dynamic> classes;  // (N + p~) x (N + p)
};

// NotPPT if the canonical form does not satisfy the PPT factorization.
KnownPart known_part(const CanonicalForm2xN& cf);

struct RankNResult {
  double residual = 0.0;  // ||[B, B^H]||_F / ||B||_F^2
  bool separable = false;
};

// Only for p = 0 (rank rho = N); RankMismatch otherwise.
RankNResult rank_n_test(const CanonicalForm2xN& cf, double tol = 1e-9);

struct ExtensionProblem {
  ComplexMatrix b;           // N x N
  ComplexMatrix lam;         // N x p
  ComplexMatrix lam_tilde0;  // p~ x N, fixed up to a left unitary
  int p = 0;
  int p_tilde = 0;

  static ExtensionProblem from(const CanonicalForm2xN& cf);
  int q() const { return std::max(p, p_tilde); }
};

// Square extension of size N + q, narrower factors padded with zeros.
struct ExtensionSolution {
  ComplexMatrix b;
  ComplexMatrix lam;        // N x q
  ComplexMatrix lam_tilde;  // q x N, realized (mixed) factor
  ComplexMatrix s;          // q x q
  ComplexMatrix mixing;     // q x q unitary with lam_tilde = mixing * lam_tilde0
  double residual = 0.0;    // normality residual of mhat()
  std::vector<double> params;

  ComplexMatrix mhat() const;
};

enum class ExtensionStatus { Solved, NoSolution, Undecided };
std::string_view to_string(ExtensionStatus status);

struct ExtensionResult {
  ExtensionStatus status = ExtensionStatus::Undecided;
  ExtensionSolution solution;
  double residual = 0.0;  // what the acceptance test compared
  std::string method;
  int starts = 0;
};

// rho = rho^{T_A}: B Hermitian, Lambda~ = Lambda^H, S = 0. NotSelfPT otherwise.
ExtensionResult self_pt_extension(const CanonicalForm2xN& cf, double tol = 1e-9);

// p = p~ = 1: (B - s)|Lambda~> = (B^H - s*)|Lambda> with the phase of Lambda~
// searched and s solved by real-linear least squares.
ExtensionResult solve_extension_55(const ExtensionProblem& ep, double tol = 1e-8);

// p = 1, p~ = 2: outer search over the mixing of the two Lambda~ rows, inner
// least squares for S, final Levenberg-Marquardt polish of full normality.
ExtensionResult solve_extension_56(const ExtensionProblem& ep, double tol = 1e-6);

struct GeneralOptions {
  int budget = 32;  // number of starts
  int jobs = 1;
  std::uint64_t seed = 1;
  double accept = 1e-10;
  int max_iterations = 200;
};

// Levenberg-Marquardt over (U in U(q), S) minimizing ||[Mhat, Mhat^H]||_F^2,
// multi-start. Reports Solved or Undecided, never NoSolution.
ExtensionResult solve_extension_general(const ExtensionProblem& ep, const GeneralOptions& options = {});

// Polishes a given starting point with the same LM iteration.
ExtensionSolution polish_extension(const ExtensionProblem& ep, const ExtensionSolution& start, int max_iterations = 200);

// Decomposition of the canonical state [[A, B], [B^H, I]] from a normal
// extension: Mhat^H maps w_{1n} = e_n to w_{0n}, diagonalize and read off.
SeparableDecomposition decomposition_from_extension(const ExtensionSolution& sol);

}  // namespace sepgram
