#pragma once

// Gram systems: vectors w_{mn} in C^K with <w_ij, w_mn> = rho_{ij,mn}. They
// come from any decomposition rho = sum_l |Phi_l><Phi_l| via
// w^l_{mn} = <Phi_l | e_m (x) f_n>, and any two systems of the same K are
// related by a unitary.

#include "sepgram/densmat.hpp"

#include <optional>
#include <vector>

namespace sepgram {

// Columns are the (unnormalized) vectors |Phi_k> in C^{MN}.
struct Decomposition {
  Dims dims;
  ComplexMatrix vectors;

  int size() const { return static_cast<int>(vectors.cols()); }
  ComplexMatrix density() const { return vectors * vectors.adjoint(); }
};

class GramSystem {
 public:
  GramSystem() = default;
  // `vecs` is K x MN; column i * N + j holds w_{ij}.
  GramSystem(Dims dims, ComplexMatrix vecs);

  Dims dims() const { return dims_; }
  int k() const { return static_cast<int>(vecs_.rows()); }
  const ComplexMatrix& vectors() const { return vecs_; }
  ComplexVector w(int i, int j) const { return vecs_.col(product_index(i, j, dims_)); }

  // MN x MN matrix of inner products; uses the dispatched Gram kernel.
  ComplexMatrix gram_matrix() const;
  // max |<w_ij, w_mn> - rho_{ij,mn}|
  double residual(const ComplexMatrix& rho) const;

 private:
  Dims dims_;
  ComplexMatrix vecs_;
};

// Optional local product basis {e_m (x) f_n}: columns of `a` and `b` (unitary).
struct LocalBasis {
  ComplexMatrix a;
  ComplexMatrix b;
};

// Spectral decomposition with Psi_l = sqrt(lambda_l) psi_l; K = numeric rank.
Decomposition spectral_decomposition(const DensityMatrix& rho, double rel_tol = kDefaultTol);
GramSystem spectral_gram(const DensityMatrix& rho, double rel_tol = kDefaultTol);

// Gram system of an explicit decomposition. When `rho` is given the
// decomposition must reproduce it within `tol` (DecompositionMismatch).
GramSystem gram_from_decomposition(const Decomposition& d,
                                   const std::optional<LocalBasis>& basis = std::nullopt,
                                   const ComplexMatrix* rho = nullptr, double tol = 1e-10);

// w' = V w for a K' x K isometry V.
GramSystem embed_gram(const GramSystem& g, const ComplexMatrix& v, double tol = 1e-10);

struct Connection {
  ComplexMatrix u;  // K x K unitary with u * w1 = w2
  double residual = 0.0;
};

// Unitary relating two Gram systems with equal Gram matrices (GramMismatch
// otherwise). U is fixed only on the span of the vectors.
Connection connect_gram(const GramSystem& g1, const GramSystem& g2, double tol = 1e-8);

// w_{mn} = F_m v_n with least-norm F_m (zero on the complement of the base).
struct FactorMapSystem {
  Dims dims;
  ComplexMatrix base;               // K x N, columns v_n
  std::vector<ComplexMatrix> maps;  // M entries, each K x K

  int k() const { return static_cast<int>(base.rows()); }
  GramSystem gram() const;
  double residual(const GramSystem& g) const;
};

// Defaults to v_n = w_{0n}. DependentBase when the base is numerically rank
// deficient.
FactorMapSystem factor_maps(const GramSystem& g, const std::optional<ComplexMatrix>& base = std::nullopt);

struct Relation {
  ComplexMatrix v;        // K x r isometry
  ComplexMatrix v_tilde;  // K x r, v_tilde * v_n = v'_n
  double residual = 0.0;  // max ||(V^H F'_m V~ - F_m) v_n||
};

// Relates the factor maps of an r-term system (f1) and a K-term system (f2)
// of the same state, K >= r. NoSolution if they are inconsistent.
Relation relate_decompositions(const FactorMapSystem& f1, const FactorMapSystem& f2, double tol = 1e-8);

}  // namespace sepgram
