#pragma once

// Product vectors |e, f> in the range of a 2 x N state rho whose partner
// |e*, f> lies in the range of rho^{T_A}. With |e> = |0> + alpha|1> the
// conditions are linear in f with coefficients polynomial in alpha (kernel of
// rho) and in conj(alpha) (kernel of rho^{T_A}).

#include "sepgram/densmat.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sepgram {

struct ProductVectorHit {
  cplx alpha;               // |e> proportional to |0> + alpha|1>
  bool at_infinity = false; // |e> = |1>
  ComplexVector e;          // unit
  ComplexVector f;          // unit
  double residual_range = 0.0;     // max |<Psi_i|e, f>| over the kernel of rho
  double residual_pt_range = 0.0;  // max |<Phi_i|e*, f>| over the kernel of rho^{T_A}

  ComplexVector product() const;  // |e> (x) |f>
};

struct ProductVectorSearch {
  int rank = 0;
  int rank_pt = 0;
  int kernel = 0;     // k = 2N - rank
  int kernel_pt = 0;  // k' = 2N - rank_pt
  bool complete = false;  // hits are provably all isolated solutions
  int candidates = 0;
  std::string method;
  std::vector<ProductVectorHit> hits;
};

struct ProductVectorOptions {
  double rank_tol = kDefaultTol;
  double verify_tol = 1e-8;
};

// Throws DegenerateSystem when the solutions form a continuum.
ProductVectorSearch find_product_vectors(const DensityMatrix& rho, const ProductVectorOptions& options = {});

struct Root57 {
  cplx alpha;
  bool at_infinity = false;
  bool verified = false;
  ProductVectorHit hit;
};

struct Determinant57 {
  std::vector<Root57> candidates;  // distinct self-consistent roots
  int verified = 0;
};

// Solves W3(alpha) + conj(alpha) V3(alpha) = 0 for 2 x 4 ranks (5,7) by
// seeded Newton iteration on both affine charts. NoneFound if no root
// verifies; RankMismatch if the kernel dimensions are not (3, 1).
Determinant57 determinant_equation_57(const DensityMatrix& rho, const ProductVectorOptions& options = {});

struct SubtractionResult {
  DensityMatrix rho_prime;
  double lambda = 0.0;
  int rank_drop = 0;
};

// rho' = rho - lambda |e,f><e,f| with the critical lambda = 1/<e,f|rho^+|e,f>.
// NotInRange if |e,f> is not in the range of rho.
SubtractionResult subtract_product_projector(const DensityMatrix& rho, const ProductVectorHit& hit, double tol = 1e-8);

enum class EdgeVerdict { Edge, NotEdge };

struct EdgeReport {
  EdgeVerdict verdict = EdgeVerdict::Edge;
  std::optional<ProductVectorHit> witness;
  ProductVectorSearch search;
};

// NotPPT for NPT input; UnsupportedRankPattern when no product vector was
// found but the search is not complete for this rank pattern.
EdgeReport edge_state_test(const DensityMatrix& rho, const ProductVectorOptions& options = {});

// Critical weights of a product vector for rho and for rho^{T_A}.
struct CriticalWeights {
  double range = 0.0;     // 1/<e,f|rho^+|e,f>
  double pt_range = 0.0;  // 1/<e*,f|(rho^{T_A})^+|e*,f>
};
CriticalWeights critical_weights(const DensityMatrix& rho, const ComplexVector& e, const ComplexVector& f);

// Bisection along the path e(t), f(t) interpolating two product vectors for a
// point where both critical weights agree. NoSolution if the difference does
// not change sign between the endpoints.
struct BalancedPoint {
  double t = 0.0;
  ComplexVector e;
  ComplexVector f;
  double lambda = 0.0;
};
BalancedPoint balanced_product_vector(const DensityMatrix& rho, const ComplexVector& e0, const ComplexVector& f0,
                                      const ComplexVector& e1, const ComplexVector& f1);

}  // namespace sepgram
