#pragma once

// Density matrices on C^M (x) C^N. Product basis vectors |e_i> (x) |f_j> are
// flattened as i * N + j, so the matrix splits into M x M blocks of size N.

#include "sepgram/linalg.hpp"

#include <cstddef>
#include <utility>

namespace sepgram {

inline constexpr double kDefaultTol = 1e-9;

struct Dims {
  int m = 0;  // subsystem A
  int n = 0;  // subsystem B
  int total() const { return m * n; }
  bool operator==(const Dims&) const = default;
};

// i * n + j, with range checks against (m, n).
int product_index(int i, int j, Dims dims);
std::pair<int, int> split_index(int flat, Dims dims);

class DensityMatrix {
 public:
  // Checks shape, Hermiticity, positivity and (unless `unnormalized`) unit
  // trace, all relative to `tol`. Throws Error naming the first violation.
  static DensityMatrix validate(const ComplexMatrix& mat, int dim_a, int dim_b,
                                double tol = kDefaultTol, bool unnormalized = false);

  Dims dims() const { return dims_; }
  int dim_a() const { return dims_.m; }
  int dim_b() const { return dims_.n; }
  const ComplexMatrix& mat() const { return mat_; }
  double tol() const { return tol_; }
  bool unnormalized() const { return unnormalized_; }
  double trace() const { return mat_.trace().real(); }

 private:
  DensityMatrix(ComplexMatrix mat, Dims dims, double tol, bool unnormalized)
      : mat_(std::move(mat)), dims_(dims), tol_(tol), unnormalized_(unnormalized) {}

  ComplexMatrix mat_;
  Dims dims_;
  double tol_;
  bool unnormalized_;
};

enum class Subsystem { A, B };

// T_A: rho_{ij,mn} -> rho_{mj,in};  T_B: rho_{ij,mn} -> rho_{in,mj}.
ComplexMatrix partial_transpose(const ComplexMatrix& mat, Dims dims, Subsystem which);
ComplexMatrix partial_transpose(const DensityMatrix& rho, Subsystem which);

struct RankReport {
  int rank = 0;
  RealVector eigenvalues;  // descending
  double threshold = 0.0;
};

// Counts nonvanishing eigenvalues: |lambda| above rel_tol * max|lambda|.
RankReport numeric_rank(const ComplexMatrix& h, double rel_tol = kDefaultTol);

struct PptReport {
  bool ppt = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

PptReport is_ppt(const DensityMatrix& rho, double tol = kDefaultTol);

// Reduced states.
ComplexMatrix reduce_to_a(const ComplexMatrix& mat, Dims dims);
ComplexMatrix reduce_to_b(const ComplexMatrix& mat, Dims dims);

}  // namespace sepgram
