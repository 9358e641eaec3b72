#pragma once

// Named states with known answers, seeded random generators, and the PPT
// oracle that is exact for 2x2 and 2x3.

#include "sepgram/sep.hpp"

#include <cstdint>
#include <random>

namespace sepgram {

// std::mt19937_64 stream with portable conversions: uniforms are
// (x >> 11) * 2^-53 and normals use Box-Muller, so the same seed yields the
// same numbers on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();        // [0, 1)
  double normal();         // N(0, 1)
  cplx complex_normal();   // E|z|^2 = 1, rotation invariant
  ComplexVector gaussian_vector(int n);
  ComplexMatrix gaussian_matrix(int rows, int cols);
  ComplexMatrix haar_unitary(int n);

 private:
  std::mt19937_64 engine_;
};

DensityMatrix werner(double p);

// Canonical data of the 2x4 state rho_97: B is the superdiagonal shift and
// |Lambda> = (sqrt((1-b)/2b), 0, 0, sqrt((1+b)/2b)).
struct Horodecki97 {
  double b = 0.0;
  ComplexMatrix shift;         // B, 4 x 4
  ComplexVector lambda;        // |Lambda>
  ComplexVector lambda_tilde;  // |Lambda~> = K|Lambda>
  ComplexMatrix unnormalized;  // [[B B^H + |Lambda><Lambda|, B], [B^H, I]]
  DensityMatrix rho;           // trace normalized
};

Horodecki97 horodecki97_data(double b);
DensityMatrix horodecki97(double b);

struct SeparableSample {
  DensityMatrix rho;
  SeparableDecomposition decomposition;  // sums to rho exactly (same weights)
};

// k product pairs with rotation-invariant directions and Dirichlet(1) weights.
SeparableSample random_separable(int m, int n, int k, std::uint64_t seed);

// G G^H / tr with G an mn x r complex Gaussian matrix.
DensityMatrix random_density(int m, int n, int r, std::uint64_t seed);

// PPT decides separability for 2x2 and 2x3; UnsupportedDimension elsewhere.
bool brute_force_separability(const DensityMatrix& rho, double tol = kDefaultTol);

}  // namespace sepgram
