#include "sepgram/errors.hpp"
#include "sepgram/gram.hpp"
#include "sepgram/states.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

using namespace sepgram;

namespace {

// <w_ij, w_mn> computed directly.
double gram_residual(const GramSystem& g, const ComplexMatrix& rho) {
  const Dims d = g.dims();
  double worst = 0.0;
  for (int i = 0; i < d.m; ++i)
    for (int j = 0; j < d.n; ++j)
      for (int m = 0; m < d.m; ++m)
        for (int n = 0; n < d.n; ++n)
          worst = std::max(worst, std::abs(g.w(i, j).dot(g.w(m, n)) - rho(i * d.n + j, m * d.n + n)));
  return worst;
}

}  // namespace

TEST_CASE("spectral Gram systems reproduce rho") {
  const DensityMatrix w = werner(0.2);
  const GramSystem g = spectral_gram(w);
  CHECK(g.k() == 4);
  CHECK(gram_residual(g, w.mat()) < 1e-12);
  CHECK(g.residual(w.mat()) < 1e-12);
  // Same Gram matrix as the closed-form vectors, so they differ by a unitary.
  const fixtures::WernerWorked x = fixtures::werner_worked(0.2);
  ComplexMatrix vecs(4, 4);
  for (int c = 0; c < 4; ++c) vecs.col(c) = x.w[c];
  const GramSystem closed_form({2, 2}, vecs);
  CHECK(gram_residual(closed_form, w.mat()) < 1e-12);
  CHECK(connect_gram(g, closed_form).residual < 1e-8);

  ComplexMatrix pure = ComplexMatrix::Zero(4, 4);
  pure(0, 0) = 1.0;
  const GramSystem gp = spectral_gram(DensityMatrix::validate(pure, 2, 2));
  CHECK(gp.k() == 1);
  CHECK(std::abs(gp.w(0, 0)[0] - 1.0) < 1e-14);
  CHECK(std::abs(gp.w(1, 1)[0]) < 1e-14);

  const DensityMatrix r = random_density(2, 3, 3, 5);
  const GramSystem gr = spectral_gram(r);
  CHECK(gr.k() == 3);
  CHECK(gram_residual(gr, r.mat()) < 1e-12);
  CHECK((gr.gram_matrix() - r.mat()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Gram systems of explicit decompositions") {
  const DensityMatrix r = random_density(2, 3, 3, 6);
  const Decomposition sd = spectral_decomposition(r);
  const GramSystem a = gram_from_decomposition(sd, std::nullopt, &r.mat());
  CHECK((a.vectors() - spectral_gram(r).vectors()).norm() < 1e-14);

  // I/2 (x) |0><0| from |+,0> and |-,0>.
  Decomposition pm;
  pm.dims = {2, 2};
  pm.vectors = ComplexMatrix::Zero(4, 2);
  pm.vectors(0, 0) = pm.vectors(2, 0) = 0.5;
  pm.vectors(0, 1) = 0.5;
  pm.vectors(2, 1) = -0.5;
  ComplexMatrix target = ComplexMatrix::Zero(4, 4);
  target(0, 0) = target(2, 2) = 0.5;
  const GramSystem g2 = gram_from_decomposition(pm, std::nullopt, &target);
  CHECK(g2.k() == 2);
  CHECK(gram_residual(g2, target) < 1e-14);

  Decomposition wrong = pm;
  wrong.vectors *= 2.0;
  CHECK_THROWS_WITH_AS(gram_from_decomposition(wrong, std::nullopt, &target), doctest::Contains("DecompositionMismatch"), Error);

  // The canonical-form decomposition: w_{0n} standard basis, w_{1n} rows of B.
  Rng rng(7);
  const ComplexMatrix b = rng.gaussian_matrix(3, 3);
  const ComplexVector lam = rng.gaussian_vector(3);
  Decomposition cd;
  cd.dims = {2, 3};
  cd.vectors = ComplexMatrix::Zero(6, 4);
  for (int k = 0; k < 3; ++k) {
    cd.vectors(k, k) = 1.0;
    cd.vectors.block(3, k, 3, 1) = b.col(k);
  }
  cd.vectors.block(3, 3, 3, 1) = lam;
  const GramSystem gc = gram_from_decomposition(cd);
  for (int n = 0; n < 3; ++n) {
    CHECK(std::abs(gc.w(0, n)[n] - 1.0) < 1e-15);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(gc.w(1, n)[k] - std::conj(b(n, k))) < 1e-15);
    CHECK(std::abs(gc.w(1, n)[3] - std::conj(lam[n])) < 1e-15);
  }
}

TEST_CASE("embedding and connecting Gram systems") {
  const DensityMatrix r = random_density(2, 3, 3, 8);
  const GramSystem g = spectral_gram(r);
  CHECK((embed_gram(g, ComplexMatrix::Identity(3, 3)).vectors() - g.vectors()).norm() == 0.0);
  Rng rng(9);
  const ComplexMatrix v = rng.haar_unitary(5).leftCols(3);
  const GramSystem e = embed_gram(g, v);
  CHECK(e.k() == 5);
  CHECK((e.gram_matrix() - g.gram_matrix()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_WITH_AS(embed_gram(g, 2.0 * v), doctest::Contains("NotIsometry"), Error);

  const ComplexMatrix u = rng.haar_unitary(3);
  const GramSystem g2 = embed_gram(g, u);
  const Connection c = connect_gram(g, g2);
  CHECK(c.residual < 1e-10);
  CHECK((c.u.adjoint() * c.u - ComplexMatrix::Identity(3, 3)).norm() < 1e-10);
  CHECK((c.u * g.vectors() - g2.vectors()).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(connect_gram(g, g).residual < 1e-12);

  const GramSystem other = spectral_gram(random_density(2, 3, 3, 99));
  CHECK_THROWS_WITH_AS(connect_gram(g, other), doctest::Contains("GramMismatch"), Error);
}

TEST_CASE("factor maps") {
  const fixtures::WernerWorked x = fixtures::werner_worked(0.2);
  ComplexMatrix vecs(4, 4);
  for (int c = 0; c < 4; ++c) vecs.col(c) = x.w[c];
  const GramSystem g({2, 2}, vecs);
  const FactorMapSystem f = factor_maps(g);
  CHECK(f.residual(g) < 1e-12);
  // The closed-form F_m agree with the least-norm maps on the base.
  for (int n = 0; n < 2; ++n) {
    CHECK((x.f1 * g.w(0, n) - f.maps[0] * g.w(0, n)).norm() < 1e-12);
    CHECK((x.f2 * g.w(0, n) - f.maps[1] * g.w(0, n)).norm() < 1e-12);
  }
  const DensityMatrix r = random_density(2, 3, 6, 3);
  const GramSystem gr = spectral_gram(r);
  CHECK(factor_maps(gr).residual(gr) < 1e-10);

  const GramSystem prod = spectral_gram(random_separable(2, 2, 1, 4).rho);
  CHECK_THROWS_WITH_AS(factor_maps(prod), doctest::Contains("DependentBase"), Error);
}

TEST_CASE("relating an r-term and a K-term system") {
  const DensityMatrix r = random_density(2, 2, 3, 11);
  const GramSystem g1 = spectral_gram(r);
  Rng rng(12);
  const GramSystem g2 = embed_gram(g1, rng.haar_unitary(6).leftCols(3));
  const FactorMapSystem f1 = factor_maps(g1), f2 = factor_maps(g2);
  const Relation rel = relate_decompositions(f1, f2);
  CHECK(rel.residual < 1e-8);
  CHECK((rel.v.adjoint() * rel.v - ComplexMatrix::Identity(3, 3)).norm() < 1e-10);
  const Relation same = relate_decompositions(f1, f1);
  CHECK(same.residual < 1e-10);
  for (int n = 0; n < 2; ++n) {
    for (int m = 0; m < 2; ++m) {
      const ComplexVector lhs = rel.v.adjoint() * f2.maps[m] * rel.v_tilde * f1.base.col(n);
      CHECK((lhs - f1.maps[m] * f1.base.col(n)).norm() < 1e-8);
    }
  }
}
