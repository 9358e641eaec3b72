#include "sepgram/errors.hpp"
#include "sepgram/sep.hpp"
#include "sepgram/states.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

using namespace sepgram;

TEST_CASE("decomposition to certificate and back") {
  const SeparableSample s = random_separable(2, 3, 6, 3);
  const DiagonalGramCertificate c = decomposition_to_certificate(s.decomposition);
  CHECK(c.k() == 6);
  CHECK(max_abs(fixtures::certificate_density(c.d, c.v) - s.rho.mat()) < 1e-10);
  CHECK(verify_certificate(c, s.rho.mat()).pass);
  const SeparableDecomposition back = certificate_to_decomposition(c, &s.rho.mat());
  CHECK(max_abs(back.density() - s.rho.mat()) < 1e-9);

  // K = 1 product state.
  const SeparableSample p = random_separable(2, 2, 1, 5);
  const DiagonalGramCertificate cp = decomposition_to_certificate(p.decomposition);
  CHECK(std::abs(cp.d(0, 0) - std::conj(p.decomposition.phi(0, 0))) < 1e-14);
  CHECK(std::abs(cp.v(0, 1) - std::conj(p.decomposition.psi(1, 0))) < 1e-14);

  // D = I, v_n = e_n gives |u><u| (x) I with u = e_0 + e_1.
  DiagonalGramCertificate id;
  id.dims = {2, 2};
  id.d = ComplexMatrix::Ones(2, 2);
  id.v = ComplexMatrix::Identity(2, 2);
  ComplexMatrix u(2, 2);
  u.setOnes();
  CHECK(max_abs(certificate_to_decomposition(id).density() - kron(u, ComplexMatrix::Identity(2, 2))) < 1e-14);
}

TEST_CASE("zero diagonal entries are repaired by a basis rotation") {
  SeparableDecomposition sd;
  sd.dims = {2, 2};
  sd.phi = ComplexMatrix::Identity(2, 2);  // phi_0 = e_0 has no e_1 component
  sd.psi = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_WITH_AS(decomposition_to_certificate(sd), doctest::Contains("ZeroDiagonal"), Error);
  const DiagonalGramCertificate c = certificate_with_nonsingular_d(sd);
  REQUIRE(c.a_basis.has_value());
  CHECK(c.d.cwiseAbs().minCoeff() > kZeroDiagonalTol);
  CHECK(verify_certificate(c, sd.density()).pass);
  CHECK(max_abs(fixtures::certificate_density(c.d, c.v, &*c.a_basis) - sd.density()) < 1e-12);
}

TEST_CASE("verification of the worked Werner certificate") {
  const fixtures::WernerWorked x = fixtures::werner_worked(0.2);
  DiagonalGramCertificate c;
  c.dims = {2, 2};
  c.d = x.d;
  c.v = x.v;
  CHECK(verify_certificate(c, werner(0.2).mat(), 1e-9).pass);
  const SeparableDecomposition sd = certificate_to_decomposition(c, &werner(0.2).mat());
  CHECK(sd.size() == 4);
  const CertificateCheck off = verify_certificate(c, werner(0.3).mat(), 1e-9);
  CHECK_FALSE(off.pass);
  CHECK(off.residual == doctest::Approx(max_abs(werner(0.3).mat() - werner(0.2).mat())).epsilon(1e-9));
  DiagonalGramCertificate zero = c;
  zero.d.setZero();
  CHECK_FALSE(verify_certificate(zero, werner(0.2).mat()).pass);
}

TEST_CASE("conjugation certifies the partial transposes") {
  const SeparableSample s = random_separable(2, 3, 5, 8);
  const DiagonalGramCertificate c = decomposition_to_certificate(s.decomposition);
  const ComplexMatrix ptb = partial_transpose(s.rho, Subsystem::B);
  const ComplexMatrix pta = partial_transpose(s.rho, Subsystem::A);
  CHECK(verify_certificate(conjugate_frame(c), ptb, 1e-10).pass);
  CHECK(verify_certificate(conjugate_diagonals(c), pta, 1e-10).pass);
}

TEST_CASE("commuting normal families") {
  const SeparableSample s = random_separable(3, 3, 7, 2);
  const DiagonalGramCertificate c = decomposition_to_certificate(s.decomposition);
  Rng rng(4);
  const ComplexMatrix u = rng.haar_unitary(7);
  const FfcnmFamily f = build_ffcnm(c, u);
  CHECK(f.entries.size() == 3);
  const GramSystem g = ffcnm_gram(c, u);
  const FfcnmReport rep = verify_ffcnm(f, g);
  CHECK(rep.pass);
  CHECK(rep.normality < 1e-10);
  CHECK(rep.commutation < 1e-10);
  CHECK(rep.relation < 1e-9);
  for (const FfcnmEntry& e : f.entries) CHECK(pair_relation_residual(e.mat, g, e.from, e.to) < 1e-9);

  const FfcnmFamily diag = build_ffcnm(decomposition_to_certificate(random_separable(2, 2, 3, 1).decomposition),
                                       ComplexMatrix::Identity(3, 3));
  const ComplexMatrix m = diag.entries[0].mat;
  CHECK((m - ComplexMatrix(m.diagonal().asDiagonal())).norm() < 1e-15);

  // Identity maps against a system with w_0n != w_1n.
  FfcnmFamily ident{2, 7, {{0, 1, ComplexMatrix::Identity(7, 7)}}};
  const SeparableSample s2 = random_separable(2, 2, 7, 5);
  const GramSystem g2 = ffcnm_gram(decomposition_to_certificate(s2.decomposition), ComplexMatrix::Identity(7, 7));
  double expect = 0.0;
  for (int n = 0; n < 2; ++n) expect = std::max(expect, (g2.w(0, n) - g2.w(1, n)).norm());
  CHECK(verify_ffcnm(ident, g2).relation == doctest::Approx(expect));

  ComplexMatrix upper = ComplexMatrix::Zero(7, 7);
  upper(0, 1) = 1.0;
  FfcnmFamily bad{2, 7, {{0, 1, upper}}};
  CHECK(verify_ffcnm(bad, g2).normality > 0.1);

  DiagonalGramCertificate sc;
  sc.dims = {2, 2};
  sc.d = ComplexMatrix::Identity(2, 2);
  sc.v = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_WITH_AS(build_ffcnm(sc, ComplexMatrix::Identity(2, 2)), doctest::Contains("SingularD"), Error);
}

TEST_CASE("extraction inverts construction") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SeparableSample s = random_separable(2 + seed % 2, 4, 3 + static_cast<int>(seed), seed);
    const DiagonalGramCertificate c = decomposition_to_certificate(s.decomposition);
    Rng rng(seed);
    const ComplexMatrix u = rng.haar_unitary(c.k());
    const DiagonalGramCertificate back = extract_certificate(build_ffcnm(c, u), ffcnm_gram(c, u));
    CHECK(max_abs(certificate_to_decomposition(back).density() - s.rho.mat()) < 1e-8);
  }
  const JointDiagonalization jd = joint_diagonalize({ComplexMatrix(ComplexVector::LinSpaced(4, 1.0, 4.0).asDiagonal())});
  CHECK(jd.off_ratio < 1e-14);
  ComplexMatrix a = ComplexMatrix::Zero(2, 2), b = ComplexMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  b(1, 0) = 1.0;
  a(1, 0) = 1.0;
  b(0, 0) = 1.0;
  CHECK_THROWS_WITH_AS(joint_diagonalize({a, b}), doctest::Contains("JointDiagonalizationFailed"), Error);
}
