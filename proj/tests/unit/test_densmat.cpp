#include "sepgram/densmat.hpp"
#include "sepgram/errors.hpp"
#include "sepgram/states.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

using namespace sepgram;

TEST_CASE("product index layout") {
  CHECK(product_index(0, 0, {2, 4}) == 0);
  CHECK(product_index(1, 3, {2, 4}) == 7);
  CHECK(product_index(1, 0, {2, 4}) == 4);
  for (int f = 0; f < 12; ++f) CHECK(product_index(split_index(f, {3, 4}).first, split_index(f, {3, 4}).second, {3, 4}) == f);
  CHECK_THROWS_AS(product_index(2, 0, {2, 4}), Error);
  CHECK_THROWS_AS(product_index(0, 4, {2, 4}), Error);
}

TEST_CASE("validation accepts states and names the violated invariant") {
  CHECK_NOTHROW(DensityMatrix::validate(ComplexMatrix::Identity(4, 4) / 4.0, 2, 2));
  CHECK_NOTHROW(DensityMatrix::validate(fixtures::werner_literal(0.2), 2, 2));

  ComplexMatrix bad = fixtures::werner_literal(0.2);
  bad(0, 3) = bad(3, 0) = 2.0;
  try {
    DensityMatrix::validate(bad, 2, 2);
    FAIL("expected NotPSD");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPSD);
    CHECK(e.value() < 0.0);
  }
  ComplexMatrix nh = ComplexMatrix::Identity(4, 4) / 4.0;
  nh(0, 1) = 0.1;
  CHECK_THROWS_WITH_AS(DensityMatrix::validate(nh, 2, 2), doctest::Contains("NotHermitian"), Error);
  CHECK_THROWS_WITH_AS(DensityMatrix::validate(ComplexMatrix::Identity(4, 4), 2, 2), doctest::Contains("TraceDeviation"), Error);
  CHECK_NOTHROW(DensityMatrix::validate(ComplexMatrix::Identity(4, 4), 2, 2, kDefaultTol, true));
  CHECK_THROWS_WITH_AS(DensityMatrix::validate(ComplexMatrix::Identity(4, 4) / 4.0, 2, 3), doctest::Contains("SizeMismatch"), Error);
  CHECK_THROWS_AS(DensityMatrix::validate(ComplexMatrix::Identity(6, 6) / 6.0, 3, 2), Error);
}

TEST_CASE("partial transpose matches the index permutation") {
  const DensityMatrix w = DensityMatrix::validate(fixtures::werner_literal(0.2), 2, 2);
  const ComplexMatrix pt = partial_transpose(w, Subsystem::A);
  CHECK(std::abs(pt(1, 2) - 0.1) < 1e-15);
  CHECK(std::abs(pt(0, 3)) < 1e-15);
  const DensityMatrix r = random_density(2, 3, 4, 9);
  CHECK((partial_transpose(r, Subsystem::A) - fixtures::partial_transpose_a(r.mat(), 2, 3)).norm() < 1e-15);
  CHECK((partial_transpose(partial_transpose(r, Subsystem::A), r.dims(), Subsystem::A) - r.mat()).norm() < 1e-15);
  CHECK((partial_transpose(partial_transpose(r, Subsystem::B), r.dims(), Subsystem::B) - r.mat()).norm() < 1e-15);
  const ComplexMatrix both = partial_transpose(partial_transpose(r, Subsystem::A), r.dims(), Subsystem::B);
  CHECK((both - r.mat().transpose()).norm() < 1e-15);
  CHECK(std::abs(partial_transpose(r, Subsystem::A).trace() - 1.0) < 1e-12);
  ComplexMatrix diag = ComplexMatrix::Zero(4, 4);
  diag.diagonal() << 0.1, 0.2, 0.3, 0.4;
  CHECK((partial_transpose(diag, {2, 2}, Subsystem::A) - diag).norm() == 0.0);
}

TEST_CASE("numeric rank") {
  CHECK(numeric_rank(ComplexMatrix::Identity(4, 4) / 4.0).rank == 4);
  CHECK(numeric_rank(fixtures::werner_literal(1.0)).rank == 1);
  CHECK(numeric_rank(horodecki97(0.5).mat()).rank == 5);
  Rng rng(2);
  const DensityMatrix r = random_density(2, 3, 3, 4);
  const ComplexMatrix u = rng.haar_unitary(6);
  CHECK(numeric_rank(u * r.mat() * u.adjoint()).rank == 3);
}

TEST_CASE("PPT test") {
  const PptReport a = is_ppt(DensityMatrix::validate(fixtures::werner_literal(0.2), 2, 2));
  CHECK(a.ppt);
  CHECK(a.min_eigenvalue == doctest::Approx(0.1).epsilon(1e-12));
  const PptReport b = is_ppt(DensityMatrix::validate(fixtures::werner_literal(0.5), 2, 2));
  CHECK_FALSE(b.ppt);
  CHECK(b.min_eigenvalue == doctest::Approx(-0.125).epsilon(1e-12));
  const PptReport c = is_ppt(DensityMatrix::validate(ComplexMatrix::Identity(6, 6) / 6.0, 2, 3));
  CHECK(c.ppt);
  CHECK(c.min_eigenvalue == doctest::Approx(1.0 / 6.0));
  for (std::uint64_t s = 1; s <= 20; ++s) CHECK(is_ppt(random_separable(2, 3, 5, s).rho).ppt);
}

TEST_CASE("reduced states") {
  const DensityMatrix r = random_density(2, 3, 6, 1);
  CHECK(std::abs(reduce_to_a(r.mat(), r.dims()).trace() - 1.0) < 1e-12);
  CHECK(std::abs(reduce_to_b(r.mat(), r.dims()).trace() - 1.0) < 1e-12);
  const ComplexMatrix ra = reduce_to_a(r.mat(), r.dims());
  cplx ref = 0.0;
  for (int j = 0; j < 3; ++j) ref += r.mat()(0 * 3 + j, 1 * 3 + j);
  CHECK(std::abs(ra(0, 1) - ref) < 1e-15);
}
