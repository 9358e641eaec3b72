#include "sepgram/kernels.hpp"
#include "sepgram/states.hpp"

#include <doctest.h>

#include <vector>

using namespace sepgram;
namespace k = sepgram::kernels;

namespace {

std::vector<cplx> random_buffer(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<cplx> v(n);
  for (cplx& z : v) z = rng.complex_normal();
  return v;
}

const k::KernelTable& simd_or_scalar() {
  return k::isa_available(k::Isa::Avx2) ? k::table(k::Isa::Avx2) : k::table(k::Isa::Scalar);
}

}  // namespace

TEST_CASE("scalar dotc matches the definition") {
  const auto x = random_buffer(7, 1), y = random_buffer(7, 2);
  cplx ref = 0.0;
  for (int i = 0; i < 7; ++i) ref += std::conj(x[i]) * y[i];
  CHECK(std::abs(k::table(k::Isa::Scalar).dotc(x.data(), y.data(), 7) - ref) < 1e-14);
}

TEST_CASE("vector kernels agree with the scalar reference") {
  const k::KernelTable& s = k::table(k::Isa::Scalar);
  const k::KernelTable& v = simd_or_scalar();
  for (std::size_t n : {0u, 1u, 2u, 3u, 5u, 8u, 17u, 64u, 101u}) {
    const auto x = random_buffer(n, 10 + n), y = random_buffer(n, 20 + n);
    CHECK(std::abs(s.dotc(x.data(), y.data(), n) - v.dotc(x.data(), y.data(), n)) <= 1e-13 * (1.0 + n));
    CHECK(s.max_abs_diff(x.data(), y.data(), n) == doctest::Approx(v.max_abs_diff(x.data(), y.data(), n)).epsilon(1e-15));
  }
  for (std::size_t len : {1u, 3u, 4u, 9u}) {
    for (std::size_t count : {1u, 2u, 5u, 16u}) {
      const auto cols = random_buffer(len * count, 100 * len + count);
      std::vector<cplx> a(count * count), b(count * count);
      s.gram(cols.data(), len, count, a.data());
      v.gram(cols.data(), len, count, b.data());
      double diff = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
      CHECK(diff <= 1e-13);
    }
  }
  for (std::size_t nc : {1u, 2u, 4u, 7u}) {
    for (std::size_t count : {1u, 3u, 4u, 33u}) {
      const auto c = random_buffer(nc, nc), z = random_buffer(count, 50 + count);
      std::vector<cplx> a(count), b(count);
      s.poly_eval(c.data(), nc, z.data(), count, a.data());
      v.poly_eval(c.data(), nc, z.data(), count, b.data());
      for (std::size_t i = 0; i < count; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12 * (1.0 + std::abs(a[i])));
    }
  }
}

TEST_CASE("gram kernel writes conjugate-linear inner products") {
  const auto cols = random_buffer(6, 3);  // two columns of length 3
  std::vector<cplx> out(4);
  k::table(k::Isa::Scalar).gram(cols.data(), 3, 2, out.data());
  cplx ref = 0.0;
  for (int i = 0; i < 3; ++i) ref += std::conj(cols[i]) * cols[3 + i];
  CHECK(std::abs(out[0 + 2 * 1] - ref) < 1e-14);
  CHECK(std::abs(out[1 + 2 * 0] - std::conj(ref)) < 1e-14);
}

TEST_CASE("force_isa pins the dispatcher") {
  const k::Isa before = k::active_isa();
  k::force_isa(k::Isa::Scalar);
  CHECK(k::active_isa() == k::Isa::Scalar);
  k::force_isa(k::Isa::Avx2);
  CHECK(k::active_isa() == (k::isa_available(k::Isa::Avx2) ? k::Isa::Avx2 : k::Isa::Scalar));
  k::force_isa(before);
  CHECK(k::isa_name(k::Isa::Scalar) == "scalar");
}
