#pragma once

// Data-parallel inner loops. Each kernel has a portable scalar reference and,
// on x86-64, an AVX2/FMA variant; the variant is chosen once at runtime from
// CPUID and can be overridden with SEPGRAM_ISA=scalar|avx2 or force_isa().
//
// Complex data is interleaved (re, im) exactly as std::complex<double> stores
// it, so Eigen buffers can be passed directly.

#include <complex>
#include <cstddef>
#include <string_view>

namespace sepgram::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  // sum_i conj(x[i]) * y[i]
  cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);

  // Gram matrix of `count` column vectors of length `len` stored contiguously
  // (column-major). Writes out[i + count * j] = <col_i, col_j>.
  void (*gram)(const cplx* cols, std::size_t len, std::size_t count, cplx* out);

  // max_i |a[i] - b[i]|
  double (*max_abs_diff)(const cplx* a, const cplx* b, std::size_t n);

  // Horner evaluation of sum_k coeffs[k] z^k at `count` points.
  void (*poly_eval)(const cplx* coeffs, std::size_t ncoeff, const cplx* z, std::size_t count,
                    cplx* out);
};

const KernelTable& table(Isa isa);
bool isa_available(Isa isa);

Isa active_isa();
const KernelTable& active();

// Pins the dispatcher to `isa` (falls back to Scalar if unavailable). Intended
// for tests and benchmarks; not synchronized with concurrent kernel calls.
void force_isa(Isa isa);

std::string_view isa_name(Isa isa);

namespace detail {
extern const KernelTable kScalarTable;
#if defined(SEPGRAM_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
}  // namespace detail

}  // namespace sepgram::kernels
