// Compiled with -mavx2 -mfma; only reached through the dispatcher after a
// CPUID check. Two complex doubles per 256-bit register, interleaved layout.

#include "sepgram/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace sepgram::kernels {
namespace {

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

cplx dotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  __m256d acc_same = _mm256_setzero_pd();  // [ac, bd, ...]
  __m256d acc_swap = _mm256_setzero_pd();  // [ad, bc, ...]
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    const __m256d ys = _mm256_permute_pd(yv, 0x5);
    acc_same = _mm256_fmadd_pd(xv, yv, acc_same);
    acc_swap = _mm256_fmadd_pd(xv, ys, acc_swap);
  }
  alignas(32) double s[4];
  alignas(32) double w[4];
  _mm256_store_pd(s, acc_same);
  _mm256_store_pd(w, acc_swap);
  double re = (s[0] + s[1]) + (s[2] + s[3]);
  double im = (w[0] - w[1]) + (w[2] - w[3]);
  for (; i < n; ++i) {
    const double a = x[i].real(), b = x[i].imag();
    const double c = y[i].real(), d = y[i].imag();
    re += a * c + b * d;
    im += a * d - b * c;
  }
  return {re, im};
}

void gram_avx2(const cplx* cols, std::size_t len, std::size_t count, cplx* out) {
  for (std::size_t j = 0; j < count; ++j) {
    for (std::size_t i = 0; i <= j; ++i) {
      const cplx g = dotc_avx2(cols + i * len, cols + j * len, len);
      out[i + count * j] = g;
      out[j + count * i] = std::conj(g);
    }
  }
}

double max_abs_diff_avx2(const cplx* a, const cplx* b, std::size_t n) {
  const double* ad = as_doubles(a);
  const double* bd = as_doubles(b);
  __m256d worst = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(ad + 2 * i), _mm256_loadu_pd(bd + 2 * i));
    const __m256d sq = _mm256_mul_pd(d, d);
    // [re^2 + im^2] duplicated into both lanes of each complex slot
    const __m256d mag2 = _mm256_hadd_pd(sq, sq);
    worst = _mm256_max_pd(worst, mag2);
  }
  alignas(32) double w[4];
  _mm256_store_pd(w, worst);
  double best2 = std::max(std::max(w[0], w[1]), std::max(w[2], w[3]));
  double result = std::sqrt(best2);
  for (; i < n; ++i) {
    result = std::max(result, std::abs(a[i] - b[i]));
  }
  return result;
}

void poly_eval_avx2(const cplx* coeffs, std::size_t ncoeff, const cplx* z, std::size_t count,
                    cplx* out) {
  const double* zd = as_doubles(z);
  double* od = as_doubles(out);
  std::size_t p = 0;
  for (; p + 2 <= count; p += 2) {
    const __m256d zv = _mm256_loadu_pd(zd + 2 * p);
    const __m256d zr = _mm256_movedup_pd(zv);          // [zr, zr]
    const __m256d zi = _mm256_permute_pd(zv, 0xF);     // [zi, zi]
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = ncoeff; k-- > 0;) {
      const __m256d swapped = _mm256_permute_pd(acc, 0x5);
      const __m256d cross = _mm256_mul_pd(swapped, zi);  // [ai zi, ar zi]
      acc = _mm256_fmaddsub_pd(acc, zr, cross);            // acc * z
      const __m256d c = _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(coeffs + k));
      acc = _mm256_add_pd(acc, c);
    }
    _mm256_storeu_pd(od + 2 * p, acc);
  }
  for (; p < count; ++p) {
    const double zr = z[p].real(), zi = z[p].imag();
    double ar = 0.0, ai = 0.0;
    for (std::size_t k = ncoeff; k-- > 0;) {
      const double tr = ar * zr - ai * zi + coeffs[k].real();
      ai = ar * zi + ai * zr + coeffs[k].imag();
      ar = tr;
    }
    out[p] = {ar, ai};
  }
}

}  // namespace

namespace detail {
const KernelTable kAvx2Table{dotc_avx2, gram_avx2, max_abs_diff_avx2, poly_eval_avx2};
}

}  // namespace sepgram::kernels
