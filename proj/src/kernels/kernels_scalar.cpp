#include "sepgram/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace sepgram::kernels {
namespace {

cplx dotc_scalar(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = x[i].real(), b = x[i].imag();
    const double c = y[i].real(), d = y[i].imag();
    re += a * c + b * d;
    im += a * d - b * c;
  }
  return {re, im};
}

void gram_scalar(const cplx* cols, std::size_t len, std::size_t count, cplx* out) {
  for (std::size_t j = 0; j < count; ++j) {
    for (std::size_t i = 0; i <= j; ++i) {
      const cplx g = dotc_scalar(cols + i * len, cols + j * len, len);
      out[i + count * j] = g;
      out[j + count * i] = std::conj(g);
    }
  }
}

double max_abs_diff_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

void poly_eval_scalar(const cplx* coeffs, std::size_t ncoeff, const cplx* z, std::size_t count,
                      cplx* out) {
  for (std::size_t p = 0; p < count; ++p) {
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
const KernelTable kScalarTable{dotc_scalar, gram_scalar, max_abs_diff_scalar, poly_eval_scalar};
}

}  // namespace sepgram::kernels
