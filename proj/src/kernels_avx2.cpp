#include "micromaser/kernels.hpp"

#if defined(MICROMASER_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

namespace micromaser::kernels {

namespace {

void tridiag_avx2(const double* diag, const double* upper, const double* lower,
                  const double* x, double* out, std::size_t len) {
  if (len < 2) {
    if (len == 1) out[0] = diag[0] * x[0];
    return;
  }
  out[0] = diag[0] * x[0] + upper[0] * x[1];
  std::size_t i = 1;
  for (; i + 4 < len; i += 4) {
    __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(diag + i), _mm256_loadu_pd(x + i));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(upper + i), _mm256_loadu_pd(x + i + 1), acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(lower + i), _mm256_loadu_pd(x + i - 1), acc);
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i + 1 < len; ++i) {
    out[i] = diag[i] * x[i] + upper[i] * x[i + 1] + lower[i] * x[i - 1];
  }
  out[len - 1] = diag[len - 1] * x[len - 1] + lower[len - 1] * x[len - 2];
}

void exchange_avx2(const double* omega, const double* aa, const double* bb,
                   const double* c_im, double* d_aa, double* d_bb, double* d_cim,
                   std::size_t pairs) {
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t n = 0;
  for (; n + 4 <= pairs; n += 4) {
    const __m256d w = _mm256_loadu_pd(omega + n);
    const __m256d flow = _mm256_mul_pd(_mm256_mul_pd(two, w), _mm256_loadu_pd(c_im + n));
    _mm256_storeu_pd(d_aa + n, _mm256_sub_pd(_mm256_loadu_pd(d_aa + n), flow));
    _mm256_storeu_pd(d_bb + n, _mm256_add_pd(_mm256_loadu_pd(d_bb + n), flow));
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(aa + n), _mm256_loadu_pd(bb + n));
    _mm256_storeu_pd(d_cim + n, _mm256_fmadd_pd(w, diff, _mm256_loadu_pd(d_cim + n)));
  }
  for (; n < pairs; ++n) {
    const double flow = 2.0 * omega[n] * c_im[n];
    d_aa[n] -= flow;
    d_bb[n] += flow;
    d_cim[n] += omega[n] * (aa[n] - bb[n]);
  }
}

void combine_avx2(const double* y, double h, const double* coeffs,
                  const double* const* stages, std::size_t n_stages, double* out,
                  std::size_t len) {
  const __m256d hv = _mm256_set1_pd(h);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < n_stages; ++j) {
      acc = _mm256_fmadd_pd(_mm256_set1_pd(coeffs[j]), _mm256_loadu_pd(stages[j] + i), acc);
    }
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(hv, acc, _mm256_loadu_pd(y + i)));
  }
  for (; i < len; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n_stages; ++j) acc += coeffs[j] * stages[j][i];
    out[i] = y[i] + h * acc;
  }
}

double error_norm_avx2(const double* err, const double* y0, const double* y1, double rtol,
                       double atol, std::size_t len) {
  if (len == 0) return 0.0;
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  const __m256d rt = _mm256_set1_pd(rtol);
  const __m256d at = _mm256_set1_pd(atol);
  __m256d sum = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d a = _mm256_and_pd(_mm256_loadu_pd(y0 + i), abs_mask);
    const __m256d b = _mm256_and_pd(_mm256_loadu_pd(y1 + i), abs_mask);
    const __m256d scale = _mm256_fmadd_pd(rt, _mm256_max_pd(a, b), at);
    const __m256d r = _mm256_div_pd(_mm256_loadu_pd(err + i), scale);
    sum = _mm256_fmadd_pd(r, r, sum);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, sum);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < len; ++i) {
    const double scale = atol + rtol * std::fmax(std::fabs(y0[i]), std::fabs(y1[i]));
    const double r = err[i] / scale;
    total += r * r;
  }
  return std::sqrt(total / static_cast<double>(len));
}

const KernelSet kAvx2{"avx2", tridiag_avx2, exchange_avx2, combine_avx2, error_norm_avx2};

}  // namespace

const KernelSet* avx2() {
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &kAvx2 : nullptr;
}

}  // namespace micromaser::kernels

#else

namespace micromaser::kernels {

const KernelSet* avx2() { return nullptr; }

}  // namespace micromaser::kernels

#endif
