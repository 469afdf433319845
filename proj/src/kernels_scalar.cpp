#include <cmath>
#include <cstdlib>
#include <string_view>

#include "micromaser/kernels.hpp"

namespace micromaser::kernels {

namespace {

void tridiag_scalar(const double* diag, const double* upper, const double* lower,
                    const double* x, double* out, std::size_t len) {
  if (len == 0) return;
  if (len == 1) {
    out[0] = diag[0] * x[0];
    return;
  }
  out[0] = diag[0] * x[0] + upper[0] * x[1];
  for (std::size_t i = 1; i + 1 < len; ++i) {
    out[i] = diag[i] * x[i] + upper[i] * x[i + 1] + lower[i] * x[i - 1];
  }
  out[len - 1] = diag[len - 1] * x[len - 1] + lower[len - 1] * x[len - 2];
}

void exchange_scalar(const double* omega, const double* aa, const double* bb,
                     const double* c_im, double* d_aa, double* d_bb, double* d_cim,
                     std::size_t pairs) {
  for (std::size_t n = 0; n < pairs; ++n) {
    const double flow = 2.0 * omega[n] * c_im[n];
    d_aa[n] -= flow;
    d_bb[n] += flow;
    d_cim[n] += omega[n] * (aa[n] - bb[n]);
  }
}

void combine_scalar(const double* y, double h, const double* coeffs,
                    const double* const* stages, std::size_t n_stages, double* out,
                    std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n_stages; ++j) acc += coeffs[j] * stages[j][i];
    out[i] = y[i] + h * acc;
  }
}

double error_norm_scalar(const double* err, const double* y0, const double* y1, double rtol,
                         double atol, std::size_t len) {
  if (len == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double scale = atol + rtol * std::fmax(std::fabs(y0[i]), std::fabs(y1[i]));
    const double r = err[i] / scale;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(len));
}

const KernelSet kScalar{"scalar", tridiag_scalar, exchange_scalar, combine_scalar,
                        error_norm_scalar};

const KernelSet& select_active() {
  const char* forced = std::getenv("MICROMASER_KERNELS");
  if (forced != nullptr && std::string_view(forced) == "scalar") return kScalar;
  if (const KernelSet* wide = avx2()) return *wide;
  return kScalar;
}

}  // namespace

const KernelSet& scalar() { return kScalar; }

const KernelSet& active() {
  static const KernelSet& chosen = select_active();
  return chosen;
}

}  // namespace micromaser::kernels
