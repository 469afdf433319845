#pragma once

// Data-parallel inner loops of the integrators. Every kernel has a scalar
// reference implementation; wider variants are selected once at runtime and
// must agree with the reference to round-off (see tests/kernels_test.cpp).

#include <cstddef>
#include <string_view>

namespace micromaser::kernels {

// out[i] = diag[i]*x[i] + upper[i]*x[i+1] + lower[i]*x[i-1].
// upper[len-1] and lower[0] are never read.
using TridiagFn = void (*)(const double* diag, const double* upper, const double* lower,
                           const double* x, double* out, std::size_t len);

// Resonant exchange within the pairs (|a,n>, |b,n+1>), accumulated:
//   d_aa[n] -= 2*omega[n]*c_im[n]
//   d_bb[n] += 2*omega[n]*c_im[n]   (caller passes bb, d_bb already shifted by one)
//   d_cim[n] += omega[n]*(aa[n] - bb[n])
using ExchangeFn = void (*)(const double* omega, const double* aa, const double* bb,
                            const double* c_im, double* d_aa, double* d_bb, double* d_cim,
                            std::size_t pairs);

// out[i] = y[i] + h * sum_j coeffs[j]*stages[j][i]
using CombineFn = void (*)(const double* y, double h, const double* coeffs,
                           const double* const* stages, std::size_t n_stages, double* out,
                           std::size_t len);

// RMS of err[i] / (atol + rtol*max(|y0[i]|, |y1[i]|)).
using ErrorNormFn = double (*)(const double* err, const double* y0, const double* y1,
                               double rtol, double atol, std::size_t len);

struct KernelSet {
  std::string_view name;
  TridiagFn tridiag;
  ExchangeFn exchange;
  CombineFn combine;
  ErrorNormFn error_norm;
};

const KernelSet& scalar();

// nullptr when the build or the host CPU lacks AVX2+FMA.
const KernelSet* avx2();

// Chosen once per process: AVX2 when available unless MICROMASER_KERNELS=scalar.
const KernelSet& active();

}  // namespace micromaser::kernels
