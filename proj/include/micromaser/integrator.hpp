#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "micromaser/error.hpp"
#include "micromaser/kernels.hpp"

namespace micromaser {

struct IntegratorOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  std::size_t max_steps = 50'000'000;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

/// Dormand-Prince 5(4) embedded pair with FSAL and Hairer's PI step control.
///
/// Integrates an autonomous linear-or-not system y' = f(y) over a fixed
/// duration. Workspace is owned by the object so one instance can be reused
/// across many integrations of the same dimension.
class DormandPrince {
 public:
  DormandPrince(std::size_t dim, IntegratorOptions options,
                const kernels::KernelSet& k = kernels::active())
      : dim_(dim), opt_(options), k_(&k), zero_(dim, 0.0), y_stage_(dim), y_new_(dim),
        err_(dim) {
    for (auto& s : stage_) s.assign(dim, 0.0);
  }

  std::size_t dim() const noexcept { return dim_; }
  const IntegratorOptions& options() const noexcept { return opt_; }
  const kernels::KernelSet& kernel_set() const noexcept { return *k_; }

  struct NoObserver {
    void operator()(double, std::span<const double>) const noexcept {}
  };

  // `rhs(y, dy)` fills dy = f(y). `observe(t, y)` runs after every accepted step.
  template <class Rhs, class Observer = NoObserver>
  IntegratorStats integrate(Rhs&& rhs, std::span<double> y, double duration,
                            Observer&& observe = Observer{}) {
    IntegratorStats stats;
    if (duration == 0.0) return stats;
    if (!(duration > 0.0) || y.size() != dim_) {
      throw Error(ErrorKind::InvalidArgument, "integration needs duration >= 0 and matching size");
    }

    auto& k1 = stage_[0];
    rhs(std::span<const double>(y), std::span<double>(k1));
    ++stats.evaluations;
    double h = initial_step(rhs, y, duration, stats);
    double t = 0.0;
    double facold = 1e-4;

    while (true) {
      const double remaining = duration - t;
      if (remaining <= 0.0) break;
      bool last = false;
      if (h >= remaining * (1.0 - 1e-12)) {
        h = remaining;
        last = true;
      }
      if (stats.accepted + stats.rejected >= opt_.max_steps) {
        throw Error(ErrorKind::StepSizeUnderflow,
                    "step limit exceeded at t=" + std::to_string(t) + " of " +
                        std::to_string(duration));
      }
      if (h < 1e-300 || t + 0.1 * h == t) {
        throw Error(ErrorKind::StepSizeUnderflow,
                    "step size underflow at t=" + std::to_string(t) + " of " +
                        std::to_string(duration));
      }

      take_step(rhs, y, h, stats);
      const double err = k_->error_norm(err_.data(), y.data(), y_new_.data(), opt_.rtol,
                                        opt_.atol, dim_);

      const double fac11 = std::pow(err, kExpo1);
      if (err <= 1.0) {
        facold = std::fmax(err, 1e-4);
        t = last ? duration : t + h;
        std::copy(y_new_.begin(), y_new_.end(), y.begin());
        std::swap(stage_[0], stage_[6]);
        ++stats.accepted;
        observe(t, std::span<const double>(y));
        if (last) break;
        double fac = fac11 / std::pow(facold, kBeta);
        fac = std::fmax(kFacMaxInv, std::fmin(kFacMinInv, fac / kSafe));
        h = h / fac;
      } else {
        ++stats.rejected;
        h = h / std::fmin(kFacMinInv, fac11 / kSafe);
      }
    }
    return stats;
  }

 private:
  static constexpr double kSafe = 0.9;
  static constexpr double kBeta = 0.04;
  static constexpr double kExpo1 = 0.2 - kBeta * 0.75;
  static constexpr double kFacMinInv = 1.0 / 0.2;   // step may shrink by 5x
  static constexpr double kFacMaxInv = 1.0 / 10.0;  // or grow by 10x

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr std::array<double, 1> a2{1.0 / 5};
  static constexpr std::array<double, 2> a3{3.0 / 40, 9.0 / 40};
  static constexpr std::array<double, 3> a4{44.0 / 45, -56.0 / 15, 32.0 / 9};
  static constexpr std::array<double, 4> a5{19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                                            -212.0 / 729};
  static constexpr std::array<double, 5> a6{9017.0 / 3168, -355.0 / 33, 46732.0 / 5247,
                                            49.0 / 176, -5103.0 / 18656};
  // Fifth-order weights; b2 = 0.
  static constexpr std::array<double, 5> b{35.0 / 384, 500.0 / 1113, 125.0 / 192,
                                           -2187.0 / 6784, 11.0 / 84};
  // Fifth minus fourth order weights; e2 = 0.
  static constexpr std::array<double, 6> e{71.0 / 57600,      -71.0 / 16695, 71.0 / 1920,
                                           -17253.0 / 339200, 22.0 / 525,    -1.0 / 40};

  template <class Rhs>
  void stage(Rhs& rhs, std::span<const double> y, double h, const double* coeffs,
             std::initializer_list<int> which, std::size_t target, IntegratorStats& stats) {
    std::array<const double*, 7> ptrs{};
    std::size_t n = 0;
    for (int w : which) ptrs[n++] = stage_[static_cast<std::size_t>(w)].data();
    k_->combine(y.data(), h, coeffs, ptrs.data(), n, y_stage_.data(), dim_);
    rhs(std::span<const double>(y_stage_), std::span<double>(stage_[target]));
    ++stats.evaluations;
  }

  template <class Rhs>
  void take_step(Rhs& rhs, std::span<const double> y, double h, IntegratorStats& stats) {
    stage(rhs, y, h, a2.data(), {0}, 1, stats);
    stage(rhs, y, h, a3.data(), {0, 1}, 2, stats);
    stage(rhs, y, h, a4.data(), {0, 1, 2}, 3, stats);
    stage(rhs, y, h, a5.data(), {0, 1, 2, 3}, 4, stats);
    stage(rhs, y, h, a6.data(), {0, 1, 2, 3, 4}, 5, stats);

    const std::array<const double*, 5> sol{stage_[0].data(), stage_[2].data(), stage_[3].data(),
                                           stage_[4].data(), stage_[5].data()};
    k_->combine(y.data(), h, b.data(), sol.data(), sol.size(), y_new_.data(), dim_);
    rhs(std::span<const double>(y_new_), std::span<double>(stage_[6]));
    ++stats.evaluations;

    const std::array<const double*, 6> est{stage_[0].data(), stage_[2].data(), stage_[3].data(),
                                           stage_[4].data(), stage_[5].data(), stage_[6].data()};
    k_->combine(zero_.data(), h, e.data(), est.data(), est.size(), err_.data(), dim_);
  }

  // Hairer & Wanner's starting step heuristic.
  template <class Rhs>
  double initial_step(Rhs& rhs, std::span<const double> y, double duration,
                      IntegratorStats& stats) {
    const auto& f0 = stage_[0];
    const double d0 = k_->error_norm(y.data(), y.data(), y.data(), opt_.rtol, opt_.atol, dim_);
    const double d1 = k_->error_norm(f0.data(), y.data(), y.data(), opt_.rtol, opt_.atol, dim_);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * duration : 0.01 * d0 / d1;
    h0 = std::fmin(h0, duration);

    const std::array<const double*, 1> ptr{f0.data()};
    const double one = 1.0;
    k_->combine(y.data(), h0, &one, ptr.data(), 1, y_stage_.data(), dim_);
    auto& f1 = stage_[1];
    rhs(std::span<const double>(y_stage_), std::span<double>(f1));
    ++stats.evaluations;
    for (std::size_t i = 0; i < dim_; ++i) err_[i] = f1[i] - f0[i];
    const double d2 =
        k_->error_norm(err_.data(), y.data(), y.data(), opt_.rtol, opt_.atol, dim_) / h0;

    const double dmax = std::fmax(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::fmax(1e-6 * duration, h0 * 1e-3)
                                    : std::pow(0.01 / dmax, 0.2);
    return std::fmin(std::fmin(100.0 * h0, h1), duration);
  }

  std::size_t dim_;
  IntegratorOptions opt_;
  const kernels::KernelSet* k_;
  std::array<std::vector<double>, 7> stage_;
  std::vector<double> zero_;
  std::vector<double> y_stage_;
  std::vector<double> y_new_;
  std::vector<double> err_;
};

}  // namespace micromaser
