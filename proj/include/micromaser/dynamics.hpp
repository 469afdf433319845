#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "micromaser/fock.hpp"
#include "micromaser/integrator.hpp"
#include "micromaser/kernels.hpp"

namespace micromaser {

/// Rates are plain s^-1 (no 2*pi factors). The photon number relaxes at 2*kappa.
struct PhysicsParams {
  double g = 3.9e4;
  double kappa = 3.146;
  double n_bar_th = 0.033;
  double tau = 4e-5;

  void validate() const;

  friend bool operator==(const PhysicsParams&, const PhysicsParams&) = default;
};

/// Atom+field density matrix on the subspace reachable from an upper-state
/// atom entering a diagonal field: populations of |a,n> and |b,n> plus the
/// coherences c(n) = <a,n|rho|b,n+1>.
///
/// Storage is one packed vector [aa(0..N), bb(0..N), Re c(0..N-1), Im c(0..N-1)]
/// so the integrator and the kernels see a flat array.
class JointBlockState {
 public:
  explicit JointBlockState(std::size_t n_max);

  static constexpr std::size_t packed_size(std::size_t n_max) noexcept { return 4 * n_max + 2; }

  std::size_t n_max() const noexcept { return n_max_; }

  std::span<double> rho_aa() noexcept { return {data_.data(), n_max_ + 1}; }
  std::span<double> rho_bb() noexcept { return {data_.data() + n_max_ + 1, n_max_ + 1}; }
  std::span<double> c_re() noexcept { return {data_.data() + 2 * (n_max_ + 1), n_max_}; }
  std::span<double> c_im() noexcept { return {data_.data() + 3 * n_max_ + 2, n_max_}; }
  std::span<const double> rho_aa() const noexcept { return {data_.data(), n_max_ + 1}; }
  std::span<const double> rho_bb() const noexcept { return {data_.data() + n_max_ + 1, n_max_ + 1}; }
  std::span<const double> c_re() const noexcept { return {data_.data() + 2 * (n_max_ + 1), n_max_}; }
  std::span<const double> c_im() const noexcept { return {data_.data() + 3 * n_max_ + 2, n_max_}; }

  std::complex<double> c(std::size_t n) const { return {c_re()[n], c_im()[n]}; }
  void set_c(std::size_t n, std::complex<double> value);

  std::span<double> packed() noexcept { return data_; }
  std::span<const double> packed() const noexcept { return data_; }

  double trace() const noexcept;
  double p_a() const noexcept;
  double p_b() const noexcept;

  // Both diagonals >= -eps and |c(n)|^2 <= aa(n)*bb(n+1) + eps for every pair.
  bool blocks_psd(double eps = kEpsPos) const noexcept;

  friend bool operator==(const JointBlockState&, const JointBlockState&) = default;

 private:
  std::size_t n_max_;
  std::vector<double> data_;
};

/// Generator of the master equation restricted to the block subspace. Built
/// once per (n_max, params); the field operators are those of the truncated
/// basis, so the top level has no upward transition.
class BlockGenerator {
 public:
  BlockGenerator(std::size_t n_max, const PhysicsParams& params, bool hamiltonian_on = true,
                 const kernels::KernelSet& k = kernels::active());

  std::size_t n_max() const noexcept { return n_max_; }
  const kernels::KernelSet& kernel_set() const noexcept { return *k_; }

  // Full block derivative on the packed layout.
  void operator()(std::span<const double> y, std::span<double> dy) const;

  // Birth-death derivative of a diagonal field (length n_max+1).
  void populations(std::span<const double> p, std::span<double> dp) const;

 private:
  std::size_t n_max_;
  bool hamiltonian_on_;
  const kernels::KernelSet* k_;
  std::vector<double> pop_diag_, pop_up_, pop_down_;
  std::vector<double> coh_diag_, coh_up_, coh_down_;
  std::vector<double> omega_;
};

JointBlockState inject_atom(const PhotonDistribution& field);

JointBlockState block_derivative(const JointBlockState& s, const PhysicsParams& params,
                                 bool hamiltonian_on = true);

PhotonDistribution trace_out_atom(const JointBlockState& s);

using BlockObserver = std::function<void(double t, const JointBlockState&)>;

/// Reusable transit integrator for one (n_max, params, tolerances) choice.
class TransitPropagator {
 public:
  TransitPropagator(std::size_t n_max, const PhysicsParams& params,
                    const IntegratorOptions& options = {},
                    const kernels::KernelSet& k = kernels::active());

  // Integrates for params.tau. Throws TraceDrift if the trace moves by more
  // than kEpsTrace.
  JointBlockState operator()(const JointBlockState& s, const BlockObserver& observe = {});

  const IntegratorStats& last_stats() const noexcept { return stats_; }

 private:
  PhysicsParams params_;
  BlockGenerator generator_;
  DormandPrince integrator_;
  IntegratorStats stats_;
};

/// Reusable idle-gap integrator (H = 0, diagonal field only).
class IdlePropagator {
 public:
  IdlePropagator(std::size_t n_max, const PhysicsParams& params,
                 const IntegratorOptions& options = {},
                 const kernels::KernelSet& k = kernels::active());

  // Result is renormalized; throws TruncationUnsafe if the top level fills.
  PhotonDistribution operator()(const PhotonDistribution& field, double t);

  const IntegratorStats& last_stats() const noexcept { return stats_; }

 private:
  BlockGenerator generator_;
  DormandPrince integrator_;
  IntegratorStats stats_;
};

JointBlockState evolve_transit(const JointBlockState& s, const PhysicsParams& params,
                               const IntegratorOptions& options = {});

PhotonDistribution evolve_idle(const PhotonDistribution& field, double t,
                               const PhysicsParams& params,
                               const IntegratorOptions& options = {});

}  // namespace micromaser
