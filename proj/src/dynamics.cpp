#include "micromaser/dynamics.hpp"

#include <cmath>
#include <string>

#include "micromaser/error.hpp"
#include "micromaser/format.hpp"

namespace micromaser {

void PhysicsParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); };
  if (!(g >= 0.0) || !std::isfinite(g)) fail("g must be >= 0");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) fail("kappa must be >= 0");
  if (!(n_bar_th >= 0.0) || !std::isfinite(n_bar_th)) fail("n_bar_th must be >= 0");
  if (!(tau > 0.0) || !std::isfinite(tau)) fail("tau must be > 0");
}

JointBlockState::JointBlockState(std::size_t n_max)
    : n_max_(n_max), data_(packed_size(n_max), 0.0) {}

void JointBlockState::set_c(std::size_t n, std::complex<double> value) {
  c_re()[n] = value.real();
  c_im()[n] = value.imag();
}

double JointBlockState::p_a() const noexcept {
  double s = 0.0;
  for (double x : rho_aa()) s += x;
  return s;
}

double JointBlockState::p_b() const noexcept {
  double s = 0.0;
  for (double x : rho_bb()) s += x;
  return s;
}

double JointBlockState::trace() const noexcept { return p_a() + p_b(); }

bool JointBlockState::blocks_psd(double eps) const noexcept {
  const auto aa = rho_aa();
  const auto bb = rho_bb();
  for (std::size_t n = 0; n <= n_max_; ++n) {
    if (aa[n] < -eps || bb[n] < -eps) return false;
  }
  for (std::size_t n = 0; n < n_max_; ++n) {
    if (std::norm(c(n)) > aa[n] * bb[n + 1] + eps) return false;
  }
  return true;
}

BlockGenerator::BlockGenerator(std::size_t n_max, const PhysicsParams& params,
                               bool hamiltonian_on, const kernels::KernelSet& k)
    : n_max_(n_max), hamiltonian_on_(hamiltonian_on), k_(&k) {
  params.validate();
  const double loss = params.kappa * (1.0 + params.n_bar_th);
  const double gain = params.kappa * params.n_bar_th;
  const std::size_t levels = n_max + 1;
  // Diagonal of a a^dagger on the truncated basis: a^dagger|N> = 0.
  auto raise = [n_max](std::size_t n) { return n < n_max ? static_cast<double>(n + 1) : 0.0; };

  pop_diag_.resize(levels);
  pop_up_.resize(levels);
  pop_down_.resize(levels);
  for (std::size_t n = 0; n < levels; ++n) {
    const auto dn = static_cast<double>(n);
    pop_diag_[n] = -2.0 * loss * dn - 2.0 * gain * raise(n);
    pop_up_[n] = n < n_max ? 2.0 * loss * (dn + 1.0) : 0.0;
    pop_down_[n] = 2.0 * gain * dn;
  }

  coh_diag_.resize(n_max);
  coh_up_.resize(n_max);
  coh_down_.resize(n_max);
  omega_.resize(n_max);
  for (std::size_t n = 0; n < n_max; ++n) {
    const auto dn = static_cast<double>(n);
    coh_diag_[n] = -loss * (2.0 * dn + 1.0) - gain * (raise(n) + raise(n + 1));
    coh_up_[n] = n + 1 < n_max ? 2.0 * loss * std::sqrt((dn + 1.0) * (dn + 2.0)) : 0.0;
    coh_down_[n] = 2.0 * gain * std::sqrt(dn * (dn + 1.0));
    omega_[n] = hamiltonian_on ? params.g * std::sqrt(dn + 1.0) : 0.0;
  }
}

void BlockGenerator::populations(std::span<const double> p, std::span<double> dp) const {
  k_->tridiag(pop_diag_.data(), pop_up_.data(), pop_down_.data(), p.data(), dp.data(),
              n_max_ + 1);
}

void BlockGenerator::operator()(std::span<const double> y, std::span<double> dy) const {
  const std::size_t levels = n_max_ + 1;
  const double* aa = y.data();
  const double* bb = aa + levels;
  const double* cre = bb + levels;
  const double* cim = cre + n_max_;
  double* daa = dy.data();
  double* dbb = daa + levels;
  double* dcre = dbb + levels;
  double* dcim = dcre + n_max_;

  k_->tridiag(pop_diag_.data(), pop_up_.data(), pop_down_.data(), aa, daa, levels);
  k_->tridiag(pop_diag_.data(), pop_up_.data(), pop_down_.data(), bb, dbb, levels);
  k_->tridiag(coh_diag_.data(), coh_up_.data(), coh_down_.data(), cre, dcre, n_max_);
  k_->tridiag(coh_diag_.data(), coh_up_.data(), coh_down_.data(), cim, dcim, n_max_);
  if (hamiltonian_on_) {
    k_->exchange(omega_.data(), aa, bb + 1, cim, daa, dbb + 1, dcim, n_max_);
  }
}

JointBlockState inject_atom(const PhotonDistribution& field) {
  JointBlockState s(field.n_max());
  const auto p = field.probabilities();
  std::copy(p.begin(), p.end(), s.rho_aa().begin());
  return s;
}

JointBlockState block_derivative(const JointBlockState& s, const PhysicsParams& params,
                                 bool hamiltonian_on) {
  BlockGenerator generator(s.n_max(), params, hamiltonian_on);
  JointBlockState out(s.n_max());
  generator(s.packed(), out.packed());
  return out;
}

PhotonDistribution trace_out_atom(const JointBlockState& s) {
  std::vector<double> p(s.n_max() + 1);
  const auto aa = s.rho_aa();
  const auto bb = s.rho_bb();
  for (std::size_t n = 0; n < p.size(); ++n) p[n] = aa[n] + bb[n];
  return renormalize(PhotonDistribution(std::move(p)));
}

TransitPropagator::TransitPropagator(std::size_t n_max, const PhysicsParams& params,
                                     const IntegratorOptions& options,
                                     const kernels::KernelSet& k)
    : params_(params),
      generator_(n_max, params, true, k),
      integrator_(JointBlockState::packed_size(n_max), options, k) {}

JointBlockState TransitPropagator::operator()(const JointBlockState& s,
                                              const BlockObserver& observe) {
  if (s.n_max() != generator_.n_max()) {
    throw Error(ErrorKind::InvalidArgument, "block state truncation does not match propagator");
  }
  JointBlockState out = s;
  const double trace_in = s.trace();
  if (observe) {
    JointBlockState view(s.n_max());
    stats_ = integrator_.integrate(generator_, out.packed(), params_.tau,
                                   [&](double t, std::span<const double> y) {
                                     std::copy(y.begin(), y.end(), view.packed().begin());
                                     observe(t, view);
                                   });
  } else {
    stats_ = integrator_.integrate(generator_, out.packed(), params_.tau);
  }
  const double drift = std::fabs(out.trace() - trace_in);
  if (drift > kEpsTrace) {
    throw Error(ErrorKind::TraceDrift, "transit trace drift " + format_shortest(drift));
  }
  return out;
}

IdlePropagator::IdlePropagator(std::size_t n_max, const PhysicsParams& params,
                               const IntegratorOptions& options, const kernels::KernelSet& k)
    : generator_(n_max, params, false, k), integrator_(n_max + 1, options, k) {}

PhotonDistribution IdlePropagator::operator()(const PhotonDistribution& field, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "idle duration must be >= 0");
  if (field.n_max() != generator_.n_max()) {
    throw Error(ErrorKind::InvalidArgument, "field truncation does not match propagator");
  }
  std::vector<double> p(field.probabilities().begin(), field.probabilities().end());
  stats_ = integrator_.integrate(
      [this](std::span<const double> y, std::span<double> dy) { generator_.populations(y, dy); },
      std::span<double>(p), t);
  auto out = renormalize(PhotonDistribution(std::move(p)));
  require_truncation_safe(out, "idle evolution");
  return out;
}

JointBlockState evolve_transit(const JointBlockState& s, const PhysicsParams& params,
                               const IntegratorOptions& options) {
  TransitPropagator propagate(s.n_max(), params, options);
  return propagate(s);
}

PhotonDistribution evolve_idle(const PhotonDistribution& field, double t,
                               const PhysicsParams& params, const IntegratorOptions& options) {
  IdlePropagator propagate(field.n_max(), params, options);
  return propagate(field, t);
}

}  // namespace micromaser
