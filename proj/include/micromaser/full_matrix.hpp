#pragma once

// Brute-force joint density matrix over dimension 2(n_max+1), used to
// cross-check the block representation. Basis order: |a,0>..|a,N>, |b,0>..|b,N>.

#include <Eigen/Dense>

#include "micromaser/dynamics.hpp"

namespace micromaser {

struct FullDensityMatrix {
  std::size_t n_max = 0;
  Eigen::MatrixXcd m;

  static FullDensityMatrix zero(std::size_t n_max);

  std::size_t index_a(std::size_t n) const noexcept { return n; }
  std::size_t index_b(std::size_t n) const noexcept { return n_max + 1 + n; }
};

FullDensityMatrix embed(const JointBlockState& s);

// Reads back populations and the <a,n|rho|b,n+1> coherences; other entries are ignored.
JointBlockState project(const FullDensityMatrix& f);

// Dense Lindblad generator with cached operator matrices.
class FullLiouvillian {
 public:
  FullLiouvillian(std::size_t n_max, const PhysicsParams& params, bool hamiltonian_on);
  FullDensityMatrix operator()(const FullDensityMatrix& f) const;

 private:
  std::size_t n_max_;
  bool hamiltonian_on_;
  double loss_;
  double gain_;
  Eigen::MatrixXcd h_, a_, ad_, ada_, aad_;
};

// Lindblad right-hand side with truncated field operators; H = g(S+ a + S- a^dagger)
// is included only when hamiltonian_on.
FullDensityMatrix full_derivative(const FullDensityMatrix& f, const PhysicsParams& params,
                                  bool hamiltonian_on);

}  // namespace micromaser
