#include "micromaser/full_matrix.hpp"

#include <cmath>

namespace micromaser {

namespace {

struct Operators {
  Eigen::MatrixXcd h;
  Eigen::MatrixXcd a;
  Eigen::MatrixXcd ad;
};

Operators build_operators(std::size_t n_max, double g) {
  const auto levels = static_cast<Eigen::Index>(n_max + 1);
  Eigen::MatrixXcd field_a = Eigen::MatrixXcd::Zero(levels, levels);
  for (Eigen::Index n = 1; n < levels; ++n) field_a(n - 1, n) = std::sqrt(static_cast<double>(n));

  const auto dim = 2 * levels;
  Operators ops;
  ops.a = Eigen::MatrixXcd::Zero(dim, dim);
  ops.a.topLeftCorner(levels, levels) = field_a;
  ops.a.bottomRightCorner(levels, levels) = field_a;
  ops.ad = ops.a.adjoint();

  // S+ = |a><b| couples the b-block columns into the a-block rows.
  ops.h = Eigen::MatrixXcd::Zero(dim, dim);
  ops.h.topRightCorner(levels, levels) = g * field_a;
  ops.h.bottomLeftCorner(levels, levels) = g * field_a.adjoint();
  return ops;
}

}  // namespace

FullDensityMatrix FullDensityMatrix::zero(std::size_t n_max) {
  const auto dim = static_cast<Eigen::Index>(2 * (n_max + 1));
  return {n_max, Eigen::MatrixXcd::Zero(dim, dim)};
}

FullDensityMatrix embed(const JointBlockState& s) {
  auto f = FullDensityMatrix::zero(s.n_max());
  const auto aa = s.rho_aa();
  const auto bb = s.rho_bb();
  for (std::size_t n = 0; n <= s.n_max(); ++n) {
    f.m(f.index_a(n), f.index_a(n)) = aa[n];
    f.m(f.index_b(n), f.index_b(n)) = bb[n];
  }
  for (std::size_t n = 0; n < s.n_max(); ++n) {
    f.m(f.index_a(n), f.index_b(n + 1)) = s.c(n);
    f.m(f.index_b(n + 1), f.index_a(n)) = std::conj(s.c(n));
  }
  return f;
}

JointBlockState project(const FullDensityMatrix& f) {
  JointBlockState s(f.n_max);
  auto aa = s.rho_aa();
  auto bb = s.rho_bb();
  for (std::size_t n = 0; n <= f.n_max; ++n) {
    aa[n] = f.m(f.index_a(n), f.index_a(n)).real();
    bb[n] = f.m(f.index_b(n), f.index_b(n)).real();
  }
  for (std::size_t n = 0; n < f.n_max; ++n) s.set_c(n, f.m(f.index_a(n), f.index_b(n + 1)));
  return s;
}

FullLiouvillian::FullLiouvillian(std::size_t n_max, const PhysicsParams& params,
                                 bool hamiltonian_on)
    : n_max_(n_max),
      hamiltonian_on_(hamiltonian_on),
      loss_(params.kappa * (1.0 + params.n_bar_th)),
      gain_(params.kappa * params.n_bar_th) {
  params.validate();
  Operators ops = build_operators(n_max, params.g);
  h_ = std::move(ops.h);
  a_ = std::move(ops.a);
  ad_ = std::move(ops.ad);
  ada_ = ad_ * a_;
  aad_ = a_ * ad_;
}

FullDensityMatrix FullLiouvillian::operator()(const FullDensityMatrix& f) const {
  const Eigen::MatrixXcd& rho = f.m;
  const std::complex<double> i_unit(0.0, 1.0);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  if (hamiltonian_on_) d.noalias() -= i_unit * (h_ * rho - rho * h_);
  d -= loss_ * (ada_ * rho - 2.0 * a_ * rho * ad_ + rho * ada_);
  d -= gain_ * (aad_ * rho - 2.0 * ad_ * rho * a_ + rho * aad_);
  return {n_max_, std::move(d)};
}

FullDensityMatrix full_derivative(const FullDensityMatrix& f, const PhysicsParams& params,
                                  bool hamiltonian_on) {
  return FullLiouvillian(f.n_max, params, hamiltonian_on)(f);
}

}  // namespace micromaser
