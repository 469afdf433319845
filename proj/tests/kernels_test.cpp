#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "micromaser/dynamics.hpp"
#include "micromaser/kernels.hpp"
#include "oracle.hpp"

using namespace micromaser;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = unit(rng);
  return v;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::fabs(a[i] - b[i]) <= tol * (1.0 + std::fabs(a[i])));
  }
}

}  // namespace

TEST_CASE("active kernel set is one of the known ones") {
  const auto name = kernels::active().name;
  CHECK((name == "scalar" || name == "avx2"));
}

TEST_CASE("wide kernels match the scalar reference") {
  const kernels::KernelSet* wide = kernels::avx2();
  if (wide == nullptr) {
    MESSAGE("AVX2 not available on this host; equivalence test skipped");
    return;
  }
  const auto& ref = kernels::scalar();
  std::mt19937_64 rng(2024);

  for (std::size_t len : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 13u, 64u, 65u, 130u}) {
    CAPTURE(len);
    const auto diag = random_vector(len, rng), up = random_vector(len, rng),
               lo = random_vector(len, rng), x = random_vector(len, rng);
    std::vector<double> out_ref(len), out_wide(len);
    ref.tridiag(diag.data(), up.data(), lo.data(), x.data(), out_ref.data(), len);
    wide->tridiag(diag.data(), up.data(), lo.data(), x.data(), out_wide.data(), len);
    check_close(out_ref, out_wide, 1e-15);

    const auto omega = random_vector(len, rng), aa = random_vector(len, rng),
               bb = random_vector(len, rng), cim = random_vector(len, rng);
    auto daa_r = random_vector(len, rng), dbb_r = random_vector(len, rng),
         dc_r = random_vector(len, rng);
    auto daa_w = daa_r, dbb_w = dbb_r, dc_w = dc_r;
    ref.exchange(omega.data(), aa.data(), bb.data(), cim.data(), daa_r.data(), dbb_r.data(),
                 dc_r.data(), len);
    wide->exchange(omega.data(), aa.data(), bb.data(), cim.data(), daa_w.data(), dbb_w.data(),
                   dc_w.data(), len);
    check_close(daa_r, daa_w, 1e-15);
    check_close(dbb_r, dbb_w, 1e-15);
    check_close(dc_r, dc_w, 1e-15);

    const auto y = random_vector(len, rng);
    std::vector<std::vector<double>> stages;
    for (int j = 0; j < 6; ++j) stages.push_back(random_vector(len, rng));
    const double coeffs[6] = {71.0 / 57600, -71.0 / 16695, 71.0 / 1920, -17253.0 / 339200,
                              22.0 / 525, -1.0 / 40};
    std::vector<const double*> ptrs;
    for (const auto& s : stages) ptrs.push_back(s.data());
    for (std::size_t n_stages = 0; n_stages <= 6; ++n_stages) {
      std::vector<double> c_ref(len), c_wide(len);
      ref.combine(y.data(), 1e-3, coeffs, ptrs.data(), n_stages, c_ref.data(), len);
      wide->combine(y.data(), 1e-3, coeffs, ptrs.data(), n_stages, c_wide.data(), len);
      check_close(c_ref, c_wide, 1e-15);
    }

    const auto err = random_vector(len, rng);
    const double e_ref = ref.error_norm(err.data(), y.data(), x.data(), 1e-12, 1e-14, len);
    const double e_wide = wide->error_norm(err.data(), y.data(), x.data(), 1e-12, 1e-14, len);
    CHECK(e_wide == doctest::Approx(e_ref).epsilon(1e-14));
  }
}

TEST_CASE("block generator agrees across kernel sets") {
  const kernels::KernelSet* wide = kernels::avx2();
  if (wide == nullptr) return;
  std::mt19937_64 rng(5);
  const PhysicsParams params{3.9e4, 3.146, 0.033, 4e-5};
  for (std::size_t n_max : {1u, 2u, 5u, 12u, 64u}) {
    const auto s = testing::random_block_state(n_max, rng);
    BlockGenerator ref(n_max, params, true, kernels::scalar());
    BlockGenerator vec(n_max, params, true, *wide);
    JointBlockState d_ref(n_max), d_vec(n_max);
    ref(s.packed(), d_ref.packed());
    vec(s.packed(), d_vec.packed());
    double scale = 0.0;
    for (double x : d_ref.packed()) scale = std::fmax(scale, std::fabs(x));
    for (std::size_t i = 0; i < d_ref.packed().size(); ++i) {
      CHECK(std::fabs(d_ref.packed()[i] - d_vec.packed()[i]) <= 1e-15 * scale);
    }
  }
}

TEST_CASE("transit agrees across kernel sets") {
  const kernels::KernelSet* wide = kernels::avx2();
  if (wide == nullptr) return;
  const PhysicsParams params{3.9e4, 3.146, 0.033, 4e-5};
  const auto field = thermal_state(0.5, 40);
  TransitPropagator ref(40, params, {}, kernels::scalar());
  TransitPropagator vec(40, params, {}, *wide);
  const auto a = ref(inject_atom(field));
  const auto b = vec(inject_atom(field));
  for (std::size_t i = 0; i < a.packed().size(); ++i) {
    CHECK(std::fabs(a.packed()[i] - b.packed()[i]) < 1e-11);
  }
}
