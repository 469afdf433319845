#include <doctest.h>

#include <cmath>
#include <random>

#include "micromaser/error.hpp"
#include "micromaser/fock.hpp"

using namespace micromaser;

namespace {

PhotonDistribution poisson(double mean, std::size_t n_max) {
  std::vector<double> p(n_max + 1);
  double term = std::exp(-mean);
  for (std::size_t n = 0; n <= n_max; ++n) {
    p[n] = term;
    term *= mean / static_cast<double>(n + 1);
  }
  return renormalize(PhotonDistribution(p));
}

}  // namespace

TEST_CASE("thermal state") {
  SUBCASE("vacuum at zero temperature") {
    const auto d = thermal_state(0.0, 64);
    CHECK(d[0] == 1.0);
    for (std::size_t n = 1; n <= 64; ++n) CHECK(d[n] == 0.0);
    CHECK(d.normalized());
  }
  SUBCASE("cavity at 0.3 K") {
    const auto d = thermal_state(0.033, 64);
    CHECK(std::fabs(statistics(d).v - 1.0164) < 5e-4);
    CHECK(d[0] == doctest::Approx(0.968054211035818).epsilon(1e-15));
  }
  SUBCASE("one mean photon") {
    CHECK(std::fabs(statistics(thermal_state(1.0, 64)).v - std::sqrt(2.0)) < 1e-9);
  }
  SUBCASE("v = sqrt(1 + n_bar)") {
    for (double n_bar : {0.0, 0.033, 0.1, 1.0}) {
      const auto s = statistics(thermal_state(n_bar, 64));
      if (n_bar == 0.0) {
        CHECK(s.v == 0.0);  // vacuum convention
      } else {
        CHECK(std::fabs(s.v - std::sqrt(1.0 + n_bar)) < 1e-6);
      }
    }
  }
  SUBCASE("hot field does not fit") {
    CHECK_THROWS_AS(thermal_state(10.0, 64), Error);
    try {
      thermal_state(10.0, 64);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::TruncationUnsafe);
    }
  }
}

TEST_CASE("statistics") {
  CHECK(statistics(fock_state(5, 64)).v == 0.0);
  CHECK(statistics(fock_state(5, 64)).mean_n == 5.0);
  CHECK(std::fabs(statistics(poisson(4.0, 64)).v - 1.0) < 1e-6);
  CHECK(statistics(fock_state(0, 8)).v == 0.0);

  SUBCASE("zero tail entries do not matter") {
    const auto d = poisson(3.0, 40);
    std::vector<double> longer(d.probabilities().begin(), d.probabilities().end());
    longer.resize(80, 0.0);
    const auto a = statistics(d);
    const auto b = statistics(PhotonDistribution(longer, true));
    CHECK(a.mean_n == b.mean_n);
    CHECK(a.var_n == b.var_n);
    CHECK(a.v == b.v);
  }
  SUBCASE("variance bounded by n_max^2") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> p(17);
      for (auto& x : p) x = unit(rng) < 0.3 ? 0.0 : unit(rng);
      p[trial % 17] += 0.1;
      const auto s = statistics(renormalize(PhotonDistribution(p)));
      CHECK(s.var_n >= 0.0);
      CHECK(s.var_n <= 16.0 * 16.0);
      CHECK(s.v >= 0.0);
    }
  }
}

TEST_CASE("renormalize") {
  const auto same = renormalize(PhotonDistribution({0.5, 0.5}));
  CHECK(same[0] == 0.5);
  CHECK(same[1] == 0.5);

  const auto halves = renormalize(PhotonDistribution({1.0, 1.0}));
  CHECK(halves[0] == 0.5);
  CHECK(halves[1] == 0.5);

  const auto clamped = renormalize(PhotonDistribution({1.0 - 1e-13, -1e-13}));
  CHECK(clamped[0] == 1.0);
  CHECK(clamped[1] == 0.0);

  CHECK_THROWS_AS(renormalize(PhotonDistribution({0.0, 0.0})), Error);
  CHECK_THROWS_AS(renormalize(PhotonDistribution({1.0, -1e-6})), Error);

  SUBCASE("idempotent") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> p(9);
      for (auto& x : p) x = unit(rng);
      const auto once = renormalize(PhotonDistribution(p));
      const auto twice = renormalize(once);
      for (std::size_t n = 0; n < p.size(); ++n) {
        CHECK(twice[n] == doctest::Approx(once[n]).epsilon(4e-16));
      }
      CHECK(std::fabs(once.sum() - 1.0) < kEpsTrace);
    }
  }
}

TEST_CASE("truncation flag") {
  CHECK(fock_state(3, 10).truncation_safe());
  CHECK_FALSE(fock_state(10, 10).truncation_safe());
  CHECK_THROWS_AS(require_truncation_safe(fock_state(10, 10), "test"), Error);
}

TEST_CASE("serialization is loss-free") {
  const auto d = thermal_state(0.033, 64);
  const auto back = PhotonDistribution::from_csv(d.to_csv());
  REQUIRE(back.size() == d.size());
  for (std::size_t n = 0; n < d.size(); ++n) CHECK(back[n] == d[n]);
  CHECK(d.to_csv().rfind("n,p\n0,0.96805421103581", 0) == 0);
  CHECK(PhotonDistribution({0.25, 0.75}).to_json() == "[0.25,0.75]");
}
