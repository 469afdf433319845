#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "micromaser/dynamics.hpp"
#include "micromaser/error.hpp"
#include "micromaser/injection.hpp"
#include "oracle.hpp"

using namespace micromaser;

TEST_CASE("uniform deviates are inside the open interval") {
  RandomStream stream(123);
  for (int i = 0; i < 100000; ++i) {
    const double x = stream.uniform_open();
    CHECK_UNARY(x > 0.0 && x < 1.0);
  }
}

TEST_CASE("same seed gives the same stream, different streams differ") {
  RandomStream a(42), b(42), c(42, 1), d(43);
  bool all_equal = true, differs_stream = false, differs_seed = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform_open();
    all_equal = all_equal && x == b.uniform_open();
    differs_stream = differs_stream || x != c.uniform_open();
    differs_seed = differs_seed || x != d.uniform_open();
  }
  CHECK(all_equal);
  CHECK(differs_stream);
  CHECK(differs_seed);
}

TEST_CASE("interarrival inversion") {
  ArrivalSampler unit_mu(1.0, 0.0, RandomStream(1));
  CHECK(unit_mu.sample_with([] { return std::exp(-1.0); }) == doctest::Approx(1.0).epsilon(1e-15));

  ArrivalSampler two(2.0, 0.0, RandomStream(1));
  CHECK(two.sample_with([] { return 0.5; }) ==
        doctest::Approx(1.3862943611198906).epsilon(1e-15));
}

TEST_CASE("headways shorter than the transit are redrawn and counted") {
  ArrivalSampler sampler(1.0, 0.5, RandomStream(1));
  // -ln(0.9) = 0.105 < 0.5 is rejected, -ln(0.1) = 2.303 is accepted.
  std::vector<double> deviates{0.9, 0.0, 0.1};
  std::size_t i = 0;
  const double t_cav = sampler.sample_with([&] { return deviates[i++]; });
  CHECK(t_cav == doctest::Approx(-std::log(0.1) - 0.5).epsilon(1e-15));
  CHECK(sampler.rejected_draws() == 1);
  CHECK(sampler.total_draws() == 3);
}

TEST_CASE("pathological rejection") {
  ArrivalSampler sampler(1e-9, 1.0, RandomStream(5));
  try {
    sampler.sample();
    FAIL("expected rejection error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PathologicalRejection);
  }
}

TEST_CASE("unconditioned sampling reproduces the exponential mean") {
  const double mu = 0.01;
  ArrivalSampler sampler(mu, 0.0, RandomStream(99));
  const int draws = 200000;
  double sum = 0.0;
  for (int i = 0; i < draws; ++i) sum += sampler.sample();
  CHECK(std::fabs(sum / draws - mu) / mu < 3.0 / std::sqrt(static_cast<double>(draws)));
  CHECK(sampler.rejected_draws() == 0);
}

TEST_CASE("invalid sampler parameters") {
  CHECK_THROWS_AS(ArrivalSampler(0.0, 1.0, RandomStream(1)), Error);
  CHECK_THROWS_AS(ArrivalSampler(1.0, -1.0, RandomStream(1)), Error);
}

TEST_CASE("projection noise") {
  CHECK(MeasurementOutcome::from_p_a(0.8).projection_noise == doctest::Approx(0.16).epsilon(1e-15));
  CHECK(MeasurementOutcome::from_p_a(0.5).projection_noise == 0.25);
  CHECK(MeasurementOutcome::from_p_a(1.0).projection_noise == 0.0);
  CHECK(MeasurementOutcome::from_p_a(0.0).projection_noise == 0.0);
  for (int i = 1; i < 1000; ++i) {
    const double p = i / 1000.0;
    const auto o = MeasurementOutcome::from_p_a(p);
    CHECK(o.projection_noise == p * (1.0 - p));
    CHECK(o.projection_noise > 0.0);
    CHECK(o.projection_noise <= 0.25);
  }
}

TEST_CASE("nonselective measurement") {
  const auto field = thermal_state(0.033, 64);
  const auto m = measure_nonselective(inject_atom(field));
  CHECK(m.outcome.p_a == 1.0);
  CHECK(m.outcome.projection_noise == 0.0);
  CHECK_FALSE(m.outcome.collapsed.has_value());
  CHECK(m.field == field);

  const PhysicsParams flop{std::numbers::pi / 2 / 4e-5, 0.0, 0.0, 4e-5};
  const auto exit = evolve_transit(inject_atom(thermal_state(0.0, 8)), flop);
  const auto flopped = measure_nonselective(exit);
  CHECK(flopped.outcome.p_a < 1e-10);
  CHECK(flopped.outcome.projection_noise < 1e-10);
}

TEST_CASE("selective measurement") {
  JointBlockState s(4);
  s.rho_aa()[0] = 0.8;
  s.rho_bb()[1] = 0.2;

  SUBCASE("certain outcomes") {
    JointBlockState upper(4);
    upper.rho_aa()[2] = 1.0;
    RandomStream stream(1);
    for (int i = 0; i < 100; ++i) {
      const auto m = measure_selective(upper, stream);
      CHECK(*m.outcome.collapsed == AtomLevel::Upper);
      CHECK(m.field[2] == 1.0);
    }
    JointBlockState lower(4);
    lower.rho_bb()[3] = 1.0;
    for (int i = 0; i < 100; ++i) {
      CHECK(*measure_selective(lower, stream).outcome.collapsed == AtomLevel::Lower);
    }
  }
  SUBCASE("branch frequency follows p_a") {
    RandomStream stream(2718);
    const int trials = 100000;
    int upper = 0;
    for (int i = 0; i < trials; ++i) {
      const auto m = measure_selective(s, stream);
      CHECK(m.outcome.p_a == doctest::Approx(0.8));
      if (*m.outcome.collapsed == AtomLevel::Upper) {
        ++upper;
        CHECK(m.field[0] == 1.0);
      } else {
        CHECK(m.field[1] == 1.0);
      }
    }
    CHECK(std::fabs(static_cast<double>(upper) / trials - 0.8) < 0.004);
  }
  SUBCASE("branch average reproduces the traced field") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
      const auto state = testing::random_block_state(9, rng);
      const auto traced = measure_nonselective(state);
      const double p_a = traced.outcome.p_a;
      // Force each branch in turn through the deviate.
      JointBlockState copy = state;
      RandomStream stream(static_cast<std::uint64_t>(trial));
      Measurement up{}, down{};
      bool have_up = false, have_down = false;
      for (int draw = 0; draw < 200 && !(have_up && have_down); ++draw) {
        auto m = measure_selective(copy, stream);
        if (*m.outcome.collapsed == AtomLevel::Upper && !have_up) {
          up = std::move(m);
          have_up = true;
        } else if (*m.outcome.collapsed == AtomLevel::Lower && !have_down) {
          down = std::move(m);
          have_down = true;
        }
      }
      REQUIRE(have_up);
      REQUIRE(have_down);
      for (std::size_t n = 0; n <= 9; ++n) {
        const double mixed = p_a * up.field[n] + (1.0 - p_a) * down.field[n];
        CHECK(std::fabs(mixed - traced.field[n]) < 1e-14);
      }
      CHECK(std::fabs(up.field.sum() - 1.0) < kEpsTrace);
      CHECK(std::fabs(down.field.sum() - 1.0) < kEpsTrace);
    }
  }
}
