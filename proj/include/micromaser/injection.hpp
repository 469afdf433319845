#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

#include "micromaser/dynamics.hpp"
#include "micromaser/error.hpp"
#include "micromaser/fock.hpp"

namespace micromaser {

/// Seeded uniform source. The engine is std::mt19937_64 seeded through
/// std::seed_seq{seed_lo32, seed_hi32, stream}; deviates use the top 53 bits
/// as (k + 0.5) * 2^-53, so they lie strictly inside (0, 1).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint32_t stream = 0);

  double uniform_open();

 private:
  std::mt19937_64 engine_;
};

/// Poisson arrivals with headway t_R = -mu ln(x), conditioned on t_R >= tau so
/// that at most one atom is in the cavity; the idle gap is t_R - tau.
class ArrivalSampler {
 public:
  static constexpr std::uint64_t kMaxConsecutiveRejections = 1'000'000;

  ArrivalSampler(double mu, double tau, RandomStream stream);

  double mu() const noexcept { return mu_; }
  double tau() const noexcept { return tau_; }
  std::uint64_t rejected_draws() const noexcept { return rejected_; }
  std::uint64_t total_draws() const noexcept { return draws_; }

  // Returns the idle gap t_cav.
  double sample() {
    return sample_with([this] { return stream_.uniform_open(); });
  }

  // Same as sample() but with deviates supplied by the caller.
  template <class Uniform>
  double sample_with(Uniform&& draw) {
    for (std::uint64_t consecutive = 0; consecutive < kMaxConsecutiveRejections; ++consecutive) {
      const double x = draw();
      ++draws_;
      if (!(x > 0.0 && x <= 1.0)) continue;  // ln(0) guard
      const double headway = -mu_ * std::log(x);
      if (headway < tau_) {
        ++rejected_;
        continue;
      }
      return headway - tau_;
    }
    throw Error(ErrorKind::PathologicalRejection,
                "1e6 consecutive arrival draws fell inside the transit time; mean interarrival "
                "is far shorter than tau");
  }

 private:
  double mu_;
  double tau_;
  RandomStream stream_;
  std::uint64_t rejected_ = 0;
  std::uint64_t draws_ = 0;
};

enum class AtomLevel : std::uint8_t { Upper, Lower };
enum class MeasurementMode : std::uint8_t { Nonselective, Selective };

std::string_view to_string(AtomLevel level) noexcept;
std::string_view to_string(MeasurementMode mode) noexcept;
MeasurementMode parse_measurement_mode(std::string_view text);

struct MeasurementOutcome {
  double p_a = 1.0;
  double p_b = 0.0;
  double projection_noise = 0.0;  // p_a (1 - p_a)
  std::optional<AtomLevel> collapsed;

  static MeasurementOutcome from_p_a(double p_a);
};

struct Measurement {
  MeasurementOutcome outcome;
  PhotonDistribution field;
};

// Traces the atom out; the field keeps both branches.
Measurement measure_nonselective(const JointBlockState& s);

// Samples the atomic level with probability p_a and keeps the matching field branch.
Measurement measure_selective(const JointBlockState& s, RandomStream& stream);

}  // namespace micromaser
