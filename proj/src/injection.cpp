#include "micromaser/injection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "micromaser/format.hpp"

namespace micromaser {

RandomStream::RandomStream(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffU),
                    static_cast<std::uint32_t>(seed >> 32), stream};
  engine_.seed(seq);
}

double RandomStream::uniform_open() {
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

ArrivalSampler::ArrivalSampler(double mu, double tau, RandomStream stream)
    : mu_(mu), tau_(tau), stream_(std::move(stream)) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw Error(ErrorKind::InvalidArgument, "mean interarrival time must be > 0");
  }
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorKind::InvalidArgument, "transit time must be >= 0");
  }
}

std::string_view to_string(AtomLevel level) noexcept {
  return level == AtomLevel::Upper ? "upper" : "lower";
}

std::string_view to_string(MeasurementMode mode) noexcept {
  return mode == MeasurementMode::Nonselective ? "nonselective" : "selective";
}

MeasurementMode parse_measurement_mode(std::string_view text) {
  if (text == "nonselective") return MeasurementMode::Nonselective;
  if (text == "selective") return MeasurementMode::Selective;
  throw Error(ErrorKind::Config, "measurement_mode must be nonselective or selective, got '" +
                                     std::string(text) + "'");
}

MeasurementOutcome MeasurementOutcome::from_p_a(double p_a) {
  MeasurementOutcome out;
  out.p_a = std::clamp(p_a, 0.0, 1.0);
  out.p_b = 1.0 - out.p_a;
  out.projection_noise = out.p_a * (1.0 - out.p_a);
  return out;
}

Measurement measure_nonselective(const JointBlockState& s) {
  return {MeasurementOutcome::from_p_a(s.p_a()), trace_out_atom(s)};
}

Measurement measure_selective(const JointBlockState& s, RandomStream& stream) {
  auto outcome = MeasurementOutcome::from_p_a(s.p_a());
  const double u = stream.uniform_open();
  const bool upper = u < outcome.p_a;
  const double branch = upper ? outcome.p_a : outcome.p_b;
  if (branch < 1e-15) {
    throw Error(ErrorKind::DegenerateBranch,
                "selected branch has probability " + format_shortest(branch));
  }
  outcome.collapsed = upper ? AtomLevel::Upper : AtomLevel::Lower;
  const auto source = upper ? s.rho_aa() : s.rho_bb();
  PhotonDistribution field(std::vector<double>(source.begin(), source.end()));
  return {outcome, renormalize(field)};
}

}  // namespace micromaser
