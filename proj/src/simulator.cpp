#include "micromaser/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "micromaser/error.hpp"

namespace micromaser {

void SimConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::Config, what); };
  try {
    physics.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  if (!seed) fail("seed is required");
  if (!(flux_rate > 0.0) || !std::isfinite(flux_rate)) fail("flux_rate must be > 0");
  if (n_atoms < 1) fail("n_atoms must be >= 1");
  if (n_max < 1) fail("n_max must be >= 1");
  if (!(rtol > 0.0) || !(atol > 0.0)) fail("rtol and atol must be > 0");
  for (auto i : snapshot_atoms) {
    if (i < 1 || i > n_atoms) {
      fail("snapshot atom " + std::to_string(i) + " outside 1.." + std::to_string(n_atoms));
    }
  }
  if (initial_fock && *initial_fock > n_max) fail("initial_fock exceeds n_max");
}

PhotonDistribution initial_field(const SimConfig& config) {
  if (config.initial_fock) return fock_state(*config.initial_fock, config.n_max);
  return thermal_state(config.physics.n_bar_th, config.n_max);
}

RunTotals run(const SimConfig& config, RunSink& sink) {
  config.validate();
  const IntegratorOptions options{config.rtol, config.atol};
  TransitPropagator transit(config.n_max, config.physics, options);
  IdlePropagator idle(config.n_max, config.physics, options);
  ArrivalSampler arrivals(1.0 / config.flux_rate, config.physics.tau, RandomStream(*config.seed, 0));
  RandomStream collapse(*config.seed, 1);

  auto snapshots = config.snapshot_atoms;
  std::sort(snapshots.begin(), snapshots.end());
  auto next_snapshot = snapshots.begin();

  PhotonDistribution field = initial_field(config);
  double clock = 0.0;  // exit time of the previous atom
  for (std::uint64_t i = 1; i <= config.n_atoms; ++i) {
    try {
      AtomRecord record;
      record.index = i;
      record.t_cav_prev = arrivals.sample();
      record.t_arrival = clock + record.t_cav_prev;
      clock = record.t_arrival + config.physics.tau;

      field = idle(field, record.t_cav_prev);
      const JointBlockState exit = transit(inject_atom(field));
      Measurement m = config.measurement_mode == MeasurementMode::Selective
                          ? measure_selective(exit, collapse)
                          : measure_nonselective(exit);
      field = std::move(m.field);
      require_truncation_safe(field, "transit");

      const FieldStatistics stats = statistics(field);
      record.p_a = m.outcome.p_a;
      record.projection_noise = m.outcome.projection_noise;
      record.collapsed = m.outcome.collapsed;
      record.mean_n = stats.mean_n;
      record.v = stats.v;
      sink.on_record(record);

      while (next_snapshot != snapshots.end() && *next_snapshot == i) {
        sink.on_snapshot({i, field});
        ++next_snapshot;
      }
    } catch (const Error& e) {
      throw Error(e.kind(), "atom " + std::to_string(i) + ": " + e.what());
    }
  }
  return {field, arrivals.rejected_draws(), arrivals.total_draws()};
}

RunResult run(const SimConfig& config) {
  struct Collector final : RunSink {
    RunResult* out;
    void on_record(const AtomRecord& r) override { out->records.push_back(r); }
    void on_snapshot(const Snapshot& s) override { out->snapshots.push_back(s); }
  };
  RunResult result;
  result.records.reserve(config.n_atoms);
  Collector collector;
  collector.out = &result;
  RunTotals totals = run(config, collector);
  result.final_field = std::move(totals.final_field);
  result.rejected_draws = totals.rejected_draws;
  return result;
}

std::vector<TrapCondition> trapping_photon_numbers(double g_tau, int k_max) {
  if (!(g_tau > 0.0) || !std::isfinite(g_tau)) {
    throw Error(ErrorKind::InvalidArgument, "g_tau must be > 0");
  }
  std::vector<TrapCondition> traps;
  for (int k = 1; k <= k_max; ++k) {
    TrapCondition t;
    t.k = k;
    t.g_tau = g_tau;
    const double root = k * std::numbers::pi / g_tau;
    t.n0_real = root * root - 1.0;
    t.n0_nearest = static_cast<std::uint64_t>(std::max(0.0, std::round(t.n0_real)));
    traps.push_back(t);
  }
  return traps;
}

WindowAccumulator::WindowAccumulator(std::uint64_t first, std::uint64_t last) {
  if (first > last) throw Error(ErrorKind::InvalidArgument, "window start after window end");
  s_.first = first;
  s_.last = last;
}

void WindowAccumulator::add(const AtomRecord& r) {
  if (r.index < s_.first || r.index > s_.last) return;
  if (s_.count == 0) {
    s_.min_v = r.v;
    s_.max_v = r.v;
  }
  ++s_.count;
  sum_p_a_ += r.p_a;
  sum_v_ += r.v;
  sum_dj2_ += r.projection_noise;
  sum_n_ += r.mean_n;
  s_.min_v = std::min(s_.min_v, r.v);
  s_.max_v = std::max(s_.max_v, r.v);
}

WindowSummary WindowAccumulator::result() const {
  if (s_.count == 0) {
    throw Error(ErrorKind::InvalidArgument, "summary window " + std::to_string(s_.first) + ".." +
                                                std::to_string(s_.last) + " holds no records");
  }
  WindowSummary out = s_;
  const auto n = static_cast<double>(s_.count);
  out.mean_p_a = sum_p_a_ / n;
  out.mean_v = sum_v_ / n;
  out.mean_projection_noise = sum_dj2_ / n;
  out.mean_n = sum_n_ / n;
  return out;
}

WindowSummary summarize(const std::vector<AtomRecord>& records, std::uint64_t first,
                        std::uint64_t last) {
  WindowAccumulator acc(first, last);
  for (const auto& r : records) acc.add(r);
  return acc.result();
}

}  // namespace micromaser
