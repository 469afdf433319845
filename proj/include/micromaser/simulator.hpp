#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "micromaser/dynamics.hpp"
#include "micromaser/fock.hpp"
#include "micromaser/injection.hpp"

namespace micromaser {

struct SimConfig {
  PhysicsParams physics;
  double flux_rate = 100.0;  // atoms per second
  std::uint64_t n_atoms = 10000;
  std::size_t n_max = 64;
  std::optional<std::uint64_t> seed;
  MeasurementMode measurement_mode = MeasurementMode::Nonselective;
  std::vector<std::uint64_t> snapshot_atoms{7000, 9000};
  double rtol = 1e-12;
  double atol = 1e-14;
  // Start from |n> instead of the thermal field.
  std::optional<std::size_t> initial_fock;

  // Throws Config on any violation, including a missing seed.
  void validate() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct AtomRecord {
  std::uint64_t index = 0;  // 1-based atom ordinal
  double t_arrival = 0.0;   // entry time, s
  double t_cav_prev = 0.0;  // idle gap before this atom, s
  double p_a = 1.0;
  double projection_noise = 0.0;
  std::optional<AtomLevel> collapsed;
  double mean_n = 0.0;  // field right after exit
  double v = 0.0;
};

struct Snapshot {
  std::uint64_t atom = 0;  // captured at this atom's exit
  PhotonDistribution field;
};

/// Receives records as they are produced so long runs stay memory-flat.
class RunSink {
 public:
  virtual ~RunSink() = default;
  virtual void on_record(const AtomRecord& record) = 0;
  virtual void on_snapshot(const Snapshot& snapshot) = 0;
};

struct RunTotals {
  PhotonDistribution final_field;
  std::uint64_t rejected_draws = 0;
  std::uint64_t total_draws = 0;
};

struct RunResult {
  std::vector<AtomRecord> records;
  std::vector<Snapshot> snapshots;
  PhotonDistribution final_field;
  std::uint64_t rejected_draws = 0;
};

PhotonDistribution initial_field(const SimConfig& config);

// Atom-by-atom chain: idle gap, injection, transit, measurement. Errors are
// rethrown with the atom index prepended.
RunTotals run(const SimConfig& config, RunSink& sink);
RunResult run(const SimConfig& config);

struct TrapCondition {
  int k = 1;
  double g_tau = 0.0;
  double n0_real = 0.0;  // (k pi / g_tau)^2 - 1
  std::uint64_t n0_nearest = 0;
};

std::vector<TrapCondition> trapping_photon_numbers(double g_tau, int k_max);

struct WindowSummary {
  std::uint64_t first = 0;
  std::uint64_t last = 0;
  std::uint64_t count = 0;
  double mean_p_a = 0.0;
  double mean_v = 0.0;
  double min_v = 0.0;
  double max_v = 0.0;
  double mean_projection_noise = 0.0;
  double mean_n = 0.0;
};

/// Running window statistics; records outside [first, last] are ignored.
class WindowAccumulator {
 public:
  WindowAccumulator(std::uint64_t first, std::uint64_t last);
  void add(const AtomRecord& record);
  // Throws InvalidArgument if no record fell inside the window.
  WindowSummary result() const;

 private:
  WindowSummary s_;
  double sum_p_a_ = 0.0, sum_v_ = 0.0, sum_dj2_ = 0.0, sum_n_ = 0.0;
};

// Statistics over records whose atom index lies in [first, last].
WindowSummary summarize(const std::vector<AtomRecord>& records, std::uint64_t first,
                        std::uint64_t last);

}  // namespace micromaser
