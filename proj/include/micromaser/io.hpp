#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "micromaser/simulator.hpp"

namespace micromaser {

// Config file format: flat key=value lines, keys named after SimConfig fields
// (g, kappa, n_bar_th, tau, flux_rate, n_atoms, n_max, seed, measurement_mode,
// snapshot_atoms, rtol, atol, initial_fock). '#' starts a comment.
using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

// Applies file text then overrides onto the defaults and validates. A key
// repeated inside the file is an error; overrides replace file values.
SimConfig parse_config_text(const std::string& text, const ConfigOverrides& overrides = {});
SimConfig parse_config(const std::optional<std::filesystem::path>& path,
                       const ConfigOverrides& overrides = {});

// key=value text that parses back to an identical config.
std::string format_config(const SimConfig& config);

const std::vector<std::string>& config_keys();

struct RunManifest {
  std::string config_echo;
  std::string version;
  std::uint64_t seed = 0;
  std::string kernels;
  std::string start_time;
  std::string end_time;
  std::vector<std::string> outputs;
  std::uint64_t rejected_draws = 0;
  std::uint64_t total_draws = 0;
};

std::string library_version();
std::string utc_timestamp();

std::string records_header(MeasurementMode mode);
std::string format_record(const AtomRecord& record, MeasurementMode mode);

/// Streams records.csv and snapshot_<i>.csv into a directory while the run
/// is in progress; finish() adds summary.json and manifest.json.
class OutputWriter final : public RunSink {
 public:
  OutputWriter(std::filesystem::path dir, const SimConfig& config,
               std::optional<std::pair<std::uint64_t, std::uint64_t>> window = std::nullopt);

  void on_record(const AtomRecord& record) override;
  void on_snapshot(const Snapshot& snapshot) override;

  // Returns the summary written to summary.json.
  WindowSummary finish(RunManifest manifest, const PhotonDistribution& final_field);

  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  SimConfig config_;
  std::ofstream records_;
  WindowAccumulator window_;
  WindowAccumulator full_;
  std::vector<std::string> outputs_;
};

// Default summary window: the second half of the run.
std::pair<std::uint64_t, std::uint64_t> default_window(std::uint64_t n_atoms);

// Writes an already-collected run.
WindowSummary emit_outputs(const std::filesystem::path& dir, const SimConfig& config,
                           const RunResult& result, RunManifest manifest);

std::string read_file(const std::filesystem::path& path);

}  // namespace micromaser
