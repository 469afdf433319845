#include "micromaser/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <set>
#include <sstream>

#include <json.hpp>

#include "micromaser/error.hpp"
#include "micromaser/format.hpp"
#include "micromaser/kernels.hpp"

namespace micromaser {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  throw Error(ErrorKind::Config, "key '" + key + "': " + what);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    return parse_double(value);
  } catch (const Error&) {
    config_error(key, "expected a number, got '" + value + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), last, out);
  if (ec != std::errc{} || ptr != last || value.empty()) {
    config_error(key, "expected a non-negative integer, got '" + value + "'");
  }
  return out;
}

void apply_setting(SimConfig& c, const std::string& key, const std::string& value) {
  if (key == "g") {
    c.physics.g = to_double(key, value);
  } else if (key == "kappa") {
    c.physics.kappa = to_double(key, value);
  } else if (key == "n_bar_th") {
    c.physics.n_bar_th = to_double(key, value);
  } else if (key == "tau") {
    c.physics.tau = to_double(key, value);
  } else if (key == "flux_rate") {
    c.flux_rate = to_double(key, value);
  } else if (key == "n_atoms") {
    c.n_atoms = to_u64(key, value);
  } else if (key == "n_max") {
    c.n_max = static_cast<std::size_t>(to_u64(key, value));
  } else if (key == "seed") {
    c.seed = to_u64(key, value);
  } else if (key == "measurement_mode") {
    c.measurement_mode = parse_measurement_mode(value);
  } else if (key == "snapshot_atoms") {
    c.snapshot_atoms.clear();
    std::stringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (!item.empty()) c.snapshot_atoms.push_back(to_u64(key, item));
    }
  } else if (key == "rtol") {
    c.rtol = to_double(key, value);
  } else if (key == "atol") {
    c.atol = to_double(key, value);
  } else if (key == "initial_fock") {
    if (value == "none") {
      c.initial_fock.reset();
    } else {
      c.initial_fock = static_cast<std::size_t>(to_u64(key, value));
    }
  } else {
    throw Error(ErrorKind::Config, "unknown key '" + key + "'");
  }
}

nlohmann::ordered_json summary_json(const WindowSummary& s) {
  nlohmann::ordered_json j;
  j["first"] = s.first;
  j["last"] = s.last;
  j["count"] = s.count;
  j["mean_p_a"] = s.mean_p_a;
  j["mean_v"] = s.mean_v;
  j["min_v"] = s.min_v;
  j["max_v"] = s.max_v;
  j["mean_dj2"] = s.mean_projection_noise;
  j["mean_n"] = s.mean_n;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "g",       "kappa",          "n_bar_th", "tau",  "flux_rate", "n_atoms",     "n_max",
      "seed",    "measurement_mode", "snapshot_atoms", "rtol", "atol", "initial_fock"};
  return keys;
}

SimConfig parse_config_text(const std::string& text, const ConfigOverrides& overrides) {
  SimConfig config;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Config, "line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!seen.insert(key).second) config_error(key, "duplicate key");
    apply_setting(config, key, trim(line.substr(eq + 1)));
  }
  for (const auto& [key, value] : overrides) {
    seen.insert(key);
    apply_setting(config, key, value);
  }
  if (!seen.contains("snapshot_atoms")) {
    std::erase_if(config.snapshot_atoms, [&](std::uint64_t i) { return i > config.n_atoms; });
  }
  config.validate();
  return config;
}

SimConfig parse_config(const std::optional<std::filesystem::path>& path,
                       const ConfigOverrides& overrides) {
  return parse_config_text(path ? read_file(*path) : std::string{}, overrides);
}

std::string format_config(const SimConfig& c) {
  std::string out;
  auto put = [&out](const char* key, const std::string& value) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  };
  put("g", format_shortest(c.physics.g));
  put("kappa", format_shortest(c.physics.kappa));
  put("n_bar_th", format_shortest(c.physics.n_bar_th));
  put("tau", format_shortest(c.physics.tau));
  put("flux_rate", format_shortest(c.flux_rate));
  put("n_atoms", std::to_string(c.n_atoms));
  put("n_max", std::to_string(c.n_max));
  if (c.seed) put("seed", std::to_string(*c.seed));
  put("measurement_mode", std::string(to_string(c.measurement_mode)));
  std::string snaps;
  for (std::size_t i = 0; i < c.snapshot_atoms.size(); ++i) {
    if (i != 0) snaps += ',';
    snaps += std::to_string(c.snapshot_atoms[i]);
  }
  put("snapshot_atoms", snaps);
  put("rtol", format_shortest(c.rtol));
  put("atol", format_shortest(c.atol));
  put("initial_fock", c.initial_fock ? std::to_string(*c.initial_fock) : "none");
  return out;
}

std::string library_version() { return "micromaser 1.0.0"; }

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string records_header(MeasurementMode mode) {
  return mode == MeasurementMode::Selective ? "index,t_arrival,t_cav,p_a,dj2,mean_n,v,collapsed\n"
                                            : "index,t_arrival,t_cav,p_a,dj2,mean_n,v\n";
}

std::string format_record(const AtomRecord& r, MeasurementMode mode) {
  std::string line = std::to_string(r.index);
  for (const auto& field :
       {format_scientific(r.t_arrival), format_scientific(r.t_cav_prev), format_shortest(r.p_a),
        format_shortest(r.projection_noise), format_shortest(r.mean_n), format_shortest(r.v)}) {
    line += ',';
    line += field;
  }
  if (mode == MeasurementMode::Selective) {
    line += ',';
    line += r.collapsed ? std::string(to_string(*r.collapsed)) : std::string{};
  }
  line += '\n';
  return line;
}

std::pair<std::uint64_t, std::uint64_t> default_window(std::uint64_t n_atoms) {
  return {n_atoms / 2 + 1, n_atoms};
}

OutputWriter::OutputWriter(std::filesystem::path dir, const SimConfig& config,
                           std::optional<std::pair<std::uint64_t, std::uint64_t>> window)
    : dir_(std::move(dir)),
      config_(config),
      window_(window ? window->first : default_window(config.n_atoms).first,
              window ? window->second : default_window(config.n_atoms).second),
      full_(1, config.n_atoms) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir_.string() + ": " + ec.message());
  const auto path = dir_ / "records.csv";
  records_.open(path, std::ios::binary);
  if (!records_) throw Error(ErrorKind::Io, "cannot open " + path.string());
  records_ << records_header(config_.measurement_mode);
  outputs_.push_back(path.string());
}

void OutputWriter::on_record(const AtomRecord& record) {
  records_ << format_record(record, config_.measurement_mode);
  window_.add(record);
  full_.add(record);
}

void OutputWriter::on_snapshot(const Snapshot& snapshot) {
  const auto path = dir_ / ("snapshot_" + std::to_string(snapshot.atom) + ".csv");
  write_text(path, snapshot.field.to_csv());
  outputs_.push_back(path.string());
}

WindowSummary OutputWriter::finish(RunManifest manifest, const PhotonDistribution& final_field) {
  records_.close();
  if (!records_) throw Error(ErrorKind::Io, "cannot write " + (dir_ / "records.csv").string());

  const WindowSummary window = window_.result();
  const FieldStatistics final_stats = statistics(final_field);
  nlohmann::ordered_json summary;
  summary["window"] = summary_json(window);
  summary["full"] = summary_json(full_.result());
  summary["final_field"] = {{"mean_n", final_stats.mean_n},
                            {"var_n", final_stats.var_n},
                            {"v", final_stats.v}};
  auto traps = nlohmann::ordered_json::array();
  const double g_tau = config_.physics.g * config_.physics.tau;
  for (const auto& t : g_tau > 0.0 ? trapping_photon_numbers(g_tau, 3)
                                   : std::vector<TrapCondition>{}) {
    traps.push_back({{"k", t.k},
                     {"g_tau", t.g_tau},
                     {"n0_real", t.n0_real},
                     {"n0_nearest", t.n0_nearest}});
  }
  summary["traps"] = traps;
  const auto summary_path = dir_ / "summary.json";
  write_text(summary_path, summary.dump(2) + "\n");
  outputs_.push_back(summary_path.string());

  const auto manifest_path = dir_ / "manifest.json";
  outputs_.push_back(manifest_path.string());
  manifest.outputs = outputs_;
  nlohmann::ordered_json m;
  m["version"] = manifest.version;
  m["seed"] = manifest.seed;
  m["kernels"] = manifest.kernels;
  m["start_time"] = manifest.start_time;
  m["end_time"] = manifest.end_time;
  m["rejected_draws"] = manifest.rejected_draws;
  m["total_draws"] = manifest.total_draws;
  m["outputs"] = manifest.outputs;
  m["config_echo"] = manifest.config_echo;
  write_text(manifest_path, m.dump(2) + "\n");
  return window;
}

WindowSummary emit_outputs(const std::filesystem::path& dir, const SimConfig& config,
                           const RunResult& result, RunManifest manifest) {
  OutputWriter writer(dir, config);
  for (const auto& r : result.records) writer.on_record(r);
  for (const auto& s : result.snapshots) writer.on_snapshot(s);
  manifest.rejected_draws = result.rejected_draws;
  return writer.finish(std::move(manifest), result.final_field);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace micromaser
