// Command-line driver: simulate, traps, sweep.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "micromaser/error.hpp"
#include "micromaser/format.hpp"
#include "micromaser/io.hpp"
#include "micromaser/kernels.hpp"
#include "micromaser/simulator.hpp"

namespace fs = std::filesystem;
using namespace micromaser;

namespace {

struct CommonOptions {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> atoms;
  std::optional<std::string> mode;
  std::vector<std::uint64_t> snapshots;
  std::vector<std::string> sets;
  std::string out = "out";
  std::optional<std::string> window;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--config", o.config_path, "key=value config file");
  app->add_option("--seed", o.seed, "RNG seed (required)");
  app->add_option("--atoms", o.atoms, "number of atoms");
  app->add_option("--mode", o.mode, "nonselective|selective");
  app->add_option("--snapshot", o.snapshots, "atom indices at which to dump P(n)");
  app->add_option("--set", o.sets, "override any config key: key=value");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--window", o.window, "summary window first:last (default: second half)");
}

ConfigOverrides overrides_from(const CommonOptions& o) {
  ConfigOverrides ov;
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Config, "--set expects key=value: " + s);
    ov.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  if (o.seed) ov.emplace_back("seed", std::to_string(*o.seed));
  if (o.atoms) ov.emplace_back("n_atoms", std::to_string(*o.atoms));
  if (o.mode) ov.emplace_back("measurement_mode", *o.mode);
  if (!o.snapshots.empty()) {
    std::string list;
    for (auto i : o.snapshots) list += (list.empty() ? "" : ",") + std::to_string(i);
    ov.emplace_back("snapshot_atoms", list);
  }
  return ov;
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> parse_window(
    const std::optional<std::string>& text) {
  if (!text) return std::nullopt;
  const auto colon = text->find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::Config, "--window expects first:last");
  return std::pair{std::stoull(text->substr(0, colon)), std::stoull(text->substr(colon + 1))};
}

WindowSummary simulate_into(const fs::path& dir, const SimConfig& config,
                            std::optional<std::pair<std::uint64_t, std::uint64_t>> window) {
  RunManifest manifest;
  manifest.config_echo = format_config(config);
  manifest.version = library_version();
  manifest.seed = *config.seed;
  manifest.kernels = std::string(kernels::active().name);
  manifest.start_time = utc_timestamp();
  OutputWriter writer(dir, config, window);
  RunTotals totals = run(config, writer);
  manifest.end_time = utc_timestamp();
  manifest.rejected_draws = totals.rejected_draws;
  manifest.total_draws = totals.total_draws;
  return writer.finish(std::move(manifest), totals.final_field);
}

int cmd_simulate(const CommonOptions& o) {
  const SimConfig config = parse_config(
      o.config_path ? std::optional<fs::path>(*o.config_path) : std::nullopt, overrides_from(o));
  const WindowSummary s = simulate_into(o.out, config, parse_window(o.window));
  std::cout << "wrote " << o.out << ": atoms " << s.first << ".." << s.last
            << " mean_p_a=" << format_shortest(s.mean_p_a)
            << " mean_v=" << format_shortest(s.mean_v)
            << " mean_n=" << format_shortest(s.mean_n) << '\n';
  return 0;
}

int cmd_traps(double g_tau, int k_max) {
  std::cout << "k,g_tau,n0_real,n0_nearest\n";
  for (const auto& t : trapping_photon_numbers(g_tau, k_max)) {
    std::cout << t.k << ',' << format_shortest(t.g_tau) << ',' << format_shortest(t.n0_real)
              << ',' << t.n0_nearest << '\n';
  }
  return 0;
}

int cmd_sweep(const CommonOptions& o, std::string param, const std::vector<std::string>& values,
              unsigned jobs) {
  if (param == "R") param = "flux_rate";
  if (std::find(config_keys().begin(), config_keys().end(), param) == config_keys().end()) {
    throw Error(ErrorKind::Config, "unknown sweep parameter '" + param + "'");
  }
  const auto base = overrides_from(o);
  std::vector<SimConfig> configs;
  for (const auto& v : values) {
    auto ov = base;
    ov.emplace_back(param, v);
    configs.push_back(parse_config(
        o.config_path ? std::optional<fs::path>(*o.config_path) : std::nullopt, ov));
  }

  const auto window = parse_window(o.window);
  std::vector<WindowSummary> results(configs.size());
  jobs = std::max(1U, jobs);
  for (std::size_t start = 0; start < configs.size(); start += jobs) {
    std::vector<std::future<WindowSummary>> batch;
    for (std::size_t i = start; i < std::min(configs.size(), start + jobs); ++i) {
      const fs::path dir = fs::path(o.out) / (param + "=" + values[i]);
      batch.push_back(std::async(std::launch::async, simulate_into, dir, configs[i], window));
    }
    for (std::size_t i = 0; i < batch.size(); ++i) results[start + i] = batch[i].get();
  }

  std::string table = "param,value,mean_n,mean_v,min_v,max_v,mean_p_a,mean_dj2\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& s = results[i];
    table += param + ',' + values[i] + ',' + format_shortest(s.mean_n) + ',' +
             format_shortest(s.mean_v) + ',' + format_shortest(s.min_v) + ',' +
             format_shortest(s.max_v) + ',' + format_shortest(s.mean_p_a) + ',' +
             format_shortest(s.mean_projection_noise) + '\n';
  }
  fs::create_directories(o.out);
  std::ofstream(fs::path(o.out) / "sweep.csv", std::ios::binary) << table;
  std::cout << table;
  return 0;
}

void print_error(std::string_view kind, const std::string& message) {
  nlohmann::json line{{"error", kind}, {"message", message}};
  std::cerr << line.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Atom-by-atom Monte Carlo simulation of a damped one-atom micromaser"};
  app.require_subcommand(1);

  CommonOptions sim_opts;
  auto* simulate = app.add_subcommand("simulate", "run one trajectory and write CSV/JSON outputs");
  add_common(simulate, sim_opts);

  double g_tau = 0.0;
  int k_max = 3;
  auto* traps = app.add_subcommand("traps", "list trapping photon numbers for a pulse area");
  traps->add_option("--g-tau", g_tau, "dimensionless g*tau")->required();
  traps->add_option("--k-max", k_max, "largest branch k");

  CommonOptions sweep_opts;
  std::string param;
  std::vector<std::string> values;
  unsigned jobs = std::max(1U, std::thread::hardware_concurrency());
  auto* sweep = app.add_subcommand("sweep", "independent runs over one parameter");
  add_common(sweep, sweep_opts);
  sweep->add_option("--param", param, "config key to vary (R = flux_rate)")->required();
  sweep->add_option("--values", values, "values to run")->required()->delimiter(',');
  sweep->add_option("--jobs", jobs, "runs in parallel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_opts);
    if (traps->parsed()) return cmd_traps(g_tau, k_max);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, param, values, jobs);
  } catch (const Error& e) {
    print_error(to_string(e.kind()), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
