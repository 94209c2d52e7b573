// Command-line front end; talks to the core exclusively through the C API.
#include "qnd/qnd.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace {

struct ConfigDeleter {
  void operator()(qnd_config* c) const { qnd_config_free(c); }
};
using ConfigHandle = std::unique_ptr<qnd_config, ConfigDeleter>;

struct GlobalOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path = "-";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 1;
};

int fail(qnd_status status) {
  std::fprintf(stderr, "error: %s\n", qnd_last_error());
  return static_cast<int>(status);
}

qnd_status build_config(const GlobalOptions& options, ConfigHandle& handle) {
  qnd_config* raw = nullptr;
  qnd_status status = options.config_path.empty()
                          ? qnd_config_create(&raw)
                          : qnd_config_load(options.config_path.c_str(), &raw);
  if (status != QND_OK) return status;
  handle.reset(raw);
  for (const auto& override_kv : options.overrides) {
    auto eq = override_kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects KEY=VALUE, got %s\n",
                   override_kv.c_str());
      return QND_ERR_USAGE;
    }
    status = qnd_config_set(handle.get(), override_kv.substr(0, eq).c_str(),
                            override_kv.substr(eq + 1).c_str());
    if (status != QND_OK) return status;
  }
  return QND_OK;
}

void add_globals(CLI::App* app, GlobalOptions& options) {
  app->add_option("--config", options.config_path, "Config file path");
  app->add_option("--set", options.overrides,
                  "Override a config value, section.key=value");
  app->add_option("--out", options.out_path, "Output path (default stdout)");
  app->add_option("--jobs", options.jobs, "Worker threads for batch commands");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dispersive atom-detection simulator"};
  app.require_subcommand(1);

  GlobalOptions options;

  // phase-spectrum
  double ps_min = -150.0, ps_max = 150.0, ps_step = 0.5;
  auto* phase_cmd = app.add_subcommand(
      "phase-spectrum", "Atomic phase shift vs probe detuning (CSV)");
  add_globals(phase_cmd, options);
  phase_cmd->add_option("--min-mhz", ps_min, "Lowest detuning, MHz");
  phase_cmd->add_option("--max-mhz", ps_max, "Highest detuning, MHz");
  phase_cmd->add_option("--step-mhz", ps_step, "Detuning step, MHz");

  // noise-psd
  std::vector<double> powers_nw = {2, 5, 10, 20, 30, 40};
  auto* noise_cmd = app.add_subcommand(
      "noise-psd", "Detection noise model and Monte Carlo check (CSV)");
  add_globals(noise_cmd, options);
  noise_cmd->add_option("--power-nw", powers_nw,
                        "Detected power list, nW (eta*P)");
  noise_cmd->add_option("--seed", options.seed, "Monte Carlo seed")
      ->required();

  // retention
  double rt_min = 10.0, rt_max = 400.0, rt_step = 10.0;
  std::string fit_path;
  auto* retention_cmd = app.add_subcommand(
      "retention", "Lattice retention vs depth, optional data fit (CSV)");
  add_globals(retention_cmd, options);
  retention_cmd->add_option("--min-er", rt_min, "Lowest depth, recoil units");
  retention_cmd->add_option("--max-er", rt_max, "Highest depth, recoil units");
  retention_cmd->add_option("--step-er", rt_step, "Depth step, recoil units");
  retention_cmd->add_option("--fit", fit_path,
                            "Retention data CSV to fit for n_gamma");

  // snr-map
  double sm_min_mhz = 10.0, sm_max_mhz = 300.0, sm_min_a = 0.5, sm_max_a = 3.5;
  auto* snr_cmd = app.add_subcommand(
      "snr-map", "SNR over the (frequency, depth) grid at fixed heating (CSV)");
  add_globals(snr_cmd, options);
  snr_cmd->add_option("--min-mhz", sm_min_mhz, "Lowest modulation frequency");
  snr_cmd->add_option("--max-mhz", sm_max_mhz, "Highest modulation frequency");
  snr_cmd->add_option("--min-a", sm_min_a, "Lowest modulation depth, rad");
  snr_cmd->add_option("--max-a", sm_max_a, "Highest modulation depth, rad");

  // cycle
  std::vector<double> atom_numbers = {1e4};
  std::vector<double> probabilities;
  int trials = 500;
  auto* cycle_cmd = app.add_subcommand(
      "cycle", "Monte Carlo detection cycles (batch CSV)");
  add_globals(cycle_cmd, options);
  cycle_cmd->add_option("--atoms", atom_numbers, "Atom numbers to simulate");
  cycle_cmd->add_option("--p", probabilities,
                        "Transition probabilities (omit for population-only)");
  cycle_cmd->add_option("--trials", trials, "Trials per (N, p) batch");
  cycle_cmd->add_option("--seed", options.seed, "Monte Carlo seed")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(QND_ERR_USAGE);
  }

  ConfigHandle config;
  qnd_status status = build_config(options, config);
  if (status != QND_OK) return fail(status);
  const char* out = options.out_path.c_str();

  if (phase_cmd->parsed()) {
    status = qnd_cmd_phase_spectrum(config.get(), ps_min, ps_max, ps_step, out);
  } else if (noise_cmd->parsed()) {
    status = qnd_cmd_noise_psd(config.get(), powers_nw.data(),
                               powers_nw.size(), options.seed, out);
  } else if (retention_cmd->parsed()) {
    status = qnd_cmd_retention(config.get(), rt_min, rt_max, rt_step,
                               fit_path.empty() ? nullptr : fit_path.c_str(),
                               out);
  } else if (snr_cmd->parsed()) {
    status = qnd_cmd_snr_map(config.get(), sm_min_mhz, sm_max_mhz, sm_min_a,
                             sm_max_a, out);
  } else if (cycle_cmd->parsed()) {
    status = qnd_cmd_cycle(config.get(), atom_numbers.data(),
                           atom_numbers.size(), probabilities.data(),
                           probabilities.size(), trials, options.seed,
                           options.jobs, out);
  }

  return status == QND_OK ? 0 : fail(status);
}
