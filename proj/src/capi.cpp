#include "qnd/qnd.h"

#include "qnd/commands.hpp"
#include "qnd/config.hpp"
#include "qnd/heating.hpp"
#include "qnd/wigner.hpp"

#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

struct qnd_config {
  qnd::config::RunConfig run;
};

namespace {

thread_local std::string g_last_error;

const char* store_error(const std::string& message) {
  g_last_error = message;
  return g_last_error.c_str();
}

// Runs fn, mapping exceptions onto status codes.
template <typename Fn>
qnd_status guarded(Fn&& fn) {
  try {
    fn();
    return QND_OK;
  } catch (const qnd::config::config_error& e) {
    store_error(e.what());
    return QND_ERR_CONFIG;
  } catch (const std::invalid_argument& e) {
    store_error(e.what());
    return QND_ERR_USAGE;
  } catch (const std::exception& e) {
    store_error(e.what());
    return QND_ERR_RUNTIME;
  }
}

// Writes via fn to out_path, "-" meaning stdout.
template <typename Fn>
void with_output(const char* out_path, Fn&& fn) {
  if (!out_path) throw std::invalid_argument("output path is null");
  if (std::strcmp(out_path, "-") == 0) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error(std::string("cannot open ") + out_path);
  fn(out);
}

void copy_to_buffer(const std::string& text, char* buffer, size_t* size) {
  if (!size) throw std::invalid_argument("size pointer is null");
  if (!buffer || *size <= text.size()) {
    *size = text.size() + 1;
    if (buffer) throw std::invalid_argument("buffer too small");
    return;
  }
  std::memcpy(buffer, text.c_str(), text.size() + 1);
  *size = text.size() + 1;
}

qnd::HalfInt twice(int t) { return qnd::HalfInt::from_twice(t); }

}  // namespace

extern "C" {

const char* qnd_last_error(void) { return g_last_error.c_str(); }

qnd_status qnd_config_create(qnd_config** out) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("output handle is null");
    *out = new qnd_config{};
  });
}

qnd_status qnd_config_load(const char* path, qnd_config** out) {
  return guarded([&] {
    if (!out || !path) throw std::invalid_argument("null argument");
    auto run = qnd::config::parse_file(path);
    *out = new qnd_config{std::move(run)};
  });
}

qnd_status qnd_config_set(qnd_config* config, const char* key,
                          const char* value) {
  return guarded([&] {
    if (!config || !key || !value) throw std::invalid_argument("null argument");
    qnd::config::apply_override(config->run, key, value);
  });
}

qnd_status qnd_config_serialize(const qnd_config* config, char* buffer,
                                size_t* size) {
  return guarded([&] {
    if (!config) throw std::invalid_argument("null config");
    copy_to_buffer(qnd::config::serialize(config->run), buffer, size);
  });
}

void qnd_config_free(qnd_config* config) { delete config; }

qnd_status qnd_cmd_phase_spectrum(const qnd_config* config, double min_mhz,
                                  double max_mhz, double step_mhz,
                                  const char* out_path) {
  return guarded([&] {
    if (!config) throw std::invalid_argument("null config");
    with_output(out_path, [&](std::ostream& out) {
      qnd::cmd::phase_spectrum(config->run, min_mhz, max_mhz, step_mhz, out);
    });
  });
}

qnd_status qnd_cmd_noise_psd(const qnd_config* config,
                             const double* detected_powers_nw, size_t count,
                             uint64_t seed, const char* out_path) {
  return guarded([&] {
    if (!config || (!detected_powers_nw && count > 0)) {
      throw std::invalid_argument("null argument");
    }
    std::vector<double> powers(detected_powers_nw,
                               detected_powers_nw + count);
    with_output(out_path, [&](std::ostream& out) {
      qnd::cmd::noise_psd(config->run, powers, seed, out);
    });
  });
}

qnd_status qnd_cmd_retention(const qnd_config* config, double min_er,
                             double max_er, double step_er,
                             const char* fit_csv_path, const char* out_path) {
  return guarded([&] {
    if (!config) throw std::invalid_argument("null config");
    std::optional<std::string> fit;
    if (fit_csv_path) fit = fit_csv_path;
    with_output(out_path, [&](std::ostream& out) {
      qnd::cmd::retention(config->run, min_er, max_er, step_er, fit, out);
    });
  });
}

qnd_status qnd_cmd_snr_map(const qnd_config* config, double min_mhz,
                           double max_mhz, double min_depth, double max_depth,
                           const char* out_path) {
  return guarded([&] {
    if (!config) throw std::invalid_argument("null config");
    with_output(out_path, [&](std::ostream& out) {
      qnd::cmd::snr_map(config->run, min_mhz, max_mhz, min_depth, max_depth,
                        out);
    });
  });
}

qnd_status qnd_cmd_cycle(const qnd_config* config, const double* atom_numbers,
                         size_t n_atom_numbers, const double* probabilities,
                         size_t n_probabilities, int trials, uint64_t seed,
                         int jobs, const char* out_path) {
  return guarded([&] {
    if (!config || !atom_numbers || n_atom_numbers == 0) {
      throw std::invalid_argument("need at least one atom number");
    }
    std::vector<double> atoms(atom_numbers, atom_numbers + n_atom_numbers);
    std::vector<double> probs;
    if (probabilities) {
      probs.assign(probabilities, probabilities + n_probabilities);
    }
    with_output(out_path, [&](std::ostream& out) {
      qnd::cmd::cycle_batches(config->run, atoms, probs, trials, seed, jobs,
                              out);
    });
  });
}

qnd_status qnd_wigner3j(int two_j1, int two_j2, int two_j3, int two_m1,
                        int two_m2, int two_m3, double* out, char* exact,
                        size_t* exact_size) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("null output");
    auto value = qnd::wig::wigner3j(twice(two_j1), twice(two_j2), twice(two_j3),
                                    twice(two_m1), twice(two_m2),
                                    twice(two_m3));
    *out = value.to_double();
    if (exact_size) copy_to_buffer(value.str(), exact, exact_size);
  });
}

qnd_status qnd_wigner6j(int two_j1, int two_j2, int two_j3, int two_j4,
                        int two_j5, int two_j6, double* out, char* exact,
                        size_t* exact_size) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("null output");
    auto value = qnd::wig::wigner6j(twice(two_j1), twice(two_j2), twice(two_j3),
                                    twice(two_j4), twice(two_j5),
                                    twice(two_j6));
    *out = value.to_double();
    if (exact_size) copy_to_buffer(value.str(), exact, exact_size);
  });
}

qnd_status qnd_phase_shift(const qnd_config* config, double detuning_hz,
                           double* out) {
  return guarded([&] {
    if (!config || !out) throw std::invalid_argument("null argument");
    const auto& run = config->run;
    *out = qnd::atom::atomic_phase_shift(run.manifold(),
                                         run.populations(run.total_atoms),
                                         run.geometry(), 0, detuning_hz);
  });
}

qnd_status qnd_absorbed_photons(const qnd_config* config, double* out) {
  return guarded([&] {
    if (!config || !out) throw std::invalid_argument("null argument");
    const auto& run = config->run;
    auto detection = run.detection();
    *out = qnd::heat::absorbed_photons(detection.probe_power_w,
                                       detection.pulse_duration_s,
                                       run.modulation(), run.manifold());
  });
}

qnd_status qnd_retention_fraction(double depth_recoils, double n_gamma,
                                  double* out) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("null output");
    *out = qnd::heat::retention_fraction(depth_recoils, n_gamma);
  });
}

}  // extern "C"
