#pragma once

#include "qnd/config.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qnd::cmd {

// CSV: detuning_MHz,phase_unpolarized_mrad,phase_stretched_mrad
void phase_spectrum(const config::RunConfig& config, double min_mhz,
                    double max_mhz, double step_mhz, std::ostream& out);

// CSV: detected_power_nW,white_level_rad2_per_Hz,rms_mrad_per_pulse,
//      rms_mc_mrad_per_pulse; trailing comment with the shot-limit crossover.
void noise_psd(const config::RunConfig& config,
               const std::vector<double>& detected_powers_nw,
               std::uint64_t seed, std::ostream& out);

// CSV: depth_Er,depth_mK,beta_model; with fit data, trailing comments carry
// the n_gamma estimate and standard error.
void retention(const config::RunConfig& config, double min_er, double max_er,
               double step_er, const std::optional<std::string>& fit_csv_path,
               std::ostream& out);

// CSV: frequency_MHz,depth_rad,snr over the optimizer grid, with the optimum,
// sideband-loss fraction and flatness figures as trailing comments.
void snr_map(const config::RunConfig& config, double min_mhz, double max_mhz,
             double min_a, double max_a, std::ostream& out);

// CSV: seed,N_true,p_true,phase_ground_mrad,phase_total_mrad,phase_ref_mrad,
//      p_est,N_est; one row per trial, plus per-batch summary comments.
// p_true < 0 selects the two-pulse population measurement.
void cycle_batches(const config::RunConfig& config,
                   const std::vector<double>& atom_numbers,
                   const std::vector<double>& probabilities, int trials,
                   std::uint64_t seed, int jobs, std::ostream& out);

std::string format_csv_double(double v);

}  // namespace qnd::cmd
