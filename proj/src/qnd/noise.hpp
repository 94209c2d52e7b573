#pragma once

#include <cstdint>
#include <vector>

namespace qnd::noise {

struct DetectionSettings {
  double probe_power_w = 12e-9;     // total power P seen by the atoms
  double pulse_duration_s = 3e-3;   // T
  double efficiency = 0.43;         // eta
  double sampling_rate_hz = 500e3;
  double electronic_floor = 1e-11;  // rad^2/Hz, one-sided, on the
                                    // demodulated differential phase

  double detected_power_w() const { return efficiency * probe_power_w; }
  void validate() const;
};

// Per-sideband phase variance per pulse, h c / (4 lambda J_1(a)^2 eta P T).
// Throws when J_1(a) = 0 or P = 0 (no signal photons in the sidebands).
double shot_noise_variance(double depth_rad, const DetectionSettings& settings,
                           double wavelength_m);

struct PsdModel {
  // One-sided PSD of the demodulated phase quantity
  // (1/2) sqrt(delta_phi_+1^2 + delta_phi_-1^2), in rad^2/Hz.
  double white_level = 0.0;       // shot-noise contribution
  double electronic_floor = 0.0;

  double total() const { return white_level + electronic_floor; }
};

// White shot-noise level sigma^2 * T (so that averaging over a pulse of
// duration T reproduces shot_noise_variance), plus the electronic floor.
PsdModel phase_noise_psd(const DetectionSettings& settings, double depth_rad,
                         double wavelength_m);

struct NoiseSample {
  std::vector<double> upper;   // delta_phi_(+1) series, rad
  std::vector<double> lower;   // delta_phi_(-1) series, rad
  std::uint64_t seed = 0;
};

// Independent white Gaussian series for the +1 and -1 sidebands whose
// periodograms match the model PSD; bit-identical for identical seeds.
NoiseSample generate_noise(const PsdModel& model, double duration_s,
                           double rate_hz, std::uint64_t seed);

// SplitMix64, used to derive independent per-trial RNG streams from one seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace qnd::noise
