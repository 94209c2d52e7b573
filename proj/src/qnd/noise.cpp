#include "qnd/noise.hpp"

#include "qnd/constants.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <random>
#include <stdexcept>

namespace qnd::noise {

void DetectionSettings::validate() const {
  if (probe_power_w < 0) throw std::invalid_argument("detection: P must be >= 0");
  if (pulse_duration_s <= 0) throw std::invalid_argument("detection: T must be > 0");
  if (efficiency <= 0 || efficiency > 1) {
    throw std::invalid_argument("detection: efficiency must be in (0, 1]");
  }
  if (sampling_rate_hz <= 0) {
    throw std::invalid_argument("detection: sampling rate must be > 0");
  }
  if (electronic_floor < 0) {
    throw std::invalid_argument("detection: electronic floor must be >= 0");
  }
}

double shot_noise_variance(double depth_rad, const DetectionSettings& settings,
                           double wavelength_m) {
  settings.validate();
  double j1 = boost::math::cyl_bessel_j(1, depth_rad);
  if (std::abs(j1) < 1e-9) {
    throw std::domain_error("shot noise diverges: J_1(a) = 0");
  }
  if (settings.probe_power_w <= 0) {
    throw std::domain_error("shot noise diverges: P = 0");
  }
  return constants::planck_h * constants::speed_of_light /
         (4.0 * wavelength_m * j1 * j1 * settings.efficiency *
          settings.probe_power_w * settings.pulse_duration_s);
}

PsdModel phase_noise_psd(const DetectionSettings& settings, double depth_rad,
                         double wavelength_m) {
  double sigma2 = shot_noise_variance(depth_rad, settings, wavelength_m);
  return {sigma2 * settings.pulse_duration_s, settings.electronic_floor};
}

NoiseSample generate_noise(const PsdModel& model, double duration_s,
                           double rate_hz, std::uint64_t seed) {
  auto n = static_cast<std::size_t>(duration_s * rate_hz + 0.5);
  if (n < 2) throw std::invalid_argument("generate_noise: rate*duration < 2");

  // The demodulated phase is (delta_+1 - delta_-1)/2, so each independent
  // sideband series carries twice the model PSD.
  double sideband_psd = 2.0 * model.total();
  double per_sample_sigma = std::sqrt(sideband_psd * rate_hz / 2.0);

  NoiseSample sample;
  sample.seed = seed;
  sample.upper.resize(n);
  sample.lower.resize(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, per_sample_sigma);
  for (std::size_t k = 0; k < n; ++k) sample.upper[k] = gauss(rng);
  for (std::size_t k = 0; k < n; ++k) sample.lower[k] = gauss(rng);
  return sample;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace qnd::noise
