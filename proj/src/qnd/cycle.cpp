#include "qnd/cycle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace qnd::cycle {

void SequenceConfig::validate() const {
  detection.validate();
  modulation.validate();
  manifold.validate();
  populations.validate();
  geometry.validate();
  if (detection.pulse_duration_s * detection.sampling_rate_hz < 100) {
    throw std::invalid_argument("sequence: fewer than 100 samples per pulse");
  }
  if (inter_pulse_gap_s < 0) {
    throw std::invalid_argument("sequence: inter-pulse gap must be >= 0");
  }
  if (pumping_efficiency < 0 || pumping_efficiency > 1) {
    throw std::invalid_argument("sequence: pumping efficiency must be in [0, 1]");
  }
}

namespace {

struct PulseChain {
  const SequenceConfig& config;
  double kappa;          // differential phase per atom, rad
  double per_pulse_rms;  // analytic noise of one pulse estimate, rad

  explicit PulseChain(const SequenceConfig& cfg)
      : config(cfg),
        kappa(atom::PhaseShiftModel(cfg.manifold, cfg.populations,
                                    cfg.geometry, cfg.polarization_q)
                  .differential(cfg.modulation.omega_rad_s)) {
    config.validate();
    if (config.noiseless) {
      per_pulse_rms = 0.0;
      return;
    }
    double sigma2 = noise::shot_noise_variance(
        config.modulation.depth_rad, config.detection,
        config.manifold.wavelength_m);
    double floor_var =
        config.detection.electronic_floor / config.detection.pulse_duration_s;
    per_pulse_rms = std::sqrt(2.0 * sigma2 + 2.0 * floor_var);
  }

  // Differential-phase estimate of one probe pulse seeing `atoms` atoms,
  // starting at t_start within the cycle. The per-sideband noise series is
  // averaged exactly as the 500 kHz demodulated samples are.
  double measure(double atoms, double t_start, std::uint64_t pulse_seed) const {
    double phase = atoms * kappa;
    double t_mid = t_start + 0.5 * config.detection.pulse_duration_s;
    phase += config.drift_rad_s * t_mid;
    if (config.noiseless) return phase;

    auto psd = noise::phase_noise_psd(config.detection,
                                      config.modulation.depth_rad,
                                      config.manifold.wavelength_m);
    auto sample = noise::generate_noise(psd, config.detection.pulse_duration_s,
                                        config.detection.sampling_rate_hz,
                                        pulse_seed);
    double mean_diff = 0.0;
    for (std::size_t k = 0; k < sample.upper.size(); ++k) {
      mean_diff += sample.upper[k] - sample.lower[k];
    }
    mean_diff /= static_cast<double>(sample.upper.size());
    return phase + mean_diff;
  }
};

}  // namespace

CycleResult simulate_population_measurement(double atoms,
                                            const SequenceConfig& config) {
  if (atoms < 0) throw std::invalid_argument("atom number must be >= 0");
  PulseChain chain(config);

  double t = config.detection.pulse_duration_s + config.inter_pulse_gap_s;
  double dark_atoms = (1.0 - config.pumping_efficiency) * atoms;
  double p1 = chain.measure(atoms, 0.0, noise::mix_seed(config.seed, 0));
  double p2 = chain.measure(dark_atoms, t, noise::mix_seed(config.seed, 1));

  CycleResult result;
  result.phase_ground = p1 - p2;
  result.phase_reference = p2;
  result.estimated_atoms = result.phase_ground / chain.kappa;
  result.per_pulse_rms = chain.per_pulse_rms;
  return result;
}

CycleResult simulate_transition_probability(double atoms, double p_true,
                                            const SequenceConfig& config) {
  if (atoms < 0) throw std::invalid_argument("atom number must be >= 0");
  if (p_true < 0 || p_true > 1) {
    throw std::invalid_argument("transition probability must be in [0, 1]");
  }
  PulseChain chain(config);

  double excited = p_true * atoms;
  if (config.projection_noise) {
    std::mt19937_64 rng(noise::mix_seed(config.seed, 100));
    std::binomial_distribution<long> binom(
        static_cast<long>(std::llround(atoms)), p_true);
    excited = static_cast<double>(binom(rng));
  }
  double ground = atoms - excited;

  double step = config.detection.pulse_duration_s + config.inter_pulse_gap_s;
  double dark_atoms = (1.0 - config.pumping_efficiency) * atoms;
  double a = chain.measure(ground, 0.0, noise::mix_seed(config.seed, 0));
  double b = chain.measure(atoms, step, noise::mix_seed(config.seed, 1));
  double c = chain.measure(dark_atoms, 2.0 * step,
                           noise::mix_seed(config.seed, 2));

  double denom = b - c;
  if (std::abs(denom) <= 3.0 * std::sqrt(2.0) * chain.per_pulse_rms) {
    throw std::domain_error(
        "transition probability undefined: total-atom phase consistent with zero");
  }

  CycleResult result;
  result.phase_ground = a;
  result.phase_total = b;
  result.phase_reference = c;
  result.estimated_atoms = denom / chain.kappa;
  result.raw_probability = 1.0 - (a - c) / denom;
  result.estimated_probability =
      std::min(1.0, std::max(0.0, result.raw_probability));
  result.per_pulse_rms = chain.per_pulse_rms;
  return result;
}

DutyCycleProjection duty_cycle_projection(double load_time_s,
                                          double interrogation_time_s,
                                          double detection_dead_time_s,
                                          double retention_beta,
                                          double min_atoms,
                                          double initial_atoms) {
  if (load_time_s < 0 || interrogation_time_s < 0 || detection_dead_time_s < 0) {
    throw std::invalid_argument("duty cycle: times must be >= 0");
  }
  if (retention_beta <= 0 || retention_beta > 1) {
    throw std::invalid_argument("duty cycle: beta must be in (0, 1]");
  }
  DutyCycleProjection result;
  double amortized_load;
  if (retention_beta == 1.0) {
    result.cycles_until_reload = -1;  // unbounded recycling
    amortized_load = 0.0;
  } else {
    double cycles =
        std::floor(std::log(min_atoms / initial_atoms) / std::log(retention_beta));
    result.cycles_until_reload = static_cast<long>(std::max(0.0, cycles));
    amortized_load = result.cycles_until_reload > 0
                         ? load_time_s / static_cast<double>(result.cycles_until_reload)
                         : load_time_s;
  }
  result.duty_cycle =
      interrogation_time_s /
      (interrogation_time_s + amortized_load + detection_dead_time_s);
  return result;
}

}  // namespace qnd::cycle
