#include "qnd/modulation.hpp"

#include "qnd/constants.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <stdexcept>

namespace qnd::mod {

using constants::two_pi;

void ModulationSettings::validate() const {
  if (depth_rad < 0) throw std::invalid_argument("modulation: depth must be >= 0");
  if (omega_rad_s <= 0) throw std::invalid_argument("modulation: omega must be > 0");
  if (max_order < 1) throw std::invalid_argument("modulation: max_order must be >= 1");
  double power = 0.0;
  for (const auto& [n, jn] : sideband_amplitudes(depth_rad, max_order)) {
    power += jn * jn;
  }
  if (power < 0.999) {
    throw std::invalid_argument(
        "modulation: truncation order captures < 99.9% of optical power");
  }
}

double SidebandPhases::at(int n) const {
  auto it = phase.find(n);
  if (it == phase.end()) throw std::out_of_range("sideband phase not defined");
  return it->second;
}

SidebandPhases SidebandPhases::assemble(
    int n_max, const std::function<double(int)>& atomic,
    const std::function<double(int)>& laser_noise, double global_phase) {
  SidebandPhases p;
  for (int n = -n_max; n <= n_max; ++n) {
    double noise = laser_noise ? laser_noise(n) : 0.0;
    p.phase[n] = atomic(n) + noise + global_phase;
  }
  return p;
}

std::map<int, double> sideband_amplitudes(double depth_rad, int n_max) {
  if (depth_rad < 0) throw std::invalid_argument("depth must be >= 0");
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  std::map<int, double> amps;
  for (int n = 0; n <= n_max; ++n) {
    double jn = boost::math::cyl_bessel_j(n, depth_rad);
    amps[n] = jn;
    amps[-n] = (n % 2 == 0) ? jn : -jn;
  }
  return amps;
}

double rf_signal(double t, const ModulationSettings& settings,
                 const InterferometerState& state,
                 const SidebandPhases& phases) {
  auto amps = sideband_amplitudes(settings.depth_rad, settings.max_order);
  double s = 0.0;
  for (int n = 1; n <= settings.max_order; ++n) {
    double avg = 0.5 * (phases.at(n) + phases.at(-n));
    double diff = 0.5 * (phases.at(n) - phases.at(-n));
    double u = state.lo_phase - avg;
    double v = n * settings.omega_rad_s * t + diff;
    double g_uv = (n % 2 == 0) ? std::cos(u) * std::cos(v)
                               : std::sin(u) * std::sin(v);
    s += amps.at(n) * g_uv;
  }
  return s;
}

namespace {

// Number of samples covering a whole number of modulation periods, at least
// min_periods of them.
std::size_t truncate_to_periods(std::size_t n_samples, double omega_rad_s,
                                double rate_hz, int min_periods) {
  if (rate_hz <= omega_rad_s / constants::pi) {
    throw std::invalid_argument("demodulation: sampling rate below Nyquist");
  }
  double period_s = two_pi / omega_rad_s;
  double duration = static_cast<double>(n_samples) / rate_hz;
  auto periods = static_cast<std::size_t>(duration / period_s + 1e-9);
  if (periods < static_cast<std::size_t>(min_periods)) {
    throw std::invalid_argument("demodulation: fewer than 10 modulation periods");
  }
  auto n_use = static_cast<std::size_t>(
      static_cast<double>(periods) * period_s * rate_hz + 1e-9);
  return std::min(n_use, n_samples);
}

}  // namespace

Demodulation demodulate_first_harmonic(std::span<const double> samples,
                                       double omega_rad_s, double rate_hz) {
  std::size_t n = truncate_to_periods(samples.size(), omega_rad_s, rate_hz, 10);
  double in_phase = 0.0, quad = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double t = static_cast<double>(k) / rate_hz;
    in_phase += samples[k] * std::sin(omega_rad_s * t);
    quad += samples[k] * std::cos(omega_rad_s * t);
  }
  in_phase *= 2.0 / static_cast<double>(n);
  quad *= 2.0 / static_cast<double>(n);
  return {std::hypot(in_phase, quad), std::atan2(quad, in_phase)};
}

double demodulate_second_harmonic(std::span<const double> samples,
                                  double omega_rad_s, double rate_hz) {
  std::size_t n = truncate_to_periods(samples.size(), omega_rad_s, rate_hz, 10);
  double in_phase = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double t = static_cast<double>(k) / rate_hz;
    in_phase += samples[k] * std::cos(2.0 * omega_rad_s * t);
  }
  return in_phase * 2.0 / static_cast<double>(n);
}

LockResult simulate_lock(const std::function<double(double)>& drift,
                         const ModulationSettings& settings,
                         const InterferometerState& state,
                         const SidebandPhases& phases, double duration_s,
                         double step_s, std::uint64_t /*seed*/) {
  settings.validate();
  if (step_s <= 0 || duration_s <= 0) {
    throw std::invalid_argument("simulate_lock: duration and step must be > 0");
  }

  auto amps = sideband_amplitudes(settings.depth_rad, settings.max_order);
  double j2 = std::abs(amps.at(2));
  double gain = two_pi * state.lock_bandwidth_hz * step_s / j2;

  // One error-signal measurement: 16 modulation periods at 16 samples each.
  const int periods = 16, per_period = 16;
  const double rate = per_period * settings.omega_rad_s / two_pi;
  std::vector<double> batch(static_cast<std::size_t>(periods * per_period));

  LockResult result;
  auto steps = static_cast<std::size_t>(duration_s / step_s);
  result.lo_phase.reserve(steps);
  result.error.reserve(steps);

  double correction = 0.0;
  int saturated_steps = 0;
  for (std::size_t k = 0; k < steps; ++k) {
    double t = static_cast<double>(k) * step_s;
    InterferometerState st = state;
    st.lo_phase = state.lo_phase + drift(t) + state.pzt_gain * correction;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      batch[i] = rf_signal(static_cast<double>(i) / rate, settings, st, phases);
    }
    double err = demodulate_second_harmonic(batch, settings.omega_rad_s, rate);
    correction -= gain / state.pzt_gain * err;
    result.lo_phase.push_back(st.lo_phase);
    result.error.push_back(err);

    // Near the edge of the monotonic capture range the error saturates at
    // |J_2(a)|; a long stretch there means the servo is no longer steering.
    saturated_steps = (std::abs(err) >= 0.98 * j2) ? saturated_steps + 1 : 0;
    if (saturated_steps > 10) result.lost_lock = true;
  }
  return result;
}

}  // namespace qnd::mod
