#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace qnd::mod {

struct ModulationSettings {
  double depth_rad = 2.4;          // EOM modulation depth a
  double omega_rad_s = 0.0;        // modulation angular frequency
  int max_order = 8;               // sideband truncation |n| <= max_order

  void validate() const;
};

struct InterferometerState {
  double lo_phase = 0.0;           // phi_0
  double global_phase = 0.0;       // phi_s, common to all sidebands
  double lock_bandwidth_hz = 10e3;
  double pzt_gain = 1.0;           // rad per control unit
};

// Total phase phi_(n) per sideband, |n| <= max_order.
struct SidebandPhases {
  std::map<int, double> phase;

  double at(int n) const;
  // phi_(n) = atomic(n*omega) + delta_phi(n) + phi_s
  static SidebandPhases assemble(int n_max,
                                 const std::function<double(int)>& atomic,
                                 const std::function<double(int)>& laser_noise,
                                 double global_phase);
};

// J_n(a) for -n_max <= n <= n_max, with J_{-n} = (-1)^n J_n.
std::map<int, double> sideband_amplitudes(double depth_rad, int n_max);

// One sample of the RF difference photocurrent at time t (unit overall gain).
double rf_signal(double t, const ModulationSettings& settings,
                 const InterferometerState& state,
                 const SidebandPhases& phases);

struct Demodulation {
  double amplitude = 0.0;
  double phase = 0.0;
};

// Quadrature demodulation at omega over an integer number of modulation
// periods. Returns the first-harmonic amplitude and phase; the phase equals
// (phi_(1) - phi_(-1))/2 of the generating model. Throws if fewer than 10
// modulation periods are supplied.
Demodulation demodulate_first_harmonic(std::span<const double> samples,
                                       double omega_rad_s, double rate_hz);

// In-phase amplitude of the 2-omega component, proportional to
// J_2(a) cos(phi0 - (phi_(2)+phi_(-2))/2); zero at the lock point.
double demodulate_second_harmonic(std::span<const double> samples,
                                  double omega_rad_s, double rate_hz);

struct LockResult {
  std::vector<double> lo_phase;    // locked phi0 trajectory, one per step
  std::vector<double> error;      // residual 2f error signal
  bool lost_lock = false;
};

// Discrete-time integrator servo on phi0, driven by the 2f error signal.
// The drift generator gives the free-running phi0 perturbation at time t.
LockResult simulate_lock(const std::function<double(double)>& drift,
                         const ModulationSettings& settings,
                         const InterferometerState& state,
                         const SidebandPhases& phases, double duration_s,
                         double step_s, std::uint64_t seed);

}  // namespace qnd::mod
