#pragma once

#include "qnd/atomic_structure.hpp"
#include "qnd/modulation.hpp"
#include "qnd/noise.hpp"

#include <cstdint>
#include <optional>

namespace qnd::cycle {

struct SequenceConfig {
  double inter_pulse_gap_s = 7e-3;
  noise::DetectionSettings detection;
  mod::ModulationSettings modulation;
  atom::TransitionManifold manifold;
  atom::PopulationDistribution populations;  // shape at total N = 1
  atom::ProbeGeometry geometry;
  int polarization_q = 0;
  bool noiseless = false;
  bool projection_noise = false;
  double pumping_efficiency = 1.0;
  double drift_rad_s = 0.0;  // linear phase drift between pulses
  std::uint64_t seed = 0;

  void validate() const;
};

// One simulated detection cycle. Phases are differential atomic phases,
// phi_at(+omega) - phi_at(-omega), in rad.
struct CycleResult {
  double phase_ground = 0.0;            // pulse seeing the ground-state atoms
  double phase_total = 0.0;             // three-pulse only: repumped atoms
  double phase_reference = 0.0;         // dark-state reference pulse
  double estimated_atoms = 0.0;
  double estimated_probability = 0.0;   // clamped to [0, 1]
  double raw_probability = 0.0;         // unclamped estimate
  double per_pulse_rms = 0.0;           // analytic per-pulse phase noise
};

// Two-pulse population measurement: probe, shelve to dark states, reference
// probe. phase_ground holds the two-pulse difference.
CycleResult simulate_population_measurement(double atoms,
                                            const SequenceConfig& config);

// Three-pulse transition-probability measurement: ground-state pulse,
// repumped total-atom pulse, dark-state reference pulse.
CycleResult simulate_transition_probability(double atoms, double p_true,
                                            const SequenceConfig& config);

struct DutyCycleProjection {
  double duty_cycle = 0.0;
  long cycles_until_reload = 0;  // -1 when recycling is unbounded (beta = 1)
};

DutyCycleProjection duty_cycle_projection(double load_time_s,
                                          double interrogation_time_s,
                                          double detection_dead_time_s,
                                          double retention_beta,
                                          double min_atoms,
                                          double initial_atoms);

}  // namespace qnd::cycle
