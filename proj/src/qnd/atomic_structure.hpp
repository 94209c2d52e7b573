#pragma once

#include "qnd/half_int.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace qnd::atom {

// One hyperfine component F -> F' of the probed transition. The offset is the
// line position relative to the manifold reference frequency, in Hz.
struct HyperfineLine {
  HalfInt f_ground;
  HalfInt f_excited;
  double detuning_offset_hz = 0.0;
};

struct TransitionManifold {
  double wavelength_m = 0.0;
  double linewidth_rad_s = 0.0;  // natural linewidth Gamma (angular)
  HalfInt j_ground;
  HalfInt j_excited;
  HalfInt nuclear_spin;
  std::vector<HyperfineLine> lines;
  double saturation_power_w = 0.0;

  void validate() const;
};

// Atom number per ground-state Zeeman substate, keyed by twice(m_F).
struct PopulationDistribution {
  HalfInt f;
  std::map<int, double> counts;

  double total() const;
  void validate() const;

  static PopulationDistribution unpolarized(HalfInt f, double total_atoms);
  static PopulationDistribution stretched(HalfInt f, double total_atoms,
                                          int sign = +1);
};

struct ProbeGeometry {
  double cloud_radius_m = 0.0;  // transverse standard deviation r0
  double beam_waist_m = 0.0;    // 1/e^2 radius w

  void validate() const;
};

// S = 2*pi*(r0^2 + w^2/4), the transverse-averaged cross section.
double effective_cross_section(const ProbeGeometry& geometry);

// Odd Lorentzian dispersion factor (Gamma/2)*D / (D^2 + (Gamma/2)^2).
// The detuning is an ordinary frequency in Hz, converted internally.
double dispersive_factor(double detuning_hz, double gamma_rad_s);

// Dispersive phase shift of a probe with polarization q at the given
// detuning from the manifold reference, in rad. Sign convention: positive
// detuning above an isolated line gives a positive phase for positive
// populations.
double atomic_phase_shift(const TransitionManifold& manifold,
                          const PopulationDistribution& populations,
                          const ProbeGeometry& geometry, int q,
                          double detuning_hz);

// phi_at(+omega) - phi_at(-omega), the first-harmonic signal numerator.
// omega is the (angular) modulation frequency; the probe carrier sits at the
// manifold reference.
double differential_phase(const TransitionManifold& manifold,
                          const PopulationDistribution& populations,
                          const ProbeGeometry& geometry, int q,
                          double omega_rad_s);

// Precomputed per-line angular weights so spectra do not re-evaluate the
// Wigner algebra at every detuning. weight[i] multiplies the dispersive
// factor of lines[i].
class PhaseShiftModel {
 public:
  PhaseShiftModel(const TransitionManifold& manifold,
                  const PopulationDistribution& populations,
                  const ProbeGeometry& geometry, int q);

  double phase_shift(double detuning_hz) const;
  double differential(double omega_rad_s) const;

 private:
  std::vector<double> line_offsets_hz_;
  std::vector<double> line_weights_;  // includes the Eq.-(1) prefactor
  double gamma_rad_s_ = 0.0;
};

// Defaults for the 87Sr 1S0-1P1 ("blue", 461 nm) probe transition. The
// hyperfine offsets come from the A and B coefficients of 1P1 and are
// centered so that the degeneracy-weighted line average is zero.
TransitionManifold sr87_blue_manifold(double gamma_rad_s,
                                      double saturation_power_w);

}  // namespace qnd::atom
