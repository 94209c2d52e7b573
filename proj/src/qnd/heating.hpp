#pragma once

#include "qnd/atomic_structure.hpp"
#include "qnd/modulation.hpp"

#include <vector>

namespace qnd::heat {

enum class DepthUnit { recoil, kelvin, hertz };

struct LatticeSettings {
  double depth = 0.0;
  DepthUnit unit = DepthUnit::recoil;
  double probe_wavelength_m = 461e-9;
  double atom_mass_kg = 0.0;

  // Depth in units of the probe recoil energy.
  double depth_recoils() const;
  void validate() const;
};

struct RetentionPoint {
  double depth_recoils = 0.0;
  double retained_fraction = 0.0;
  double uncertainty = 0.0;
};

// E_R = h^2 / (2 m lambda^2)
double recoil_energy(double wavelength_m, double mass_kg);

// Photons absorbed per atom, n_gamma = P T (Gamma / 2 P_sat)
// * sum_n J_n(a)^2 / (1 + 4 (n omega)^2 / Gamma^2), carrier at resonance.
double absorbed_photons(double power_w, double duration_s,
                        const mod::ModulationSettings& settings,
                        const atom::TransitionManifold& manifold);

// Same quantity with the sideband sum truncated to |n| <= trunc_order.
double absorbed_photons_truncated(double power_w, double duration_s,
                                  const mod::ModulationSettings& settings,
                                  const atom::TransitionManifold& manifold,
                                  int trunc_order);

// beta = 1 - exp(-(U0/E_R) / (2 n_gamma / 3)); n_gamma = 0 returns 1.
double retention_fraction(double depth_recoils, double n_gamma);

struct PhotonFit {
  double n_gamma = 0.0;
  double std_error = 0.0;
};

// Weighted least-squares fit of the retention curve in the single parameter
// n_gamma, golden-section on the 1-D sum of squared residuals.
PhotonFit fit_photon_number(const std::vector<RetentionPoint>& data);

}  // namespace qnd::heat
