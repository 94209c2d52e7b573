#pragma once

#include "qnd/atomic_structure.hpp"
#include "qnd/noise.hpp"

#include <vector>

namespace qnd::snr {

struct SnrBudget {
  double target_n_gamma = 80.0;  // photons absorbed per atom, fixed budget
  atom::TransitionManifold manifold;
  atom::PopulationDistribution populations;
  atom::ProbeGeometry geometry;
  noise::DetectionSettings detection;
  int polarization_q = 0;
  int max_order = 8;

  void validate() const;
};

// Detection SNR at modulation (omega, a): differential atomic phase over the
// first-sideband shot noise, with the P*T product fixed by the photon budget.
double evaluate(double omega_rad_s, double depth_rad, const SnrBudget& budget);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct GridPoint {
  double omega_rad_s = 0.0;
  double depth_rad = 0.0;
  double snr = 0.0;
};

struct OptimizationResult {
  double omega_rad_s = 0.0;
  double depth_rad = 0.0;
  double snr = 0.0;
  bool on_boundary = false;
  std::vector<GridPoint> grid;  // coarse grid, row-major in (omega, a)
};

// Coarse 50x50 grid search followed by two rounds of per-axis golden-section
// refinement. Deterministic; ties break toward lower omega, then lower a.
OptimizationResult optimize_modulation(const SnrBudget& budget,
                                       Range omega_range, Range depth_range);

// Fractional SNR degradation from the power in sidebands |n| > 1, at a fixed
// photon budget: 1 - SNR(full heating sum) / SNR(sum truncated to |n| <= 1).
double sideband_loss_fraction(double omega_rad_s, double depth_rad,
                              const SnrBudget& budget);

}  // namespace qnd::snr
