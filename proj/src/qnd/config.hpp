#pragma once

#include "qnd/atomic_structure.hpp"
#include "qnd/cycle.hpp"
#include "qnd/heating.hpp"
#include "qnd/modulation.hpp"
#include "qnd/noise.hpp"
#include "qnd/snr.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace qnd::config {

// Raised for malformed config text or unknown keys; carries the line number
// when one is available.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LineSpec {
  HalfInt f_ground;
  HalfInt f_excited;
  double offset_mhz = 0.0;
};

// Typed run configuration. Field defaults are the shipped defaults; the
// INI-style file and --set overrides replace them per key.
struct RunConfig {
  // [manifold]
  double wavelength_nm = 461.0;
  double linewidth_mhz = 30.0;  // Gamma / 2 pi
  double psat_uw = 1.2;
  int two_j_ground = 0;
  int two_j_excited = 2;
  int two_i = 9;
  std::vector<LineSpec> lines = {
      {HalfInt::from_twice(9), HalfInt::from_twice(7), 36.575},
      {HalfInt::from_twice(9), HalfInt::from_twice(9), -22.6},
      {HalfInt::from_twice(9), HalfInt::from_twice(11), -5.55},
  };

  // [populations]
  std::string preset = "sr87_blue_unpolarized";
  double total_atoms = 1e4;

  // [geometry]
  double cloud_radius_um = 10.0;
  double beam_waist_um = 37.0;

  // [modulation]
  double depth_rad = 2.4;
  double frequency_mhz = 90.0;
  int max_order = 8;

  // [detection]
  double probe_power_nw = 12.0;
  double efficiency = 0.43;
  double pulse_ms = 3.0;
  double sampling_khz = 500.0;
  double electronic_floor_rad2_hz = 1e-11;

  // [lattice]
  double depth_mk = 0.1;
  double n_gamma = 103.0;
  double atom_mass_u = 86.9089;

  // [sequence]
  double gap_ms = 7.0;
  int projection_noise = 0;
  double pumping_efficiency = 1.0;
  double drift_rad_s = 0.0;

  // [snr]
  double n_gamma_budget = 80.0;

  // Assembled module objects.
  atom::TransitionManifold manifold() const;
  atom::PopulationDistribution populations(double atoms) const;
  atom::PopulationDistribution populations_for_preset(const std::string& name,
                                                      double atoms) const;
  atom::ProbeGeometry geometry() const;
  mod::ModulationSettings modulation() const;
  noise::DetectionSettings detection() const;
  heat::LatticeSettings lattice() const;
  snr::SnrBudget snr_budget() const;
  cycle::SequenceConfig sequence(std::uint64_t seed) const;

  double atom_mass_kg() const;
  double omega_rad_s() const;
};

// Parse an INI-style document ([section], key = value, '#' comments).
// Unknown sections or keys are errors with line diagnostics.
RunConfig parse(std::istream& in);
RunConfig parse_file(const std::string& path);

// Apply one "section.key=value" override.
void apply_override(RunConfig& config, const std::string& key,
                    const std::string& value);

// Canonical serialization; parse(serialize(c)) reproduces c.
std::string serialize(const RunConfig& config);

}  // namespace qnd::config
