#include "qnd/atomic_structure.hpp"

#include "qnd/constants.hpp"
#include "qnd/wigner.hpp"

#include <cmath>
#include <cstdlib>

namespace qnd::atom {

using constants::pi;
using constants::two_pi;

void TransitionManifold::validate() const {
  if (wavelength_m <= 0) throw std::invalid_argument("manifold: wavelength must be > 0");
  if (linewidth_rad_s <= 0) throw std::invalid_argument("manifold: linewidth must be > 0");
  if (saturation_power_w <= 0) throw std::invalid_argument("manifold: P_sat must be > 0");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& l = lines[i];
    int df = std::abs(l.f_ground.twice() - l.f_excited.twice());
    if (df > 2) throw std::invalid_argument("manifold: |F - F'| > 1");
    if (l.f_ground.twice() == 0 && l.f_excited.twice() == 0) {
      throw std::invalid_argument("manifold: F=0 -> F'=0 is forbidden");
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (lines[k].f_ground == l.f_ground && lines[k].f_excited == l.f_excited) {
        throw std::invalid_argument("manifold: duplicate (F, F') line");
      }
    }
  }
}

double PopulationDistribution::total() const {
  double n = 0.0;
  for (const auto& [tm, count] : counts) n += count;
  return n;
}

void PopulationDistribution::validate() const {
  for (const auto& [tm, count] : counts) {
    if (std::abs(tm) > f.twice()) {
      throw std::invalid_argument("populations: |m_F| > F");
    }
    if ((tm + f.twice()) % 2 != 0) {
      throw std::invalid_argument("populations: m_F parity inconsistent with F");
    }
    if (count < 0) throw std::invalid_argument("populations: negative atom number");
  }
}

PopulationDistribution PopulationDistribution::unpolarized(HalfInt f,
                                                           double total_atoms) {
  PopulationDistribution p;
  p.f = f;
  double per_state = total_atoms / f.multiplicity();
  for (int tm = -f.twice(); tm <= f.twice(); tm += 2) p.counts[tm] = per_state;
  return p;
}

PopulationDistribution PopulationDistribution::stretched(HalfInt f,
                                                         double total_atoms,
                                                         int sign) {
  PopulationDistribution p;
  p.f = f;
  p.counts[sign >= 0 ? f.twice() : -f.twice()] = total_atoms;
  return p;
}

void ProbeGeometry::validate() const {
  if (cloud_radius_m < 0) throw std::invalid_argument("geometry: r0 must be >= 0");
  if (beam_waist_m <= 0) throw std::invalid_argument("geometry: w must be > 0");
}

double effective_cross_section(const ProbeGeometry& geometry) {
  geometry.validate();
  double r0 = geometry.cloud_radius_m;
  double w = geometry.beam_waist_m;
  return two_pi * (r0 * r0 + w * w / 4.0);
}

double dispersive_factor(double detuning_hz, double gamma_rad_s) {
  double x = two_pi * detuning_hz;
  double hg = gamma_rad_s / 2.0;
  return hg * x / (x * x + hg * hg);
}

PhaseShiftModel::PhaseShiftModel(const TransitionManifold& manifold,
                                 const PopulationDistribution& populations,
                                 const ProbeGeometry& geometry, int q) {
  manifold.validate();
  populations.validate();
  if (q < -1 || q > 1) throw std::invalid_argument("polarization q must be in {-1,0,+1}");

  bool f_found = false;
  for (const auto& line : manifold.lines) {
    if (line.f_ground == populations.f) f_found = true;
  }
  if (!manifold.lines.empty() && !f_found) {
    throw std::invalid_argument("populations reference an F absent from the manifold");
  }

  gamma_rad_s_ = manifold.linewidth_rad_s;
  double s = effective_cross_section(geometry);
  double lambda = manifold.wavelength_m;
  double prefactor = 3.0 * lambda * lambda * manifold.j_excited.multiplicity() /
                     (4.0 * pi * s);

  const HalfInt one = HalfInt::from_int(1);
  for (const auto& line : manifold.lines) {
    if (line.f_ground != populations.f) continue;
    double weight = 0.0;
    int deg = line.f_excited.multiplicity() * line.f_ground.multiplicity();
    auto sixj = wig::wigner6j(manifold.j_ground, manifold.j_excited, one,
                              line.f_excited, line.f_ground,
                              manifold.nuclear_spin);
    double sixj_sq = static_cast<double>(sixj.squared());
    for (const auto& [tm, count] : populations.counts) {
      if (count == 0.0) continue;
      int tmp = tm - 2 * q;  // m'_F fixed by the 3j selection rule
      if (std::abs(tmp) > line.f_excited.twice()) continue;
      auto threej = wig::wigner3j(line.f_excited, one, line.f_ground,
                                  HalfInt::from_twice(tmp),
                                  HalfInt::from_twice(2 * q),
                                  HalfInt::from_twice(-tm));
      weight += count * deg * static_cast<double>(threej.squared()) * sixj_sq;
    }
    line_offsets_hz_.push_back(line.detuning_offset_hz);
    line_weights_.push_back(prefactor * weight);
  }
}

double PhaseShiftModel::phase_shift(double detuning_hz) const {
  double phi = 0.0;
  for (std::size_t i = 0; i < line_weights_.size(); ++i) {
    phi += line_weights_[i] *
           dispersive_factor(detuning_hz - line_offsets_hz_[i], gamma_rad_s_);
  }
  return phi;
}

double PhaseShiftModel::differential(double omega_rad_s) const {
  if (omega_rad_s <= 0) throw std::invalid_argument("differential: omega must be > 0");
  double f = omega_rad_s / two_pi;
  return phase_shift(f) - phase_shift(-f);
}

double atomic_phase_shift(const TransitionManifold& manifold,
                          const PopulationDistribution& populations,
                          const ProbeGeometry& geometry, int q,
                          double detuning_hz) {
  return PhaseShiftModel(manifold, populations, geometry, q)
      .phase_shift(detuning_hz);
}

double differential_phase(const TransitionManifold& manifold,
                          const PopulationDistribution& populations,
                          const ProbeGeometry& geometry, int q,
                          double omega_rad_s) {
  return PhaseShiftModel(manifold, populations, geometry, q)
      .differential(omega_rad_s);
}

TransitionManifold sr87_blue_manifold(double gamma_rad_s,
                                      double saturation_power_w) {
  TransitionManifold m;
  m.wavelength_m = 461e-9;
  m.linewidth_rad_s = gamma_rad_s;
  m.j_ground = HalfInt::from_int(0);
  m.j_excited = HalfInt::from_int(1);
  m.nuclear_spin = HalfInt::from_twice(9);
  m.saturation_power_w = saturation_power_w;
  // Offsets from the 1P1 hyperfine coefficients A = -3.4 MHz, B = 39 MHz;
  // the degeneracy-weighted average of the three lines is zero, which places
  // the manifold reference at the line barycenter.
  const HalfInt f_g = HalfInt::from_twice(9);
  m.lines = {
      {f_g, HalfInt::from_twice(7), 36.575e6},
      {f_g, HalfInt::from_twice(9), -22.6e6},
      {f_g, HalfInt::from_twice(11), -5.55e6},
  };
  return m;
}

}  // namespace qnd::atom
