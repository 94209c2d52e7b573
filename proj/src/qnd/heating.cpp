#include "qnd/heating.hpp"

#include "qnd/constants.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace qnd::heat {

using constants::boltzmann_kB;
using constants::planck_h;

double recoil_energy(double wavelength_m, double mass_kg) {
  if (wavelength_m <= 0 || mass_kg <= 0) {
    throw std::invalid_argument("recoil_energy: wavelength and mass must be > 0");
  }
  return planck_h * planck_h / (2.0 * mass_kg * wavelength_m * wavelength_m);
}

void LatticeSettings::validate() const {
  if (depth < 0) throw std::invalid_argument("lattice: depth must be >= 0");
  if (probe_wavelength_m <= 0 || atom_mass_kg <= 0) {
    throw std::invalid_argument("lattice: wavelength and mass must be > 0");
  }
}

double LatticeSettings::depth_recoils() const {
  validate();
  double er = recoil_energy(probe_wavelength_m, atom_mass_kg);
  switch (unit) {
    case DepthUnit::recoil:
      return depth;
    case DepthUnit::kelvin:
      return depth * boltzmann_kB / er;
    case DepthUnit::hertz:
      return depth * planck_h / er;
  }
  throw std::logic_error("lattice: unknown depth unit");
}

double absorbed_photons_truncated(double power_w, double duration_s,
                                  const mod::ModulationSettings& settings,
                                  const atom::TransitionManifold& manifold,
                                  int trunc_order) {
  if (power_w < 0 || duration_s < 0) {
    throw std::invalid_argument("absorbed_photons: P and T must be >= 0");
  }
  double gamma = manifold.linewidth_rad_s;
  double sum = 0.0;
  for (int n = -trunc_order; n <= trunc_order; ++n) {
    double jn = boost::math::cyl_bessel_j(std::abs(n), settings.depth_rad);
    double detuning = n * settings.omega_rad_s;
    sum += jn * jn / (1.0 + 4.0 * detuning * detuning / (gamma * gamma));
  }
  return power_w * duration_s * gamma / (2.0 * manifold.saturation_power_w) * sum;
}

double absorbed_photons(double power_w, double duration_s,
                        const mod::ModulationSettings& settings,
                        const atom::TransitionManifold& manifold) {
  return absorbed_photons_truncated(power_w, duration_s, settings, manifold,
                                    settings.max_order);
}

double retention_fraction(double depth_recoils, double n_gamma) {
  if (depth_recoils < 0) throw std::invalid_argument("retention: U0 must be >= 0");
  if (n_gamma < 0) throw std::invalid_argument("retention: n_gamma must be >= 0");
  if (n_gamma == 0.0) return 1.0;  // no heating
  return 1.0 - std::exp(-depth_recoils / (2.0 * n_gamma / 3.0));
}

namespace {

double chi_squared(const std::vector<RetentionPoint>& data, bool weighted,
                   double n_gamma) {
  double chi2 = 0.0;
  for (const auto& p : data) {
    double r = p.retained_fraction - retention_fraction(p.depth_recoils, n_gamma);
    double w = weighted ? 1.0 / (p.uncertainty * p.uncertainty) : 1.0;
    chi2 += w * r * r;
  }
  return chi2;
}

double golden_minimize(const std::function<double(double)>& f, double lo,
                       double hi, double tol) {
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol * (std::abs(a) + std::abs(b) + 1e-30)) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

PhotonFit fit_photon_number(const std::vector<RetentionPoint>& data) {
  if (data.size() < 3) {
    throw std::invalid_argument("fit_photon_number: need at least 3 points");
  }
  auto [dmin, dmax] = std::minmax_element(
      data.begin(), data.end(), [](const auto& a, const auto& b) {
        return a.depth_recoils < b.depth_recoils;
      });
  if (dmin->depth_recoils <= 0 ||
      dmax->depth_recoils < 3.0 * dmin->depth_recoils) {
    throw std::invalid_argument(
        "fit_photon_number: depths must span at least a factor 3");
  }
  bool saturated = std::all_of(data.begin(), data.end(), [](const auto& p) {
    return p.retained_fraction > 0.99;
  });
  if (saturated) {
    throw std::domain_error(
        "fit_photon_number: all retentions > 0.99, n_gamma not identifiable");
  }
  bool weighted = std::all_of(data.begin(), data.end(),
                              [](const auto& p) { return p.uncertainty > 0; });

  auto objective = [&](double n) { return chi_squared(data, weighted, n); };

  // Coarse log-spaced scan to bracket the minimum.
  const int scan_points = 120;
  double best = 1.0, best_val = objective(1.0);
  double log_lo = std::log(1e-2), log_hi = std::log(1e6);
  for (int i = 0; i < scan_points; ++i) {
    double n = std::exp(log_lo + (log_hi - log_lo) * i / (scan_points - 1));
    double v = objective(n);
    if (v < best_val) {
      best_val = v;
      best = n;
    }
  }
  double step = std::exp((log_hi - log_lo) / (scan_points - 1));
  double n_hat = golden_minimize(objective, best / step, best * step, 1e-10);

  // Standard error from the curvature of chi^2 at the minimum.
  double h = std::max(1e-4 * n_hat, 1e-9);
  double curv = (objective(n_hat + h) - 2.0 * objective(n_hat) +
                 objective(n_hat - h)) /
                (h * h);
  double se = 0.0;
  if (curv > 0) {
    if (weighted) {
      se = std::sqrt(2.0 / curv);
    } else {
      double resid_var = objective(n_hat) / static_cast<double>(data.size() - 1);
      se = std::sqrt(2.0 * resid_var / curv);
    }
  }
  return {n_hat, se};
}

}  // namespace qnd::heat
