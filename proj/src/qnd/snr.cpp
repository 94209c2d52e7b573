#include "qnd/snr.hpp"

#include "qnd/constants.hpp"
#include "qnd/heating.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <functional>
#include <stdexcept>

namespace qnd::snr {

void SnrBudget::validate() const {
  if (target_n_gamma <= 0) {
    throw std::invalid_argument("snr budget: target_n_gamma must be > 0");
  }
  manifold.validate();
  populations.validate();
  geometry.validate();
  detection.validate();
}

namespace {

class Evaluator {
 public:
  explicit Evaluator(const SnrBudget& budget)
      : budget_(budget),
        model_(budget.manifold, budget.populations, budget.geometry,
               budget.polarization_q) {
    budget.validate();
  }

  // trunc_order < 0 means the full sideband sum.
  double snr_at(double omega_rad_s, double depth_rad, int trunc_order) const {
    if (omega_rad_s <= 0) throw std::invalid_argument("snr: omega must be > 0");
    double j1 = boost::math::cyl_bessel_j(1, depth_rad);
    if (std::abs(j1) < 1e-12) {
      throw std::domain_error("snr: budget unrealizable, J_1(a) = 0");
    }

    mod::ModulationSettings settings{depth_rad, omega_rad_s, budget_.max_order};
    int order = trunc_order < 0 ? budget_.max_order : trunc_order;
    double n_gamma_per_joule = heat::absorbed_photons_truncated(
        1.0, 1.0, settings, budget_.manifold, order);
    double pt = budget_.target_n_gamma / n_gamma_per_joule;

    double sigma2 = constants::planck_h * constants::speed_of_light /
                    (4.0 * budget_.manifold.wavelength_m * j1 * j1 *
                     budget_.detection.efficiency * pt);
    double signal = model_.differential(omega_rad_s);
    return signal / std::sqrt(2.0 * sigma2);
  }

 private:
  const SnrBudget& budget_;
  atom::PhaseShiftModel model_;
};

double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 > f2) {
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

double evaluate(double omega_rad_s, double depth_rad, const SnrBudget& budget) {
  return Evaluator(budget).snr_at(omega_rad_s, depth_rad, -1);
}

OptimizationResult optimize_modulation(const SnrBudget& budget,
                                       Range omega_range, Range depth_range) {
  if (omega_range.lo <= 0 || omega_range.hi <= omega_range.lo ||
      depth_range.hi <= depth_range.lo || depth_range.lo < 0) {
    throw std::invalid_argument("optimize_modulation: invalid search ranges");
  }
  Evaluator eval(budget);

  const int grid_n = 50;
  OptimizationResult result;
  result.grid.reserve(grid_n * grid_n);
  double best = -1.0;
  double best_w = omega_range.lo, best_a = depth_range.lo;
  for (int i = 0; i < grid_n; ++i) {
    double w = omega_range.lo +
               (omega_range.hi - omega_range.lo) * i / (grid_n - 1);
    for (int k = 0; k < grid_n; ++k) {
      double a = depth_range.lo +
                 (depth_range.hi - depth_range.lo) * k / (grid_n - 1);
      double s = std::abs(boost::math::cyl_bessel_j(1, a)) < 1e-9
                     ? 0.0
                     : eval.snr_at(w, a, -1);
      result.grid.push_back({w, a, s});
      if (s > best) {  // strict: ties keep the lowest omega, then lowest a
        best = s;
        best_w = w;
        best_a = a;
      }
    }
  }

  double dw = (omega_range.hi - omega_range.lo) / (grid_n - 1);
  double da = (depth_range.hi - depth_range.lo) / (grid_n - 1);
  for (int round = 0; round < 2; ++round) {
    double w_lo = std::max(omega_range.lo, best_w - dw);
    double w_hi = std::min(omega_range.hi, best_w + dw);
    best_w = golden_max([&](double w) { return eval.snr_at(w, best_a, -1); },
                        w_lo, w_hi, 1e-6 * (omega_range.hi - omega_range.lo));
    double a_lo = std::max(depth_range.lo, best_a - da);
    double a_hi = std::min(depth_range.hi, best_a + da);
    best_a = golden_max([&](double a) { return eval.snr_at(best_w, a, -1); },
                        a_lo, a_hi, 1e-6);
  }

  result.omega_rad_s = best_w;
  result.depth_rad = best_a;
  result.snr = eval.snr_at(best_w, best_a, -1);
  double w_span = omega_range.hi - omega_range.lo;
  double a_span = depth_range.hi - depth_range.lo;
  result.on_boundary = best_w - omega_range.lo < 1e-3 * w_span ||
                       omega_range.hi - best_w < 1e-3 * w_span ||
                       best_a - depth_range.lo < 1e-3 * a_span ||
                       depth_range.hi - best_a < 1e-3 * a_span;
  return result;
}

double sideband_loss_fraction(double omega_rad_s, double depth_rad,
                              const SnrBudget& budget) {
  Evaluator eval(budget);
  double full = eval.snr_at(omega_rad_s, depth_rad, -1);
  double truncated = eval.snr_at(omega_rad_s, depth_rad, 1);
  return 1.0 - full / truncated;
}

}  // namespace qnd::snr
