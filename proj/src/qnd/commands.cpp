#include "qnd/commands.hpp"

#include "qnd/constants.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace qnd::cmd {

using constants::two_pi;

std::string format_csv_double(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

namespace {

int row_count(double min_v, double max_v, double step) {
  if (step <= 0) throw std::invalid_argument("step must be > 0");
  if (max_v < min_v) throw std::invalid_argument("range must be non-empty");
  return static_cast<int>(std::floor((max_v - min_v) / step + 1e-9)) + 1;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double rms_about_mean(const std::vector<double>& v) {
  double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

void phase_spectrum(const config::RunConfig& config, double min_mhz,
                    double max_mhz, double step_mhz, std::ostream& out) {
  auto manifold = config.manifold();
  auto geometry = config.geometry();
  atom::PhaseShiftModel unpolarized(
      manifold,
      config.populations_for_preset("sr87_blue_unpolarized", config.total_atoms),
      geometry, 0);
  atom::PhaseShiftModel stretched(
      manifold,
      config.populations_for_preset("sr87_blue_stretched", config.total_atoms),
      geometry, 0);

  out << "detuning_MHz,phase_unpolarized_mrad,phase_stretched_mrad\n";
  int rows = row_count(min_mhz, max_mhz, step_mhz);
  for (int i = 0; i < rows; ++i) {
    double detuning_mhz = min_mhz + i * step_mhz;
    double hz = detuning_mhz * 1e6;
    out << format_csv_double(detuning_mhz) << ','
        << format_csv_double(unpolarized.phase_shift(hz) * 1e3) << ','
        << format_csv_double(stretched.phase_shift(hz) * 1e3) << '\n';
  }
}

void noise_psd(const config::RunConfig& config,
               const std::vector<double>& detected_powers_nw,
               std::uint64_t seed, std::ostream& out) {
  const int mc_trials = 200;
  auto base = config.detection();
  double lambda = config.wavelength_nm * 1e-9;
  double a = config.depth_rad;
  double t = base.pulse_duration_s;

  out << "detected_power_nW,white_level_rad2_per_Hz,rms_mrad_per_pulse,"
         "rms_mc_mrad_per_pulse\n";
  for (std::size_t i = 0; i < detected_powers_nw.size(); ++i) {
    auto d = base;
    d.probe_power_w = detected_powers_nw[i] * 1e-9 / d.efficiency;
    auto psd = noise::phase_noise_psd(d, a, lambda);
    double sigma2 = noise::shot_noise_variance(a, d, lambda);
    double model_rms =
        std::sqrt(2.0 * sigma2 + 2.0 * d.electronic_floor / t) * 1e3;

    std::vector<double> diffs(mc_trials);
    for (int k = 0; k < mc_trials; ++k) {
      auto sample = noise::generate_noise(
          psd, t, d.sampling_rate_hz, noise::mix_seed(seed, i * mc_trials + k));
      double m = 0.0;
      for (std::size_t j = 0; j < sample.upper.size(); ++j) {
        m += sample.upper[j] - sample.lower[j];
      }
      diffs[k] = m / static_cast<double>(sample.upper.size());
    }
    double mc_rms = rms_about_mean(diffs) * 1e3;

    out << format_csv_double(detected_powers_nw[i]) << ','
        << format_csv_double(psd.white_level) << ','
        << format_csv_double(model_rms) << ',' << format_csv_double(mc_rms)
        << '\n';
  }

  if (base.electronic_floor > 0) {
    double j1 = boost::math::cyl_bessel_j(1, a);
    double crossover_w = constants::planck_h * constants::speed_of_light /
                         (4.0 * lambda * j1 * j1 * base.electronic_floor);
    out << "# shot_limit_crossover_detected_nW = "
        << format_csv_double(crossover_w * 1e9) << '\n';
  }
}

void retention(const config::RunConfig& config, double min_er, double max_er,
               double step_er, const std::optional<std::string>& fit_csv_path,
               std::ostream& out) {
  double er_joule =
      heat::recoil_energy(config.wavelength_nm * 1e-9, config.atom_mass_kg());
  double er_to_mk = er_joule / constants::boltzmann_kB * 1e3;

  out << "depth_Er,depth_mK,beta_model\n";
  int rows = row_count(min_er, max_er, step_er);
  for (int i = 0; i < rows; ++i) {
    double depth = min_er + i * step_er;
    out << format_csv_double(depth) << ','
        << format_csv_double(depth * er_to_mk) << ','
        << format_csv_double(heat::retention_fraction(depth, config.n_gamma))
        << '\n';
  }

  if (fit_csv_path) {
    std::ifstream in(*fit_csv_path);
    if (!in) {
      throw std::runtime_error("cannot open retention data: " + *fit_csv_path);
    }
    std::vector<heat::RetentionPoint> data;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (first && line.find("depth_Er") != std::string::npos) {
        first = false;
        continue;
      }
      first = false;
      std::stringstream ss(line);
      std::string cell;
      heat::RetentionPoint p;
      if (!std::getline(ss, cell, ',')) continue;
      p.depth_recoils = std::stod(cell);
      if (!std::getline(ss, cell, ',')) {
        throw std::runtime_error("retention data: missing retained_fraction");
      }
      p.retained_fraction = std::stod(cell);
      if (std::getline(ss, cell, ',')) p.uncertainty = std::stod(cell);
      data.push_back(p);
    }
    auto fit = heat::fit_photon_number(data);
    out << "# n_gamma_estimate = " << format_csv_double(fit.n_gamma) << '\n';
    out << "# n_gamma_std_error = " << format_csv_double(fit.std_error) << '\n';
  }
}

void snr_map(const config::RunConfig& config, double min_mhz, double max_mhz,
             double min_a, double max_a, std::ostream& out) {
  auto budget = config.snr_budget();
  snr::Range omega_range{two_pi * min_mhz * 1e6, two_pi * max_mhz * 1e6};
  snr::Range depth_range{min_a, max_a};
  auto result = snr::optimize_modulation(budget, omega_range, depth_range);

  out << "frequency_MHz,depth_rad,snr\n";
  for (const auto& point : result.grid) {
    out << format_csv_double(point.omega_rad_s / (two_pi * 1e6)) << ','
        << format_csv_double(point.depth_rad) << ','
        << format_csv_double(point.snr) << '\n';
  }

  out << "# optimum_frequency_MHz = "
      << format_csv_double(result.omega_rad_s / (two_pi * 1e6)) << '\n';
  out << "# optimum_depth_rad = " << format_csv_double(result.depth_rad) << '\n';
  out << "# optimum_snr = " << format_csv_double(result.snr) << '\n';
  if (result.on_boundary) out << "# warning: optimum on search boundary\n";

  // Figures of merit at the nominal operating point.
  double w0 = config.omega_rad_s();
  out << "# sideband_loss_at_operating_point = "
      << format_csv_double(snr::sideband_loss_fraction(w0, 2.4, budget)) << '\n';
  for (double gamma_mhz : {28.0, 32.0}) {
    auto b = budget;
    b.manifold.linewidth_rad_s = two_pi * gamma_mhz * 1e6;
    out << "# sideband_loss_gamma_" << format_csv_double(gamma_mhz)
        << "_MHz = "
        << format_csv_double(snr::sideband_loss_fraction(w0, 2.4, b)) << '\n';
  }

  double snr_opt = result.snr;
  for (double da : {-0.4, 0.4}) {
    double a = result.depth_rad + da;
    if (a <= 0) continue;
    out << "# snr_ratio_at_depth_" << format_csv_double(a) << " = "
        << format_csv_double(snr::evaluate(result.omega_rad_s, a, budget) /
                             snr_opt)
        << '\n';
  }
  double gamma = budget.manifold.linewidth_rad_s;
  out << "# snr_3gamma_over_10gamma = "
      << format_csv_double(snr::evaluate(3.0 * gamma, 2.4, budget) /
                           snr::evaluate(10.0 * gamma, 2.4, budget))
      << '\n';
}

void cycle_batches(const config::RunConfig& config,
                   const std::vector<double>& atom_numbers,
                   const std::vector<double>& probabilities, int trials,
                   std::uint64_t seed, int jobs, std::ostream& out) {
  if (trials <= 0) throw std::invalid_argument("trials must be > 0");
  if (jobs <= 0) jobs = 1;

  std::vector<double> p_list = probabilities;
  if (p_list.empty()) p_list.push_back(-1.0);  // population measurement only

  struct Row {
    std::uint64_t seed;
    double atoms, p_true;
    cycle::CycleResult result;
  };

  out << "seed,N_true,p_true,phase_ground_mrad,phase_total_mrad,"
         "phase_ref_mrad,p_est,N_est\n";

  std::vector<std::string> summary;
  std::vector<std::pair<double, double>> rms_vs_n;  // for the 1/N slope

  std::uint64_t batch_index = 0;
  for (double atoms : atom_numbers) {
    for (double p_true : p_list) {
      std::vector<Row> rows(static_cast<std::size_t>(trials));
      auto worker = [&](int first, int last) {
        for (int t = first; t < last; ++t) {
          std::uint64_t trial_seed = noise::mix_seed(
              seed, batch_index * static_cast<std::uint64_t>(trials) +
                        static_cast<std::uint64_t>(t));
          auto seq = config.sequence(trial_seed);
          Row row{trial_seed, atoms, p_true, {}};
          row.result =
              p_true < 0
                  ? cycle::simulate_population_measurement(atoms, seq)
                  : cycle::simulate_transition_probability(atoms, p_true, seq);
          rows[static_cast<std::size_t>(t)] = row;
        }
      };
      if (jobs == 1) {
        worker(0, trials);
      } else {
        std::vector<std::thread> pool;
        int chunk = (trials + jobs - 1) / jobs;
        for (int j = 0; j < jobs; ++j) {
          int first = j * chunk, last = std::min(trials, (j + 1) * chunk);
          if (first >= last) break;
          pool.emplace_back(worker, first, last);
        }
        for (auto& th : pool) th.join();
      }

      std::vector<double> phases, p_ests;
      for (const auto& row : rows) {
        const auto& r = row.result;
        out << row.seed << ',' << format_csv_double(row.atoms) << ','
            << format_csv_double(row.p_true) << ','
            << format_csv_double(r.phase_ground * 1e3) << ','
            << format_csv_double(r.phase_total * 1e3) << ','
            << format_csv_double(r.phase_reference * 1e3) << ','
            << format_csv_double(r.estimated_probability) << ','
            << format_csv_double(r.estimated_atoms) << '\n';
        phases.push_back(r.phase_ground);
        p_ests.push_back(r.estimated_probability);
      }

      std::string tag = "N=" + format_csv_double(atoms) +
                        ",p=" + format_csv_double(p_true);
      if (p_true < 0) {
        double m = mean(phases), s = rms_about_mean(phases);
        summary.push_back("# " + tag + " mean_phase_mrad = " +
                          format_csv_double(m * 1e3));
        summary.push_back("# " + tag + " phase_rms_mrad = " +
                          format_csv_double(s * 1e3));
        if (s > 0) {
          summary.push_back("# " + tag + " per_cycle_snr = " +
                            format_csv_double(m / s));
        }
      } else {
        double err = 0.0;
        for (double p : p_ests) err += (p - p_true) * (p - p_true);
        double rms_p = std::sqrt(err / static_cast<double>(p_ests.size()));
        summary.push_back("# " + tag + " rms_p = " + format_csv_double(rms_p));
        rms_vs_n.emplace_back(atoms, rms_p);
      }
      ++batch_index;
    }
  }

  for (const auto& line : summary) out << line << '\n';

  // log-log slope of RMS(p) vs N across the first probability batch per N
  if (rms_vs_n.size() >= 2 && p_list.size() >= 1 && p_list[0] >= 0) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < rms_vs_n.size(); i += p_list.size()) {
      if (rms_vs_n[i].second > 0) {
        pts.emplace_back(std::log(rms_vs_n[i].first),
                         std::log(rms_vs_n[i].second));
      }
    }
    if (pts.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      double n = static_cast<double>(pts.size());
      double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      out << "# rms_p_vs_N_loglog_slope = " << format_csv_double(slope) << '\n';
    }
  }
}

}  // namespace qnd::cmd
