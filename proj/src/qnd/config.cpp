#include "qnd/config.hpp"

#include "qnd/constants.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace qnd::config {

using constants::two_pi;

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& value) {
  std::size_t pos = 0;
  double v = std::stod(value, &pos);
  if (pos != value.size()) throw config_error("malformed number: " + value);
  return v;
}

int parse_int(const std::string& value) {
  std::size_t pos = 0;
  int v = std::stoi(value, &pos);
  if (pos != value.size()) throw config_error("malformed integer: " + value);
  return v;
}

std::string format_double(double v) {
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

HalfInt parse_half_int(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) {
    return HalfInt::from_int(parse_int(text));
  }
  if (text.substr(slash + 1) != "2") {
    throw config_error("half-integers must use the n/2 form: " + text);
  }
  return HalfInt::from_twice(parse_int(text.substr(0, slash)));
}

std::vector<LineSpec> parse_lines(const std::string& value) {
  // "F:F':offset_MHz" entries separated by commas, e.g. 9/2:7/2:36.575
  std::vector<LineSpec> lines;
  std::stringstream ss(value);
  std::string entry;
  while (std::getline(ss, entry, ',')) {
    entry = trim(entry);
    if (entry.empty()) continue;
    auto c1 = entry.find(':');
    auto c2 = entry.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw config_error("malformed line entry (want F:F':offset_MHz): " + entry);
    }
    LineSpec spec;
    spec.f_ground = parse_half_int(trim(entry.substr(0, c1)));
    spec.f_excited = parse_half_int(trim(entry.substr(c1 + 1, c2 - c1 - 1)));
    spec.offset_mhz = parse_double(trim(entry.substr(c2 + 1)));
    lines.push_back(spec);
  }
  if (lines.empty()) throw config_error("manifold.lines must not be empty");
  return lines;
}

std::string format_lines(const std::vector<LineSpec>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += ",";
    out += l.f_ground.str() + ":" + l.f_excited.str() + ":" +
           format_double(l.offset_mhz);
  }
  return out;
}

struct KeyEntry {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define QND_DOUBLE_KEY(field)                                             \
  {                                                                       \
    [](RunConfig& c, const std::string& v) { c.field = parse_double(v); },\
    [](const RunConfig& c) { return format_double(c.field); }             \
  }
#define QND_INT_KEY(field)                                                \
  {                                                                       \
    [](RunConfig& c, const std::string& v) { c.field = parse_int(v); },   \
    [](const RunConfig& c) { return std::to_string(c.field); }            \
  }

// Ordered section -> key -> accessors table; also fixes serialization order.
const std::vector<std::pair<std::string,
                            std::vector<std::pair<std::string, KeyEntry>>>>&
key_table() {
  static const std::vector<
      std::pair<std::string, std::vector<std::pair<std::string, KeyEntry>>>>
      table = {
          {"manifold",
           {
               {"wavelength_nm", QND_DOUBLE_KEY(wavelength_nm)},
               {"linewidth_mhz", QND_DOUBLE_KEY(linewidth_mhz)},
               {"psat_uw", QND_DOUBLE_KEY(psat_uw)},
               {"two_j_ground", QND_INT_KEY(two_j_ground)},
               {"two_j_excited", QND_INT_KEY(two_j_excited)},
               {"two_i", QND_INT_KEY(two_i)},
               {"lines",
                {[](RunConfig& c, const std::string& v) {
                   c.lines = parse_lines(v);
                 },
                 [](const RunConfig& c) { return format_lines(c.lines); }}},
           }},
          {"populations",
           {
               {"preset",
                {[](RunConfig& c, const std::string& v) {
                   if (v != "sr87_blue_unpolarized" &&
                       v != "sr87_blue_stretched") {
                     throw config_error("unknown population preset: " + v);
                   }
                   c.preset = v;
                 },
                 [](const RunConfig& c) { return c.preset; }}},
               {"total_atoms", QND_DOUBLE_KEY(total_atoms)},
           }},
          {"geometry",
           {
               {"cloud_radius_um", QND_DOUBLE_KEY(cloud_radius_um)},
               {"beam_waist_um", QND_DOUBLE_KEY(beam_waist_um)},
           }},
          {"modulation",
           {
               {"depth_rad", QND_DOUBLE_KEY(depth_rad)},
               {"frequency_mhz", QND_DOUBLE_KEY(frequency_mhz)},
               {"max_order", QND_INT_KEY(max_order)},
           }},
          {"detection",
           {
               {"probe_power_nw", QND_DOUBLE_KEY(probe_power_nw)},
               {"efficiency", QND_DOUBLE_KEY(efficiency)},
               {"pulse_ms", QND_DOUBLE_KEY(pulse_ms)},
               {"sampling_khz", QND_DOUBLE_KEY(sampling_khz)},
               {"electronic_floor_rad2_hz",
                QND_DOUBLE_KEY(electronic_floor_rad2_hz)},
           }},
          {"lattice",
           {
               {"depth_mk", QND_DOUBLE_KEY(depth_mk)},
               {"n_gamma", QND_DOUBLE_KEY(n_gamma)},
               {"atom_mass_u", QND_DOUBLE_KEY(atom_mass_u)},
           }},
          {"sequence",
           {
               {"gap_ms", QND_DOUBLE_KEY(gap_ms)},
               {"projection_noise", QND_INT_KEY(projection_noise)},
               {"pumping_efficiency", QND_DOUBLE_KEY(pumping_efficiency)},
               {"drift_rad_s", QND_DOUBLE_KEY(drift_rad_s)},
           }},
          {"snr",
           {
               {"n_gamma_budget", QND_DOUBLE_KEY(n_gamma_budget)},
           }},
      };
  return table;
}

#undef QND_DOUBLE_KEY
#undef QND_INT_KEY

const KeyEntry* find_key(const std::string& section, const std::string& key) {
  for (const auto& [sec, keys] : key_table()) {
    if (sec != section) continue;
    for (const auto& [name, entry] : keys) {
      if (name == key) return &entry;
    }
    return nullptr;
  }
  return nullptr;
}

bool section_exists(const std::string& section) {
  for (const auto& [sec, keys] : key_table()) {
    if (sec == section) return true;
  }
  return false;
}

}  // namespace

RunConfig parse(std::istream& in) {
  RunConfig config;
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw config_error("line " + std::to_string(line_no) +
                           ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!section_exists(section)) {
        throw config_error("line " + std::to_string(line_no) +
                           ": unknown section [" + section + "]");
      }
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("line " + std::to_string(line_no) +
                         ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      throw config_error("line " + std::to_string(line_no) +
                         ": key outside any section");
    }
    const KeyEntry* entry = find_key(section, key);
    if (!entry) {
      throw config_error("line " + std::to_string(line_no) + ": unknown key " +
                         section + "." + key);
    }
    try {
      entry->set(config, value);
    } catch (const config_error& e) {
      throw config_error("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::exception& e) {
      throw config_error("line " + std::to_string(line_no) + ": bad value for " +
                         section + "." + key + ": " + e.what());
    }
  }
  return config;
}

RunConfig parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  return parse(in);
}

void apply_override(RunConfig& config, const std::string& key,
                    const std::string& value) {
  auto dot = key.find('.');
  if (dot == std::string::npos) {
    throw config_error("override key must be section.key: " + key);
  }
  std::string section = key.substr(0, dot);
  std::string name = key.substr(dot + 1);
  const KeyEntry* entry = find_key(section, name);
  if (!entry) throw config_error("unknown config key: " + key);
  try {
    entry->set(config, value);
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error("bad value for " + key + ": " + e.what());
  }
}

std::string serialize(const RunConfig& config) {
  std::string out;
  for (const auto& [section, keys] : key_table()) {
    out += "[" + section + "]\n";
    for (const auto& [name, entry] : keys) {
      out += name + " = " + entry.get(config) + "\n";
    }
    out += "\n";
  }
  return out;
}

atom::TransitionManifold RunConfig::manifold() const {
  atom::TransitionManifold m;
  m.wavelength_m = wavelength_nm * 1e-9;
  m.linewidth_rad_s = two_pi * linewidth_mhz * 1e6;
  m.j_ground = HalfInt::from_twice(two_j_ground);
  m.j_excited = HalfInt::from_twice(two_j_excited);
  m.nuclear_spin = HalfInt::from_twice(two_i);
  m.saturation_power_w = psat_uw * 1e-6;
  for (const auto& l : lines) {
    m.lines.push_back({l.f_ground, l.f_excited, l.offset_mhz * 1e6});
  }
  m.validate();
  return m;
}

atom::PopulationDistribution RunConfig::populations_for_preset(
    const std::string& name, double atoms) const {
  HalfInt f = HalfInt::from_twice(two_i);  // J = 0 ground state: F = I
  if (name == "sr87_blue_unpolarized") {
    return atom::PopulationDistribution::unpolarized(f, atoms);
  }
  if (name == "sr87_blue_stretched") {
    return atom::PopulationDistribution::stretched(f, atoms);
  }
  throw config_error("unknown population preset: " + name);
}

atom::PopulationDistribution RunConfig::populations(double atoms) const {
  return populations_for_preset(preset, atoms);
}

atom::ProbeGeometry RunConfig::geometry() const {
  return {cloud_radius_um * 1e-6, beam_waist_um * 1e-6};
}

mod::ModulationSettings RunConfig::modulation() const {
  return {depth_rad, two_pi * frequency_mhz * 1e6, max_order};
}

noise::DetectionSettings RunConfig::detection() const {
  return {probe_power_nw * 1e-9, pulse_ms * 1e-3, efficiency,
          sampling_khz * 1e3, electronic_floor_rad2_hz};
}

double RunConfig::atom_mass_kg() const {
  return atom_mass_u * constants::atomic_mass_unit;
}

double RunConfig::omega_rad_s() const { return two_pi * frequency_mhz * 1e6; }

heat::LatticeSettings RunConfig::lattice() const {
  heat::LatticeSettings l;
  l.depth = depth_mk * 1e-3;
  l.unit = heat::DepthUnit::kelvin;
  l.probe_wavelength_m = wavelength_nm * 1e-9;
  l.atom_mass_kg = atom_mass_kg();
  return l;
}

snr::SnrBudget RunConfig::snr_budget() const {
  snr::SnrBudget budget;
  budget.target_n_gamma = n_gamma_budget;
  budget.manifold = manifold();
  budget.populations = populations(total_atoms);
  budget.geometry = geometry();
  budget.detection = detection();
  budget.max_order = max_order;
  return budget;
}

cycle::SequenceConfig RunConfig::sequence(std::uint64_t seed) const {
  cycle::SequenceConfig seq;
  seq.inter_pulse_gap_s = gap_ms * 1e-3;
  seq.detection = detection();
  seq.modulation = modulation();
  seq.manifold = manifold();
  seq.populations = populations(1.0);
  seq.geometry = geometry();
  seq.projection_noise = projection_noise != 0;
  seq.pumping_efficiency = pumping_efficiency;
  seq.drift_rad_s = drift_rad_s;
  seq.seed = seed;
  return seq;
}

}  // namespace qnd::config
