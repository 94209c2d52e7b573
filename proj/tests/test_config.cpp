#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qnd/config.hpp"
#include "qnd/constants.hpp"

#include <sstream>
#include <string>

using namespace qnd;
using namespace qnd::config;

namespace {

RunConfig parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

std::string error_of(const std::string& text) {
  try {
    parse_text(text);
  } catch (const config_error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("serialize / parse round trip") {
  RunConfig defaults;
  auto text = serialize(defaults);
  auto parsed = parse_text(text);
  CHECK(serialize(parsed) == text);

  // Mutate a few fields of every type and round-trip again.
  RunConfig custom;
  custom.wavelength_nm = 460.7333;
  custom.max_order = 5;
  custom.preset = "sr87_blue_stretched";
  custom.lines = {{HalfInt::from_twice(9), HalfInt::from_twice(11), -5.55}};
  custom.drift_rad_s = 0.125;
  auto round = parse_text(serialize(custom));
  CHECK(serialize(round) == serialize(custom));
  CHECK(round.wavelength_nm == custom.wavelength_nm);
  CHECK(round.max_order == 5);
  CHECK(round.preset == "sr87_blue_stretched");
  CHECK(round.lines.size() == 1);
  CHECK(round.lines[0].offset_mhz == -5.55);
}

TEST_CASE("file-style parsing with sections and comments") {
  auto c = parse_text(
      "# probe setup\n"
      "[modulation]\n"
      "depth_rad = 2.405   # carrier suppression\n"
      "frequency_mhz = 60\n"
      "\n"
      "[detection]\n"
      "probe_power_nw = 14\n");
  CHECK(c.depth_rad == 2.405);
  CHECK(c.frequency_mhz == 60.0);
  CHECK(c.probe_power_nw == 14.0);
  // Untouched keys keep their defaults.
  CHECK(c.pulse_ms == 3.0);
  CHECK(c.preset == "sr87_blue_unpolarized");
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(error_of("[nosuch]\n").find("line 1") != std::string::npos);
  CHECK(error_of("[nosuch]\n").find("unknown section") != std::string::npos);

  auto unknown_key = error_of("[modulation]\nwobble = 3\n");
  CHECK(unknown_key.find("line 2") != std::string::npos);
  CHECK(unknown_key.find("modulation.wobble") != std::string::npos);

  CHECK(error_of("depth_rad = 2.4\n").find("outside any section") !=
        std::string::npos);
  CHECK(error_of("[modulation\n").find("unterminated") != std::string::npos);
  CHECK(error_of("[modulation]\ndepth_rad\n").find("key = value") !=
        std::string::npos);

  auto bad_value = error_of("[modulation]\n\ndepth_rad = fast\n");
  CHECK(bad_value.find("line 3") != std::string::npos);
  CHECK(bad_value.find("depth_rad") != std::string::npos);

  CHECK_THROWS_AS(parse_text("[modulation]\nmax_order = 2.5\n"), config_error);
  CHECK_THROWS_AS(parse_text("[populations]\npreset = martian\n"),
                  config_error);
}

TEST_CASE("overrides") {
  RunConfig c;
  apply_override(c, "modulation.depth_rad", "1.8");
  CHECK(c.depth_rad == 1.8);
  apply_override(c, "populations.preset", "sr87_blue_stretched");
  CHECK(c.preset == "sr87_blue_stretched");
  apply_override(c, "sequence.projection_noise", "1");
  CHECK(c.projection_noise == 1);

  CHECK_THROWS_AS(apply_override(c, "depth_rad", "1.8"), config_error);
  CHECK_THROWS_AS(apply_override(c, "modulation.wobble", "1"), config_error);
  CHECK_THROWS_AS(apply_override(c, "modulation.depth_rad", "abc"),
                  config_error);
}

TEST_CASE("line list parsing") {
  auto c = parse_text(
      "[manifold]\n"
      "lines = 9/2:7/2:36.575, 9/2:9/2:-22.6, 9/2:11/2:-5.55\n");
  REQUIRE(c.lines.size() == 3);
  CHECK(c.lines[0].f_excited == HalfInt::from_twice(7));
  CHECK(c.lines[1].offset_mhz == -22.6);
  CHECK(c.lines[2].f_excited == HalfInt::from_twice(11));

  CHECK_THROWS_AS(parse_text("[manifold]\nlines = 9/2:7/2\n"), config_error);
  CHECK_THROWS_AS(parse_text("[manifold]\nlines = 9/3:7/2:1.0\n"),
                  config_error);
  CHECK_THROWS_AS(parse_text("[manifold]\nlines = ,\n"), config_error);
}

TEST_CASE("assembled module objects") {
  RunConfig c;
  auto m = c.manifold();
  CHECK(m.wavelength_m == doctest::Approx(461e-9).epsilon(1e-12));
  CHECK(m.linewidth_rad_s ==
        doctest::Approx(constants::two_pi * 30e6).epsilon(1e-12));
  CHECK(m.lines.size() == 3);

  CHECK(c.populations(1e4).total() == doctest::Approx(1e4).epsilon(1e-12));
  CHECK(c.populations_for_preset("sr87_blue_stretched", 10.0).total() ==
        doctest::Approx(10.0).epsilon(1e-12));
  CHECK_THROWS_AS(c.populations_for_preset("martian", 1.0), config_error);

  auto d = c.detection();
  CHECK(d.probe_power_w == doctest::Approx(12e-9).epsilon(1e-12));
  CHECK(d.detected_power_w() == doctest::Approx(5.16e-9).epsilon(1e-12));

  CHECK(c.omega_rad_s() == doctest::Approx(constants::two_pi * 90e6));
  CHECK(c.lattice().depth_recoils() == doctest::Approx(193.0).epsilon(0.005));

  auto seq = c.sequence(7);
  CHECK(seq.seed == 7);
  CHECK_NOTHROW(seq.validate());

  auto budget = c.snr_budget();
  CHECK(budget.target_n_gamma == 80.0);
}
