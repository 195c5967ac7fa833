#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <string>

#include "vacrabi/config.hpp"

using namespace vacrabi;

TEST_CASE("defaults") {
  const ModelConfig cfg = default_config();
  const PhysicalParams p;
  CHECK(cfg.params.omega0 == p.omega0);
  CHECK(cfg.params.g == p.g);
  CHECK(cfg.params.temperature == 0.8);
  CHECK(cfg.params.geometry_ratio == 1.0);
  CHECK(cfg.nbar == 0.05);
  CHECK_FALSE(cfg.renormalize_thermal);
  CHECK(cfg.rates.gamma1 == 17.73);
  CHECK(cfg.rates.gamma3 == doctest::Approx(0.07 * p.g));
  CHECK(cfg.rates.gamma_a / cfg.rates.gamma1 == doctest::Approx(0.0466327).epsilon(2e-4 / 0.0466327));
  CHECK(cfg.rates.gamma_c / cfg.rates.gamma3 == doctest::Approx(0.999997).epsilon(1e-6));
}

TEST_CASE("keys, comments and blank lines") {
  const ModelConfig cfg = parse_config(R"(
# comment line
omega0_rad_s = 1e11
g_rad_s      = 2e5   # trailing comment
temperature_K = 0
nbar = 0.1
geometry_ratio = 0.5
gamma1 = 1
gamma2 = 2
gamma3 = 3
gamma4 = 4
gamma5 = 5
gamma6 = 6
gamma7 = 7
gamma8 = 8
renormalize_thermal = true
)");
  CHECK(cfg.params.omega0 == 1e11);
  CHECK(cfg.params.g == 2e5);
  CHECK(cfg.params.geometry_ratio == 0.5);
  CHECK(cfg.nbar == 0.1);
  CHECK(cfg.renormalize_thermal);
  CHECK(cfg.rates.gamma8 == 8.0);
  // T = 0: no upward rates.
  CHECK(cfg.rates.gamma_a == 0.0);
  CHECK(cfg.rates.gamma_c == 0.0);
  CHECK(cfg.rates.gamma_e == 0.0);
}

TEST_CASE("upward rate precedence") {
  const ModelConfig eps = parse_config("epsilon = 0.1\ngamma1 = 10\ngamma2 = 20\n");
  CHECK(eps.rates.gamma_a == doctest::Approx(1.0));
  CHECK(eps.rates.gamma_b == doctest::Approx(2.0));
  const ModelConfig expl = parse_config("epsilon = 0.1\ngamma_a = 5\ngamma_e = 3\n");
  CHECK(expl.rates.gamma_a == 5.0);
  CHECK(expl.rates.gamma_e == 3.0);
}

TEST_CASE("geometry from mode width and cavity length") {
  const ModelConfig cfg = parse_config("w_m = 6e-3\nd_m = 2.7e-2\n");
  CHECK(cfg.params.geometry_ratio == doctest::Approx(std::sqrt(M_PI) * 6e-3 / 2.7e-2));
  CHECK_THROWS_AS(parse_config("w_m = 6e-3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("w_m = 6e-3\nd_m = 1\ngeometry_ratio = 1\n"), ConfigError);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("gamma1 = 1\ngamma1 = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("gamma1 = fast\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("gamma1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("gamma1 =\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("gamma1 = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("g_rad_s = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("nbar = -0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("renormalize_thermal = maybe\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/model.cfg"), ConfigError);

  try {
    parse_config("gamma1 = 1\n\nunknown = 2\n", "model.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("model.cfg") != std::string::npos);
    CHECK(msg.find("3") != std::string::npos);
    CHECK(msg.find("unknown") != std::string::npos);
  }
}
