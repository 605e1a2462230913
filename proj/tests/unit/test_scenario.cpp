#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "ldas/scenario.hpp"

using namespace ldas;

TEST_SUITE("scenario") {

TEST_CASE("distributed defaults") {
  const ScenarioConfig c = default_ldas();
  CHECK(c.power_loss_coeff == 2.63);
  CHECK(c.pa_efficiency == 0.08);
  CHECK(c.max_tx_power_w == doctest::Approx(0.0501187).epsilon(1e-6));
  CHECK(c.max_tx_power_w == doctest::Approx(std::pow(10.0, (17.0 - 30.0) / 10.0)).epsilon(1e-14));
  CHECK(c.p_cc1_w == 5.7);
  CHECK(c.p_cc2_w_per_bps == 0.5e-12);
  CHECK(c.p_fix_w == 34.0);
  CHECK(c.p_sp1_w_per_hz == 0.94e-6);
  CHECK(c.p_sp2_w_per_hz == 0.54e-6);
  CHECK(c.bandwidth_hz == 10e6);
  CHECK(c.target_rate_bps == 10e6);
  CHECK(c.path_loss_exponent == 3.76);
  CHECK(c.antenna_gain_db == 5.0);
  CHECK(watts_to_dbm(c.noise_psd_w_per_hz) == doctest::Approx(-174.0).epsilon(1e-12));
  CHECK(c.mode == AntennaMode::kDistributed);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("noise power is integrated over the band") {
  const ScenarioConfig c = default_ldas();
  CHECK(watts_to_dbm(c.noise_power_w()) == doctest::Approx(-104.0).epsilon(1e-12));
  // 10 Mb/s over 10 MHz needs unit SNR.
  CHECK(c.min_required_power_w() == doctest::Approx(c.noise_power_w()).epsilon(1e-14));
}

TEST_CASE("colocated defaults") {
  const ScenarioConfig c = default_lcas();
  CHECK(c.pa_efficiency == 0.6);
  CHECK(c.p_cc2_w_per_bps == 0.0);
  CHECK(c.p_sp1_w_per_hz == doctest::Approx(0.94e-6 * 1.1).epsilon(1e-14));
  CHECK(c.p_sp2_w_per_hz == doctest::Approx(0.54e-6 * 1.1).epsilon(1e-14));
  CHECK(c.mode == AntennaMode::kColocated);
  CHECK(c.power_loss_coeff == default_ldas().power_loss_coeff);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("unit conversions") {
  CHECK(dbm_to_watts(0.0) == doctest::Approx(0.001).epsilon(1e-15));
  CHECK(db_to_linear(0.0) == 1.0);
  CHECK(db_to_linear(-std::numeric_limits<double>::infinity()) == 0.0);
  CHECK(db_to_linear(std::numeric_limits<double>::infinity()) == std::numeric_limits<double>::infinity());
  CHECK(linear_to_db(0.0) == -std::numeric_limits<double>::infinity());
  CHECK(db_to_linear(30.0) == doctest::Approx(1000.0).epsilon(1e-14));
  CHECK(watts_to_dbm(dbm_to_watts(17.0)) == doctest::Approx(17.0).epsilon(1e-14));
}

TEST_CASE("dB round trip over (0, 1e12)") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> exponent(-12.0, 12.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::pow(10.0, exponent(rng));
    if (x >= 1e12) continue;
    CHECK(std::abs(db_to_linear(linear_to_db(x)) - x) <= 1e-12 * x);
  }
}

TEST_CASE("validation rejects broken invariants") {
  auto broken = [](auto mutate) {
    ScenarioConfig c = default_ldas();
    mutate(c);
    return c;
  };
  CHECK_THROWS_AS(broken([](ScenarioConfig& c) { c.num_das = 50; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](ScenarioConfig& c) { c.num_das = 16; c.num_ues = 20; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](ScenarioConfig& c) { c.pa_efficiency = 1.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](ScenarioConfig& c) { c.power_loss_coeff = 1.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](ScenarioConfig& c) { c.beta = 2.5; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](ScenarioConfig& c) { c.p_fix_w = -1.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](ScenarioConfig& c) { c.bandwidth_hz = 0.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](ScenarioConfig& c) { c.noise_psd_w_per_hz = 0.0; }).validate(), ConfigError);
  CHECK_NOTHROW(broken([](ScenarioConfig& c) { c.gamma_db = -std::numeric_limits<double>::infinity(); }).validate());
  CHECK_NOTHROW(broken([](ScenarioConfig& c) { c.num_das = 1; c.num_ues = 1; }).validate());
}

TEST_CASE("json round trip and overrides") {
  ScenarioConfig c = default_ldas();
  c.gamma_db = std::numeric_limits<double>::infinity();
  c.beta = 0.2;
  c.master_seed = 18446744073709551615ull;
  const ScenarioConfig back = config_from_json(config_to_json(c), default_lcas());
  CHECK(back.gamma_db == c.gamma_db);
  CHECK(back.beta == 0.2);
  CHECK(back.mode == AntennaMode::kDistributed);
  CHECK(back.pa_efficiency == 0.08);
  CHECK(back.master_seed == c.master_seed);
  CHECK(back.max_tx_power_w == doctest::Approx(c.max_tx_power_w).epsilon(1e-14));

  ScenarioConfig d = default_ldas();
  set_config_field(d, "gamma", "-inf");
  CHECK(d.gamma_db == -std::numeric_limits<double>::infinity());
  set_config_field(d, "p_sig_nw_per_hz", "500");
  CHECK(d.p_sig_w_per_hz == doctest::Approx(500e-9).epsilon(1e-14));
  set_config_field(d, "adapt", "on");
  CHECK(d.adapt_gamma);
  CHECK_THROWS_AS(set_config_field(d, "no_such_key", "1"), ConfigError);
  CHECK_THROWS_AS(set_config_field(d, "num_ues", "2.5"), ConfigError);
  CHECK_THROWS_AS(set_config_field(d, "beta", "abc"), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::array(), d), ConfigError);
}

TEST_CASE("real parsing accepts infinities") {
  CHECK(parse_real("inf") == std::numeric_limits<double>::infinity());
  CHECK(parse_real("+inf") == std::numeric_limits<double>::infinity());
  CHECK(parse_real("-inf") == -std::numeric_limits<double>::infinity());
  CHECK(parse_real("-2.5e3") == -2500.0);
  CHECK_THROWS_AS(parse_real(""), ConfigError);
  CHECK_THROWS_AS(parse_real("1.0x"), ConfigError);
}

}
