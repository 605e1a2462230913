#include "ldas/scenario.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

namespace ldas {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_perfect_square(int n) {
  if (n < 0) return false;
  const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  return r * r == n;
}

}  // namespace

std::string_view to_string(AntennaMode mode) {
  return mode == AntennaMode::kDistributed ? "ldas" : "lcas";
}

std::string_view to_string(PowerControlMethod method) {
  return method == PowerControlMethod::kHeuristic ? "heuristic" : "optimal";
}

std::string_view to_string(SelectionMetric metric) {
  return metric == SelectionMetric::kChannelGain ? "cgb" : "mdb";
}

AntennaMode parse_antenna_mode(std::string_view text) {
  const auto t = lower(text);
  if (t == "ldas" || t == "l-das") return AntennaMode::kDistributed;
  if (t == "lcas" || t == "l-cas") return AntennaMode::kColocated;
  throw ConfigError("unknown mode '" + std::string(text) + "' (expected ldas|lcas)");
}

PowerControlMethod parse_power_control(std::string_view text) {
  const auto t = lower(text);
  if (t == "heuristic") return PowerControlMethod::kHeuristic;
  if (t == "optimal") return PowerControlMethod::kOptimal;
  throw ConfigError("unknown power control '" + std::string(text) +
                    "' (expected heuristic|optimal)");
}

SelectionMetric parse_selection_metric(std::string_view text) {
  const auto t = lower(text);
  if (t == "cgb") return SelectionMetric::kChannelGain;
  if (t == "mdb") return SelectionMetric::kMinDistance;
  throw ConfigError("unknown selection metric '" + std::string(text) +
                    "' (expected cgb|mdb)");
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double db_to_linear(double db) {
  if (std::isinf(db)) return db > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  return std::pow(10.0, db / 10.0);
}

double linear_to_db(double ratio) {
  if (ratio == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(ratio);
}

double ScenarioConfig::min_required_power_w() const {
  return noise_power_w() * std::expm1(std::log(2.0) * target_rate_bps / bandwidth_hz);
}

int ScenarioConfig::grid_side() const {
  return static_cast<int>(std::lround(std::sqrt(static_cast<double>(num_das))));
}

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(cell_side_km > 0.0, "cell_side_km must be positive");
  require(num_das >= 1 && is_perfect_square(num_das), "num_das must be a positive perfect square");
  require(num_ues >= 1, "num_ues must be at least 1");
  require(num_das >= num_ues, "num_das must be >= num_ues");
  require(bandwidth_hz > 0.0, "bandwidth_hz must be positive");
  require(target_rate_bps >= 0.0, "target_rate_bps must be non-negative");
  require(max_tx_power_w > 0.0, "max_tx_power must be positive");
  require(noise_psd_w_per_hz > 0.0 && noise_power_w() > 0.0, "noise power must be positive");
  require(std::isfinite(antenna_gain_db), "antenna_gain_db must be finite");
  require(path_loss_exponent > 0.0, "path_loss_exponent must be positive");
  require(power_loss_coeff > 1.0, "power_loss_coeff must exceed 1");
  require(pa_efficiency > 0.0 && pa_efficiency < 1.0, "pa_efficiency must lie in (0,1)");
  require(p_cc1_w >= 0.0 && p_cc2_w_per_bps >= 0.0 && p_fix_w >= 0.0 &&
              p_sp1_w_per_hz >= 0.0 && p_sp2_w_per_hz >= 0.0 && p_sig_w_per_hz >= 0.0,
          "power-model constants must be non-negative");
  require(beta >= 0.0 && beta <= 2.0, "beta must lie in [0,2]");
  require(!std::isnan(gamma_db), "gamma_db must not be NaN");
  require(q_as >= 0 && q_uc >= 0, "adaptation limits must be non-negative");
  require(delta_db > 0.0 && std::isfinite(delta_db), "delta_db must be positive");
  require(std::isfinite(adapt_gamma_start_db), "adapt_gamma_start_db must be finite");
  require(realizations >= 1, "realizations must be at least 1");
}

ScenarioConfig default_ldas() { return ScenarioConfig{}; }

ScenarioConfig default_lcas() {
  ScenarioConfig c;
  c.mode = AntennaMode::kColocated;
  c.pa_efficiency = 0.6;
  c.p_cc2_w_per_bps = 0.0;
  c.p_sp1_w_per_hz = 0.94e-6 * 1.1;
  c.p_sp2_w_per_hz = 0.54e-6 * 1.1;
  return c;
}

namespace {

double json_real(const nlohmann::json& v) {
  if (v.is_string()) return parse_real(v.get<std::string>());
  return v.get<double>();
}

}  // namespace

ScenarioConfig config_from_json(const nlohmann::json& j, ScenarioConfig c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (value.is_string()) {
        set_config_field(c, key, value.get<std::string>());
      } else if (value.is_boolean()) {
        set_config_field(c, key, value.get<bool>() ? "true" : "false");
      } else if (value.is_number_unsigned()) {
        set_config_field(c, key, std::to_string(value.get<std::uint64_t>()));
      } else if (value.is_number_integer()) {
        set_config_field(c, key, std::to_string(value.get<long long>()));
      } else if (value.is_number()) {
        // Full round-trip precision.
        char buf[64];
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, json_real(value));
        set_config_field(c, key, std::string_view(buf, static_cast<size_t>(end - buf)));
      } else {
        throw ConfigError("unsupported JSON value type");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
  return c;
}

ScenarioConfig load_config_file(const std::string& path, ScenarioConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed config file '" + path + "': " + e.what());
  }
  return config_from_json(j, std::move(base));
}

nlohmann::json config_to_json(const ScenarioConfig& c) {
  auto real = [](double x) -> nlohmann::json {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
  };
  return {
      {"cell_side_km", c.cell_side_km},
      {"num_das", c.num_das},
      {"num_ues", c.num_ues},
      {"bandwidth_hz", c.bandwidth_hz},
      {"target_rate_bps", c.target_rate_bps},
      {"max_tx_power_dbm", watts_to_dbm(c.max_tx_power_w)},
      {"noise_psd_dbm_per_hz", watts_to_dbm(c.noise_psd_w_per_hz)},
      {"antenna_gain_db", c.antenna_gain_db},
      {"path_loss_exponent", c.path_loss_exponent},
      {"power_loss_coeff", c.power_loss_coeff},
      {"pa_efficiency", c.pa_efficiency},
      {"p_cc1_w", c.p_cc1_w},
      {"p_cc2_w_per_bps", c.p_cc2_w_per_bps},
      {"p_fix_w", c.p_fix_w},
      {"p_sp1_w_per_hz", c.p_sp1_w_per_hz},
      {"p_sp2_w_per_hz", c.p_sp2_w_per_hz},
      {"p_sig_w_per_hz", c.p_sig_w_per_hz},
      {"beta", c.beta},
      {"gamma_db", real(c.gamma_db)},
      {"q_as", c.q_as},
      {"q_uc", c.q_uc},
      {"delta_db", c.delta_db},
      {"adapt_gamma_start_db", c.adapt_gamma_start_db},
      {"adapt_gamma", c.adapt_gamma},
      {"mode", std::string(to_string(c.mode))},
      {"power_control", std::string(to_string(c.power_control))},
      {"selection_metric", std::string(to_string(c.selection_metric))},
      {"realizations", c.realizations},
      {"master_seed", c.master_seed},
  };
}

double parse_real(std::string_view text) {
  const auto t = lower(text);
  if (t == "inf" || t == "+inf" || t == "infinity" || t == "+infinity")
    return std::numeric_limits<double>::infinity();
  if (t == "-inf" || t == "-infinity") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || t.empty())
    throw ConfigError("not a number: '" + std::string(text) + "'");
  return value;
}

namespace {

long long parse_integer(std::string_view text) {
  long long direct = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), direct);
  if (ec == std::errc() && ptr == text.data() + text.size() && !text.empty()) return direct;
  const double v = parse_real(text);
  if (!std::isfinite(v) || v != std::floor(v))
    throw ConfigError("not an integer: '" + std::string(text) + "'");
  return static_cast<long long>(v);
}

std::uint64_t parse_seed(std::string_view text) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc() && ptr == text.data() + text.size() && !text.empty()) return v;
  if (parse_integer(text) < 0) throw ConfigError("master_seed must be non-negative");
  throw ConfigError("master_seed out of range: '" + std::string(text) + "'");
}

bool parse_bool(std::string_view text) {
  const auto t = lower(text);
  if (t == "true" || t == "on" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "off" || t == "0" || t == "no") return false;
  throw ConfigError("not a boolean: '" + std::string(text) + "'");
}

}  // namespace

void set_config_field(ScenarioConfig& c, std::string_view key, std::string_view value) {
  const std::string k(key);
  if (k == "cell_side_km") c.cell_side_km = parse_real(value);
  else if (k == "num_das") c.num_das = static_cast<int>(parse_integer(value));
  else if (k == "num_ues") c.num_ues = static_cast<int>(parse_integer(value));
  else if (k == "bandwidth_hz") c.bandwidth_hz = parse_real(value);
  else if (k == "target_rate_bps") c.target_rate_bps = parse_real(value);
  else if (k == "max_tx_power_dbm") c.max_tx_power_w = dbm_to_watts(parse_real(value));
  else if (k == "max_tx_power_w") c.max_tx_power_w = parse_real(value);
  else if (k == "noise_psd_dbm_per_hz") c.noise_psd_w_per_hz = dbm_to_watts(parse_real(value));
  else if (k == "antenna_gain_db") c.antenna_gain_db = parse_real(value);
  else if (k == "path_loss_exponent") c.path_loss_exponent = parse_real(value);
  else if (k == "power_loss_coeff") c.power_loss_coeff = parse_real(value);
  else if (k == "pa_efficiency") c.pa_efficiency = parse_real(value);
  else if (k == "p_cc1_w") c.p_cc1_w = parse_real(value);
  else if (k == "p_cc2_w_per_bps") c.p_cc2_w_per_bps = parse_real(value);
  else if (k == "p_fix_w") c.p_fix_w = parse_real(value);
  else if (k == "p_sp1_w_per_hz") c.p_sp1_w_per_hz = parse_real(value);
  else if (k == "p_sp2_w_per_hz") c.p_sp2_w_per_hz = parse_real(value);
  else if (k == "p_sig_w_per_hz") c.p_sig_w_per_hz = parse_real(value);
  else if (k == "p_sig_nw_per_hz") c.p_sig_w_per_hz = parse_real(value) * 1e-9;
  else if (k == "beta") c.beta = parse_real(value);
  else if (k == "gamma_db" || k == "gamma") c.gamma_db = parse_real(value);
  else if (k == "q_as") c.q_as = static_cast<int>(parse_integer(value));
  else if (k == "q_uc") c.q_uc = static_cast<int>(parse_integer(value));
  else if (k == "delta_db") c.delta_db = parse_real(value);
  else if (k == "adapt_gamma_start_db") c.adapt_gamma_start_db = parse_real(value);
  else if (k == "adapt_gamma" || k == "adapt") c.adapt_gamma = parse_bool(value);
  else if (k == "mode") c.mode = parse_antenna_mode(value);
  else if (k == "power_control") c.power_control = parse_power_control(value);
  else if (k == "selection_metric") c.selection_metric = parse_selection_metric(value);
  else if (k == "realizations") c.realizations = static_cast<int>(parse_integer(value));
  else if (k == "master_seed" || k == "seed") {
    c.master_seed = parse_seed(value);
  } else {
    throw ConfigError("unknown config key '" + k + "'");
  }
}

}  // namespace ldas
