#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

namespace ldas {

/// Thrown for any invalid configuration or sweep specification.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AntennaMode { kDistributed, kColocated };
enum class PowerControlMethod { kHeuristic, kOptimal };
enum class SelectionMetric { kChannelGain, kMinDistance };

std::string_view to_string(AntennaMode mode);
std::string_view to_string(PowerControlMethod method);
std::string_view to_string(SelectionMetric metric);
AntennaMode parse_antenna_mode(std::string_view text);
PowerControlMethod parse_power_control(std::string_view text);
SelectionMetric parse_selection_metric(std::string_view text);

// Unit conversions. +/-inf dB map to +inf / 0 linear.
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double ratio);

/// Every physical, power-model and run-control constant of a scenario.
///
/// All quantities are linear SI (W, Hz, bit/s, km) except the fields whose
/// name ends in `_db`, which are kept in dB because they may be infinite or
/// enter a dB-domain formula directly.
struct ScenarioConfig {
  // Geometry
  double cell_side_km = 1.0;
  int num_das = 400;
  int num_ues = 20;

  // Link
  double bandwidth_hz = 10e6;
  double target_rate_bps = 10e6;
  double max_tx_power_w = 0.0501187233627272;  // 17 dBm
  double noise_psd_w_per_hz = 3.981071705534973e-21;  // -174 dBm/Hz
  double antenna_gain_db = 5.0;
  double path_loss_exponent = 3.76;

  // Power consumption model
  double power_loss_coeff = 2.63;
  double pa_efficiency = 0.08;
  double p_cc1_w = 5.7;
  double p_cc2_w_per_bps = 0.5e-12;
  double p_fix_w = 34.0;
  double p_sp1_w_per_hz = 0.94e-6;
  double p_sp2_w_per_hz = 0.54e-6;
  double p_sig_w_per_hz = 50e-9;
  double beta = 0.5;

  // Clustering and adaptation
  double gamma_db = 22.0;
  int q_as = 5;
  int q_uc = 10;
  double delta_db = 5.0;
  double adapt_gamma_start_db = -10.0;
  bool adapt_gamma = false;

  // Modes and run control
  AntennaMode mode = AntennaMode::kDistributed;
  PowerControlMethod power_control = PowerControlMethod::kHeuristic;
  SelectionMetric selection_metric = SelectionMetric::kChannelGain;
  int realizations = 200;
  std::uint64_t master_seed = 1;

  /// Integrated noise power over the band.
  double noise_power_w() const { return noise_psd_w_per_hz * bandwidth_hz; }
  /// Amplifier loss factor c / eta applied to radiated power.
  double tpd_factor() const { return power_loss_coeff / pa_efficiency; }
  /// Minimum post-ZF receive power meeting the target rate.
  double min_required_power_w() const;
  int grid_side() const;

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;
};

/// Distributed-antenna defaults.
ScenarioConfig default_ldas();
/// Colocated-antenna baseline: efficient PA, no optical front-haul, +10%
/// signal-processing power.
ScenarioConfig default_lcas();

/// Applies every key present in `j` on top of `base`. Unknown keys throw.
ScenarioConfig config_from_json(const nlohmann::json& j, ScenarioConfig base);
ScenarioConfig load_config_file(const std::string& path, ScenarioConfig base);
nlohmann::json config_to_json(const ScenarioConfig& config);

/// Sets one field by its JSON key from a textual value (CLI overrides).
void set_config_field(ScenarioConfig& config, std::string_view key,
                      std::string_view value);

/// Parses a real number, accepting "inf", "+inf", "-inf".
double parse_real(std::string_view text);

}  // namespace ldas
