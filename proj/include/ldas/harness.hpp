#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ldas/pipeline.hpp"

namespace ldas {

enum class SweepAxis { kGamma, kNumUes, kNumDas, kBeta, kPSig };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view text);

struct SweepSpec {
  SweepAxis axis = SweepAxis::kGamma;
  std::vector<double> values;  // gamma in dB, p_sig in nW/Hz, others as-is
};

/// "axis=v1,v2,start:stop:step,..." ; values accept inf / -inf.
SweepSpec parse_sweep(std::string_view text);

/// Copy of `base` with the swept parameter set to `value`. Throws ConfigError.
ScenarioConfig apply_sweep_value(const ScenarioConfig& base, SweepAxis axis, double value);

/// Checks every swept value up front.
void validate_sweep(const ScenarioConfig& base, const SweepSpec& sweep);

struct AggregateRow {
  double swept_value = 0.0;
  double mean_ee_mbpj = 0.0;  // outages count as zero
  double se_ee = 0.0;
  double outage_rate = 0.0;
  // The remaining means are over non-outage realizations.
  double mean_l = 0.0;
  double mean_rate_bps = 0.0;
  double tpd_w = 0.0;
  double a_w = 0.0;
  double b_w = 0.0;
  double c_w = 0.0;
  double fix_w = 0.0;
  int n = 0;
};

/// Column names in output order.
const std::vector<std::string>& aggregate_columns();

AggregateRow aggregate(double swept_value, const std::vector<EEReport>& reports);

/// Thread count: explicit value if positive, else LDAS_THREADS, else hardware.
int resolve_threads(int requested);

/// Runs realizations 0..n-1 of `config` (seeds derived from its master seed)
/// and returns the reports in index order.
std::vector<EEReport> run_realizations(const ScenarioConfig& config, int threads);

struct SweepResult {
  std::vector<AggregateRow> rows;
  std::vector<std::vector<EEReport>> reports;  // per swept value, when kept
};

/// Every swept value reuses the same realization seeds. Output is independent
/// of the thread count.
SweepResult run_sweep(const ScenarioConfig& config, const SweepSpec& sweep, int threads,
                      bool keep_reports = false);

enum class OutputFormat { kCsv, kJson };
OutputFormat parse_output_format(std::string_view text);

/// Shortest decimal that parses back to the same double; "inf", "-inf", "nan".
std::string format_number(double v);

std::string rows_to_csv(const std::vector<AggregateRow>& rows);
nlohmann::json rows_to_json(const std::vector<AggregateRow>& rows);
std::vector<AggregateRow> rows_from_csv(std::string_view text);
std::vector<AggregateRow> rows_from_json(const nlohmann::json& j);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes rows to `path`. Rejects an empty row set before touching the file.
/// JSON output wraps rows with `metadata` when given.
void emit(const std::vector<AggregateRow>& rows, OutputFormat format, const std::string& path,
          const nlohmann::json& metadata = nullptr);

}  // namespace ldas
