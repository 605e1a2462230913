#include "ldas/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace ldas {

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kGamma: return "gamma";
    case SweepAxis::kNumUes: return "num_ues";
    case SweepAxis::kNumDas: return "num_das";
    case SweepAxis::kBeta: return "beta";
    case SweepAxis::kPSig: return "p_sig";
  }
  return "?";
}

SweepAxis parse_sweep_axis(std::string_view text) {
  for (auto a : {SweepAxis::kGamma, SweepAxis::kNumUes, SweepAxis::kNumDas, SweepAxis::kBeta, SweepAxis::kPSig}) {
    if (text == to_string(a)) return a;
  }
  throw ConfigError("unknown sweep axis '" + std::string(text) + "' (gamma, num_ues, num_das, beta, p_sig)");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void expand_range(std::string_view item, std::vector<double>& values) {
  const auto parts = split(item, ':');
  if (parts.size() != 3) throw ConfigError("range must be start:stop:step, got '" + std::string(item) + "'");
  const double start = parse_real(trim(parts[0]));
  const double stop = parse_real(trim(parts[1]));
  const double step = parse_real(trim(parts[2]));
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step) || step == 0.0)
    throw ConfigError("range '" + std::string(item) + "' needs finite bounds and a nonzero step");
  if ((stop - start) / step < 0.0) throw ConfigError("range '" + std::string(item) + "' never reaches stop");
  const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 100000) throw ConfigError("range '" + std::string(item) + "' is too long");
  for (long long k = 0; k < count; ++k) values.push_back(start + static_cast<double>(k) * step);
}

}  // namespace

SweepSpec parse_sweep(std::string_view text) {
  const size_t eq = text.find('=');
  if (eq == std::string_view::npos) throw ConfigError("sweep must look like axis=v1,v2,...");
  SweepSpec spec;
  spec.axis = parse_sweep_axis(trim(text.substr(0, eq)));
  for (auto item : split(text.substr(eq + 1), ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty value in sweep list");
    if (item.find(':') != std::string_view::npos) {
      expand_range(item, spec.values);
    } else {
      spec.values.push_back(parse_real(item));
    }
  }
  return spec;
}

ScenarioConfig apply_sweep_value(const ScenarioConfig& base, SweepAxis axis, double value) {
  ScenarioConfig c = base;
  auto require_integer = [&](const char* name) {
    if (!std::isfinite(value) || value != std::floor(value) || std::abs(value) > 1e9)
      throw ConfigError(std::string(name) + " sweep values must be integers, got " + format_number(value));
    return static_cast<int>(value);
  };
  switch (axis) {
    case SweepAxis::kGamma:
      if (std::isnan(value)) throw ConfigError("gamma sweep value is NaN");
      c.gamma_db = value;
      break;
    case SweepAxis::kNumUes: c.num_ues = require_integer("num_ues"); break;
    case SweepAxis::kNumDas: c.num_das = require_integer("num_das"); break;
    case SweepAxis::kBeta: c.beta = value; break;
    case SweepAxis::kPSig: c.p_sig_w_per_hz = value * 1e-9; break;
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(to_string(axis)) + "=" + format_number(value) + ": " + e.what());
  }
  return c;
}

void validate_sweep(const ScenarioConfig& base, const SweepSpec& sweep) {
  if (sweep.values.empty()) throw ConfigError("sweep has no values");
  for (double v : sweep.values) apply_sweep_value(base, sweep.axis, v);
}

const std::vector<std::string>& aggregate_columns() {
  static const std::vector<std::string> cols{"swept_value", "mean_ee_mbpj", "se_ee", "outage_rate",
                                             "mean_L",      "mean_rate_bps", "tpd_w", "a_w",
                                             "b_w",         "c_w",           "fix_w", "n"};
  return cols;
}

AggregateRow aggregate(double swept_value, const std::vector<EEReport>& reports) {
  AggregateRow row;
  row.swept_value = swept_value;
  row.n = static_cast<int>(reports.size());
  if (reports.empty()) return row;
  double sum = 0.0;
  for (const auto& r : reports) sum += r.ee_mbpj;
  const double n = static_cast<double>(reports.size());
  row.mean_ee_mbpj = sum / n;
  if (reports.size() > 1) {
    double ss = 0.0;
    for (const auto& r : reports) ss += (r.ee_mbpj - row.mean_ee_mbpj) * (r.ee_mbpj - row.mean_ee_mbpj);
    row.se_ee = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  int served = 0;
  for (const auto& r : reports) {
    if (r.outage) continue;
    ++served;
    row.mean_l += r.num_clusters;
    row.mean_rate_bps += r.sum_rate_bps;
    row.tpd_w += r.power.tpd;
    row.a_w += r.power.rf_circuit;
    row.b_w += r.power.signal_processing;
    row.c_w += r.power.signaling;
    row.fix_w += r.power.fixed;
  }
  row.outage_rate = static_cast<double>(row.n - served) / n;
  const double scale = served > 0 ? 1.0 / served : std::numeric_limits<double>::quiet_NaN();
  for (double* f : {&row.mean_l, &row.mean_rate_bps, &row.tpd_w, &row.a_w, &row.b_w, &row.c_w, &row.fix_w}) {
    *f *= scale;
  }
  return row;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LDAS_THREADS")) {
    int v = 0;
    const std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < 1)
      throw ConfigError("LDAS_THREADS must be a positive integer, got '" + std::string(s) + "'");
    return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Runs task(i) for i in [0, count) on `threads` workers; rethrows the first error.
template <typename Task>
void parallel_for(size_t count, int threads, Task&& task) {
  const size_t workers = std::min(static_cast<size_t>(std::max(1, threads)), count);
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<EEReport> run_realizations(const ScenarioConfig& config, int threads) {
  config.validate();
  std::vector<EEReport> out(static_cast<size_t>(config.realizations));
  parallel_for(out.size(), resolve_threads(threads), [&](size_t i) {
    const ChannelRealization r = draw_realization(config, realization_seed(config.master_seed, i));
    out[i] = run_realization(r, config);
  });
  return out;
}

SweepResult run_sweep(const ScenarioConfig& config, const SweepSpec& sweep, int threads, bool keep_reports) {
  validate_sweep(config, sweep);
  std::vector<ScenarioConfig> configs;
  for (double v : sweep.values) configs.push_back(apply_sweep_value(config, sweep.axis, v));
  const auto per_point = static_cast<size_t>(config.realizations);
  std::vector<std::vector<EEReport>> reports(configs.size(), std::vector<EEReport>(per_point));
  parallel_for(configs.size() * per_point, resolve_threads(threads), [&](size_t task) {
    const size_t point = task / per_point;
    const size_t i = task % per_point;
    const ScenarioConfig& c = configs[point];
    const ChannelRealization r = draw_realization(c, realization_seed(c.master_seed, i));
    reports[point][i] = run_realization(r, c);
  });
  SweepResult result;
  for (size_t k = 0; k < configs.size(); ++k) result.rows.push_back(aggregate(sweep.values[k], reports[k]));
  if (keep_reports) result.reports = std::move(reports);
  return result;
}

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::kCsv;
  if (text == "json") return OutputFormat::kJson;
  throw ConfigError("unknown output format '" + std::string(text) + "' (csv, json)");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

namespace {

std::vector<double> row_values(const AggregateRow& r) {
  return {r.swept_value, r.mean_ee_mbpj, r.se_ee, r.outage_rate, r.mean_l, r.mean_rate_bps,
          r.tpd_w,       r.a_w,          r.b_w,   r.c_w,         r.fix_w,  static_cast<double>(r.n)};
}

AggregateRow row_from_values(const std::vector<double>& v) {
  AggregateRow r;
  r.swept_value = v[0];
  r.mean_ee_mbpj = v[1];
  r.se_ee = v[2];
  r.outage_rate = v[3];
  r.mean_l = v[4];
  r.mean_rate_bps = v[5];
  r.tpd_w = v[6];
  r.a_w = v[7];
  r.b_w = v[8];
  r.c_w = v[9];
  r.fix_w = v[10];
  r.n = static_cast<int>(v[11]);
  return r;
}

double parse_cell(std::string_view s) {
  s = trim(s);
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  return parse_real(s);
}

nlohmann::json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) return parse_real(j.get<std::string>());
  return j.get<double>();
}

}  // namespace

std::string rows_to_csv(const std::vector<AggregateRow>& rows) {
  std::string out;
  const auto& cols = aggregate_columns();
  for (size_t k = 0; k < cols.size(); ++k) out += (k ? "," : "") + cols[k];
  out += '\n';
  for (const auto& r : rows) {
    const auto v = row_values(r);
    for (size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + format_number(v[k]);
    out += '\n';
  }
  return out;
}

nlohmann::json rows_to_json(const std::vector<AggregateRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  const auto& cols = aggregate_columns();
  for (const auto& r : rows) {
    const auto v = row_values(r);
    nlohmann::json obj = nlohmann::json::object();
    for (size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] == "n") {
        obj[cols[k]] = r.n;
      } else {
        obj[cols[k]] = number_to_json(v[k]);
      }
    }
    arr.push_back(std::move(obj));
  }
  return arr;
}

std::vector<AggregateRow> rows_from_csv(std::string_view text) {
  std::vector<AggregateRow> rows;
  const auto lines = split(text, '\n');
  if (lines.empty() || trim(lines[0]).empty()) throw ConfigError("CSV has no header");
  const auto header = split(trim(lines[0]), ',');
  const auto& cols = aggregate_columns();
  if (header.size() != cols.size()) throw ConfigError("unexpected CSV header");
  for (size_t k = 0; k < cols.size(); ++k) {
    if (trim(header[k]) != cols[k]) throw ConfigError("unexpected CSV column '" + std::string(header[k]) + "'");
  }
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != cols.size()) throw ConfigError("CSV row " + std::to_string(i) + " has wrong width");
    std::vector<double> v;
    for (auto c : cells) v.push_back(parse_cell(c));
    rows.push_back(row_from_values(v));
  }
  return rows;
}

std::vector<AggregateRow> rows_from_json(const nlohmann::json& j) {
  const nlohmann::json& arr = j.is_object() && j.contains("rows") ? j.at("rows") : j;
  if (!arr.is_array()) throw ConfigError("JSON rows must be an array");
  std::vector<AggregateRow> rows;
  for (const auto& obj : arr) {
    std::vector<double> v;
    for (const auto& c : aggregate_columns()) v.push_back(number_from_json(obj.at(c)));
    rows.push_back(row_from_values(v));
  }
  return rows;
}

void emit(const std::vector<AggregateRow>& rows, OutputFormat format, const std::string& path,
          const nlohmann::json& metadata) {
  if (rows.empty()) throw std::invalid_argument("emit: no rows to write");
  std::string body;
  if (format == OutputFormat::kCsv) {
    body = rows_to_csv(rows);
  } else {
    nlohmann::json doc;
    if (!metadata.is_null()) doc["metadata"] = metadata;
    doc["rows"] = rows_to_json(rows);
    body = doc.dump(2) + "\n";
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << body;
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace ldas
