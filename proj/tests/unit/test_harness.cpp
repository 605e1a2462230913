#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ldas/harness.hpp"

using namespace ldas;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

EEReport fake(double ee, bool outage, int clusters = 2) {
  EEReport r;
  r.ee_mbpj = ee;
  r.outage = outage;
  r.num_clusters = clusters;
  r.sum_rate_bps = 2e8;
  r.power.tpd = 1.0;
  r.power.fixed = 34.0;
  return r;
}

ScenarioConfig quick(int realizations) {
  ScenarioConfig c = default_ldas();
  c.num_das = 100;
  c.num_ues = 6;
  c.realizations = realizations;
  return c;
}

bool same_bits(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

bool same_rows(const std::vector<AggregateRow>& a, const std::vector<AggregateRow>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    const auto& x = a[i];
    const auto& y = b[i];
    for (auto [p, q] : {std::pair{x.swept_value, y.swept_value}, {x.mean_ee_mbpj, y.mean_ee_mbpj},
                        {x.se_ee, y.se_ee}, {x.outage_rate, y.outage_rate}, {x.mean_l, y.mean_l},
                        {x.mean_rate_bps, y.mean_rate_bps}, {x.tpd_w, y.tpd_w}, {x.a_w, y.a_w},
                        {x.b_w, y.b_w}, {x.c_w, y.c_w}, {x.fix_w, y.fix_w}}) {
      if (!same_bits(p, q)) return false;
    }
    if (x.n != y.n) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("sweep parsing") {
  auto s = parse_sweep("gamma=-inf,0:10:5,inf");
  CHECK(s.axis == SweepAxis::kGamma);
  CHECK(s.values == std::vector<double>{-kInf, 0, 5, 10, kInf});
  s = parse_sweep("num_ues = 2, 5");
  CHECK(s.axis == SweepAxis::kNumUes);
  CHECK(s.values == std::vector<double>{2, 5});
  s = parse_sweep("p_sig=5,50,500");
  CHECK(s.axis == SweepAxis::kPSig);
  CHECK_THROWS_AS(parse_sweep("gamma"), ConfigError);
  CHECK_THROWS_AS(parse_sweep("height=1"), ConfigError);
  CHECK_THROWS_AS(parse_sweep("gamma=1,,2"), ConfigError);
  CHECK_THROWS_AS(parse_sweep("gamma=0:10:-5"), ConfigError);
  CHECK_THROWS_AS(parse_sweep("gamma=0:inf:5"), ConfigError);
}

TEST_CASE("sweep values are applied and checked") {
  const ScenarioConfig base = quick(2);
  CHECK(apply_sweep_value(base, SweepAxis::kPSig, 5).p_sig_w_per_hz == doctest::Approx(5e-9));
  CHECK(apply_sweep_value(base, SweepAxis::kNumDas, 400).num_das == 400);
  CHECK(apply_sweep_value(base, SweepAxis::kGamma, kInf).gamma_db == kInf);
  try {
    validate_sweep(base, parse_sweep("num_ues=4,200"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("num_ues=200") != std::string::npos);
  }
  CHECK_THROWS_AS(validate_sweep(base, parse_sweep("num_das=99")), ConfigError);
  CHECK_THROWS_AS(validate_sweep(base, parse_sweep("num_ues=2.5")), ConfigError);
  CHECK_THROWS_AS(validate_sweep(base, parse_sweep("beta=-1")), ConfigError);
}

TEST_CASE("aggregation") {
  std::vector<EEReport> reports{fake(2.0, false), fake(0.0, true), fake(4.0, false, 4)};
  const auto row = aggregate(1.5, reports);
  CHECK(row.n == 3);
  CHECK(row.mean_ee_mbpj == doctest::Approx(2.0));
  CHECK(row.outage_rate == doctest::Approx(1.0 / 3));
  CHECK(row.se_ee == doctest::Approx(std::sqrt(4.0 / 3.0)));  // sample stdev 2, over sqrt(3)
  CHECK(row.mean_l == doctest::Approx(3.0));
  CHECK(row.fix_w == doctest::Approx(34.0));

  const auto all_out = aggregate(0.0, {fake(0.0, true), fake(0.0, true)});
  CHECK(all_out.mean_ee_mbpj == 0.0);
  CHECK(all_out.outage_rate == 1.0);
  CHECK(std::isnan(all_out.mean_l));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  std::vector<EEReport> many;
  for (int i = 0; i < 50; ++i) many.push_back(fake(u(rng), i % 7 == 0));
  const auto a = aggregate(0.0, many);
  std::shuffle(many.begin(), many.end(), rng);
  const auto b = aggregate(0.0, many);
  CHECK(a.mean_ee_mbpj == doctest::Approx(b.mean_ee_mbpj).epsilon(1e-14));
  CHECK(a.se_ee == doctest::Approx(b.se_ee).epsilon(1e-12));
  CHECK(a.outage_rate == b.outage_rate);
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("results do not depend on the thread count") {
  const ScenarioConfig c = quick(12);
  const auto sweep = parse_sweep("gamma=-inf,20,inf");
  const auto one = run_sweep(c, sweep, 1);
  const auto many = run_sweep(c, sweep, 8);
  CHECK(same_rows(one.rows, many.rows));
  CHECK(rows_to_csv(one.rows) == rows_to_csv(many.rows));
}

TEST_CASE("sweep points share realizations") {
  const ScenarioConfig c = quick(5);
  const auto res = run_sweep(c, parse_sweep("gamma=20,20"), 2, true);
  REQUIRE(res.reports.size() == 2);
  for (size_t i = 0; i < 5; ++i) CHECK(res.reports[0][i].to_json() == res.reports[1][i].to_json());
  CHECK(same_rows({res.rows[0]}, {res.rows[1]}));
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(kInf) == "inf");
  CHECK(format_number(-kInf) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, i % 30 - 15);
    CHECK(std::stod(format_number(v)) == v);
  }
}

TEST_CASE("csv and json round trips are exact") {
  std::vector<AggregateRow> rows;
  rows.push_back(aggregate(-kInf, {fake(1.0 / 3, false), fake(0.7, false)}));
  rows.push_back(aggregate(kInf, {fake(0.0, true)}));
  rows.push_back(aggregate(12.5, {fake(2.0 / 7, false), fake(0.0, true), fake(1e-300, false)}));
  const std::string csv = rows_to_csv(rows);
  CHECK(same_rows(rows_from_csv(csv), rows));
  CHECK(same_rows(rows_from_json(rows_to_json(rows)), rows));
  CHECK(same_rows(rows_from_json(nlohmann::json::parse(rows_to_json(rows).dump())), rows));
  // Header plus one line per row.
  std::istringstream in(rows_to_csv({rows[0]}));
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 2);
  CHECK_THROWS_AS(rows_from_csv("a,b\n1,2\n"), ConfigError);
}

TEST_CASE("emit") {
  const auto dir = std::filesystem::temp_directory_path() / "ldas_harness_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "rows.csv").string();
  std::filesystem::remove(path);
  CHECK_THROWS_AS(emit({}, OutputFormat::kCsv, path), std::invalid_argument);
  CHECK_FALSE(std::filesystem::exists(path));

  const std::vector<AggregateRow> rows{aggregate(0.0, {fake(1.25, false)})};
  emit(rows, OutputFormat::kCsv, path);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(same_rows(rows_from_csv(ss.str()), rows));

  const auto jpath = (dir / "rows.json").string();
  emit(rows, OutputFormat::kJson, jpath, {{"note", "x"}});
  std::ifstream jf(jpath);
  const auto doc = nlohmann::json::parse(jf);
  CHECK(same_rows(rows_from_json(doc), rows));

  CHECK_THROWS_AS(emit(rows, OutputFormat::kCsv, (dir / "missing" / "x.csv").string()), IoError);
  std::filesystem::remove_all(dir);
}

}
