#include <cmath>
#include <random>

#include "doctest.h"
#include "ldas/antenna_selection.hpp"
#include "ldas/channel.hpp"
#include "ldas/power_control.hpp"
#include "ldas/power_model.hpp"
#include "support.hpp"

using namespace ldas;

namespace {

// Unit-scaled cluster: noise, bandwidth and amplifier factor are all one.
ClusterPowerProblem synthetic(const RMatrix& gain, double min_power, double max_power, double tpi) {
  ClusterPowerProblem pr;
  pr.gain = gain;
  pr.min_power = RVector::Constant(gain.cols(), min_power);
  pr.noise_w = 1.0;
  pr.bandwidth_hz = 1.0;
  pr.max_power_w = max_power;
  pr.tpd_factor = 1.0;
  pr.tpi_w = tpi;
  pr.fixed_share_w = tpi / 2;
  return pr;
}

RMatrix random_gain(int m, int u, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.1, 1.0);
  RMatrix g(m, u);
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = d(rng);
  return g;
}

// Problem built from an actual drawn cluster at the default scenario.
ClusterPowerProblem drawn_cluster(std::uint64_t seed, int ues, int per_ue) {
  ScenarioConfig c = default_ldas();
  const auto r = draw_realization(c, seed);
  CMatrix h = r.composite.topRows(ues);
  RMatrix score = h.cwiseAbs();
  std::vector<int> quota(static_cast<size_t>(ues), per_ue);
  const auto sel = greedy_select(score, quota, SelectionMetric::kChannelGain);
  std::vector<int> das;
  for (const auto& a : sel.assigned) das.insert(das.end(), a.begin(), a.end());
  std::sort(das.begin(), das.end());
  const auto p = zf_precoder(h, das);
  REQUIRE(p.ok());
  return make_power_problem(p, 1, c);
}

}  // namespace

TEST_SUITE("power_control") {

TEST_CASE("heuristic stationary point on a hand-solved instance") {
  // maximize log2(1 + a) / (a + 10): 1 + 9 / (1 + a) = ln(1 + a)
  const auto pr = synthetic(RMatrix::Ones(1, 1), 1e-3, 1e6, 10.0);
  const auto t = heuristic_terms(pr);
  CHECK(t.c1 == doctest::Approx(1.0));
  CHECK(t.c2 == doctest::Approx(1.0));
  CHECK(t.c3 == doctest::Approx(10.0));
  const double y = 1.0 + t.alpha;
  CHECK(std::abs(1.0 + 9.0 / y - std::log(y)) < 1e-10);
  CHECK(t.alpha == doctest::Approx(7.17).epsilon(2e-3));
  const auto a = heuristic_power(pr);
  CHECK(a.feasible());
  CHECK(a.p(0) == doctest::Approx(t.alpha));
}

TEST_CASE("heuristic clamps to the scaling interval") {
  // Stationary point above the antenna limit.
  auto pr = synthetic(RMatrix::Ones(1, 1), 1e-3, 2.0, 10.0);
  auto t = heuristic_terms(pr);
  CHECK(t.alpha_stationary > 2.0);
  CHECK(t.alpha == doctest::Approx(2.0));
  // Stationary point below the rate floor.
  pr = synthetic(RMatrix::Ones(1, 1), 50.0, 1e6, 10.0);
  t = heuristic_terms(pr);
  CHECK(t.alpha_stationary < 50.0);
  CHECK(t.alpha == doctest::Approx(50.0));
  CHECK(heuristic_power(pr).feasible());
}

TEST_CASE("heuristic maximizes the lower bound over its interval") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int u = 1 + trial % 4;
    auto pr = synthetic(random_gain(u + 3, u, rng), 0.2, 40.0, 1.0 + trial);
    pr.min_power(0) *= 1.5;
    const auto t = heuristic_terms(pr);
    REQUIRE(t.alpha_lb <= t.alpha_ub);
    const double best = heuristic_objective(pr, t, t.alpha);
    for (int k = 0; k <= 10000; ++k) {
      const double a = t.alpha_lb + (t.alpha_ub - t.alpha_lb) * k / 10000.0;
      CHECK(heuristic_objective(pr, t, a) <= best * (1 + 1e-12));
    }
    const auto alloc = heuristic_power(pr);
    CHECK(alloc.achieved_ee_bound <= alloc.ee_bits_per_joule * (1 + 1e-12));
    CHECK(alloc.p.sum() == doctest::Approx(t.alpha));
    CHECK(pr.max_antenna_load(alloc.p) <= 1.0 + 1e-12);
    CHECK((alloc.p.array() >= pr.min_power.array() * (1 - 1e-12)).all());
  }
}

TEST_CASE("rate floors beyond the antenna limit are infeasible") {
  const auto pr = synthetic(RMatrix::Ones(2, 2), 3.0, 5.0, 1.0);
  CHECK(heuristic_power(pr).status == PowerStatus::kRateVsPower);
  CHECK(optimal_power(pr).status == PowerStatus::kRateVsPower);
  const auto f = feasibility_check(pr, 0.0);
  CHECK(f.polytope_empty);
  CHECK_FALSE(f.feasible);
}

TEST_CASE("feasibility at the ends of the bracket") {
  std::mt19937_64 rng(2);
  const auto pr = synthetic(random_gain(4, 2, rng), 0.1, 10.0, 3.0);
  CHECK(feasibility_check(pr, 0.0).feasible);
  CHECK_FALSE(feasibility_check(pr, ee_upper_bound(pr)).feasible);
  CHECK_FALSE(feasibility_check(pr, 1e6).feasible);
  CHECK_THROWS(feasibility_check(pr, -1.0));
}

TEST_CASE("feasibility boundary of a single link") {
  const auto pr = synthetic(RMatrix::Constant(1, 1, 0.5), 0.01, 20.0, 4.0);
  // EE(q) = log2(1 + q) / (0.5 q + 4) on [0.01, 40] by dense scan.
  double best = 0.0;
  for (int k = 0; k <= 400000; ++k) {
    const double q = 0.01 + (40.0 - 0.01) * k / 400000.0;
    best = std::max(best, std::log2(1.0 + q) / (0.5 * q + 4.0));
  }
  CHECK(feasibility_check(pr, best * (1 - 1e-6)).feasible);
  CHECK_FALSE(feasibility_check(pr, best * (1 + 1e-4)).feasible);
  const auto opt = optimal_power(pr, 1e-10);
  CHECK(opt.ee_bits_per_joule == doctest::Approx(best).epsilon(1e-8));
}

TEST_CASE("single user: optimal and heuristic agree") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pr = synthetic(random_gain(3, 1, rng), 0.05, 5.0, 0.5 + trial);
    const auto h = heuristic_power(pr);
    const auto o = optimal_power(pr, 1e-10);
    CHECK(o.ee_bits_per_joule == doctest::Approx(h.ee_bits_per_joule).epsilon(1e-7));
  }
}

TEST_CASE("optimal matches a dense grid on two users") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 4; ++trial) {
    const auto pr = synthetic(random_gain(3, 2, rng), 0.1, 6.0, 1.0 + 2 * trial);
    const auto o = optimal_power(pr, 1e-10);
    const auto h = heuristic_power(pr);
    REQUIRE(o.feasible());
    double hi = 0.0;
    for (Eigen::Index m = 0; m < 3; ++m) hi = std::max(hi, pr.max_power_w / pr.gain.row(m).minCoeff());
    double grid = 0.0;
    RVector p(2);
    for (int i = 0; i < 500; ++i) {
      for (int j = 0; j < 500; ++j) {
        p << 0.1 + (hi - 0.1) * i / 499.0, 0.1 + (hi - 0.1) * j / 499.0;
        if (pr.max_antenna_load(p) > 1.0) continue;
        grid = std::max(grid, pr.ee(p));
      }
    }
    CHECK(o.ee_bits_per_joule >= grid * (1 - 1e-9));
    CHECK(o.ee_bits_per_joule <= grid * (1 + 1e-3));
    CHECK(o.ee_bits_per_joule >= h.ee_bits_per_joule * (1 - 1e-9));
    CHECK(pr.max_antenna_load(o.p) <= 1.0 + 1e-9);
    CHECK((o.p.array() >= pr.min_power.array() * (1 - 1e-9)).all());
  }
}

TEST_CASE("drawn clusters at physical scale") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto pr = drawn_cluster(seed, 1 + static_cast<int>(seed % 3), 2);
    const auto h = heuristic_power(pr);
    if (!h.feasible()) continue;
    const auto o = optimal_power(pr);
    REQUIRE(o.feasible());
    CHECK(o.ee_bits_per_joule >= h.ee_bits_per_joule - 1e3);
    CHECK(o.ee_bits_per_joule <= ee_upper_bound(pr));
    CHECK(pr.max_antenna_load(o.p) <= 1.0 + 1e-9);
    // Cost agrees with the power model's own cluster cost.
    ScenarioConfig c = default_ldas();
    CHECK(pr.cost_w(h.p) > pr.tpi_w);
    CHECK(pr.tpi_w > c.p_fix_w);
  }
}

}
