#include "ldas/power_control.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ldas/power_model.hpp"

namespace ldas {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kLoadTol = 1e-12;

}  // namespace

double ClusterPowerProblem::rate_bps(const RVector& p) const {
  double sum = 0.0;
  for (Eigen::Index u = 0; u < p.size(); ++u) sum += std::log2(1.0 + p(u) / noise_w);
  return bandwidth_hz * sum;
}

double ClusterPowerProblem::cost_w(const RVector& p) const {
  return tpd_factor * (gain * p).sum() + tpi_w;
}

double ClusterPowerProblem::max_antenna_load(const RVector& p) const {
  return (gain * p).maxCoeff() / max_power_w;
}

ClusterPowerProblem make_power_problem(const ClusterPrecoder& precoder, int num_clusters,
                                       const ScenarioConfig& config) {
  if (!precoder.ok()) throw std::invalid_argument("make_power_problem: precoder is not valid");
  ClusterPowerProblem pr;
  pr.gain = precoder.restricted.cwiseAbs2();
  pr.min_power = RVector::Constant(precoder.num_ues(), config.min_required_power_w());
  pr.noise_w = config.noise_power_w();
  pr.bandwidth_hz = config.bandwidth_hz;
  pr.max_power_w = config.max_tx_power_w;
  pr.tpd_factor = config.tpd_factor();
  pr.num_clusters = num_clusters;
  const int ues = precoder.num_ues();
  pr.fixed_share_w = config.p_fix_w / num_clusters;
  pr.tpi_w = cluster_tpi(static_cast<int>(precoder.restricted.rows()), ues, num_clusters, config,
                         ues * config.target_rate_bps);
  return pr;
}

// ---------------------------------------------------------------------------
// Heuristic

HeuristicTerms heuristic_terms(const ClusterPowerProblem& pr) {
  HeuristicTerms t;
  const double total_min = pr.min_power.sum();
  const auto n = pr.num_ues();
  if (total_min > 0.0) {
    t.portion = pr.min_power / total_min;
  } else {
    t.portion = RVector::Constant(n, 1.0 / n);
  }
  t.alpha_lb = total_min;
  const RVector load = pr.gain * t.portion;  // per-antenna power at unit scaling
  t.alpha_ub = std::numeric_limits<double>::infinity();
  for (Eigen::Index m = 0; m < load.size(); ++m) {
    if (load(m) > 0.0) t.alpha_ub = std::min(t.alpha_ub, pr.max_power_w / load(m));
  }
  t.c1 = t.portion.minCoeff() / pr.noise_w;
  t.c2 = pr.tpd_factor * load.sum();
  t.c3 = pr.tpi_w;

  if (t.c2 <= 0.0 || t.c3 <= 0.0) {
    // No radiated-power penalty (or no fixed cost): the objective is monotone.
    t.alpha_stationary = t.c2 <= 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  } else {
    const double ratio = t.c1 * t.c3 / t.c2;
    const double x = (ratio - 1.0) / std::numbers::e;
    const double w = lambert_w0(x);
    // exp(1 + w) = e * x / w for w != 0 avoids overflow at large arguments.
    const double y = w > 1.0 ? std::numbers::e * x / w : std::exp(1.0 + w);
    t.alpha_stationary = (y - 1.0) / t.c1;
  }
  t.alpha = std::clamp(t.alpha_stationary, t.alpha_lb, std::max(t.alpha_lb, t.alpha_ub));
  if (t.alpha_lb > t.alpha_ub) t.alpha = t.alpha_lb;
  return t;
}

double heuristic_objective(const ClusterPowerProblem& pr, const HeuristicTerms& t, double alpha) {
  return pr.bandwidth_hz * pr.num_ues() * std::log2(1.0 + t.c1 * alpha) / (t.c2 * alpha + t.c3);
}

PowerAllocation heuristic_power(const ClusterPowerProblem& pr) {
  PowerAllocation out;
  out.method = PowerControlMethod::kHeuristic;
  const HeuristicTerms t = heuristic_terms(pr);
  if (t.alpha_lb > t.alpha_ub * (1.0 + kLoadTol)) {
    out.status = PowerStatus::kRateVsPower;
    out.p = t.alpha_lb * t.portion;
    return out;
  }
  const double alpha = std::min(t.alpha, t.alpha_ub);
  out.p = alpha * t.portion;
  out.achieved_ee_bound = heuristic_objective(pr, t, alpha);
  out.ee_bits_per_joule = pr.ee(out.p);
  return out;
}

// ---------------------------------------------------------------------------
// Optimal (bisection on EE level)

namespace {

// Problem in SNR units q = p / noise: q >= q_min, load * q <= 1.
struct ScaledProblem {
  RMatrix load;  // gain * noise / max_power
  RVector q_min;
  RVector cost_coeff;  // d cost / d q per UE, watts
  double tpi_w = 0.0;
  double bandwidth_hz = 0.0;
};

ScaledProblem scale(const ClusterPowerProblem& pr) {
  ScaledProblem s;
  s.load = pr.gain * (pr.noise_w / pr.max_power_w);
  s.q_min = pr.min_power / pr.noise_w;
  s.cost_coeff = pr.tpd_factor * pr.noise_w * pr.gain.colwise().sum().transpose();
  s.tpi_w = pr.tpi_w;
  s.bandwidth_hz = pr.bandwidth_hz;
  return s;
}

double min_slack(const ScaledProblem& s) { return (RVector::Ones(s.load.rows()) - s.load * s.q_min).minCoeff(); }

RVector interior_start(const ScaledProblem& s) {
  const RVector slack = RVector::Ones(s.load.rows()) - s.load * s.q_min;
  double tau = std::numeric_limits<double>::infinity();
  for (Eigen::Index m = 0; m < s.load.rows(); ++m) {
    const double row = s.load.row(m).sum();
    if (row > 0.0) tau = std::min(tau, 0.5 * slack(m) / row);
  }
  if (!std::isfinite(tau)) tau = 1.0;
  return s.q_min + RVector::Constant(s.q_min.size(), tau);
}

double phi(const ScaledProblem& s, double xi, const RVector& q) {
  double rate = 0.0;
  for (Eigen::Index u = 0; u < q.size(); ++u) rate += std::log2(1.0 + q(u));
  return rate - xi / s.bandwidth_hz * (s.cost_coeff.dot(q) + s.tpi_w);
}

}  // namespace

FeasibilityResult feasibility_check(const ClusterPowerProblem& pr, double xi, double phi_tol) {
  if (!(xi >= 0.0)) throw std::invalid_argument("feasibility_check: xi must be non-negative");
  FeasibilityResult out;
  const ScaledProblem s = scale(pr);
  const double slack = min_slack(s);
  if (slack < -kLoadTol) {
    out.polytope_empty = true;
    return out;
  }
  const auto n = s.q_min.size();
  if (slack <= kLoadTol) {
    // Rate floors already saturate an antenna: the floor is the only candidate.
    out.phi_max = phi(s, xi, s.q_min);
    out.feasible = out.phi_max >= 0.0;
    out.witness = s.q_min * pr.noise_w;
    return out;
  }
  LinearConstraints lc;
  lc.a.resize(s.load.rows() + n, n);
  lc.a.topRows(s.load.rows()) = s.load;
  lc.a.bottomRows(n) = -RMatrix::Identity(n, n);
  lc.b.resize(s.load.rows() + n);
  lc.b.head(s.load.rows()).setOnes();
  lc.b.tail(n) = -s.q_min;

  const double k = xi / s.bandwidth_hz;
  ConcaveObjective obj{
      [&](const RVector& q) { return phi(s, xi, q); },
      [&](const RVector& q) -> RVector {
        return (1.0 / kLn2) * (RVector::Ones(q.size()) + q).cwiseInverse() - k * s.cost_coeff;
      },
      [&](const RVector& q) -> RMatrix {
        const RVector d = -(1.0 / kLn2) * (RVector::Ones(q.size()) + q).cwiseAbs2().cwiseInverse();
        return d.asDiagonal();
      }};
  const RVector start = interior_start(s);
  const ConcaveMaxResult r = maximize_concave_over_polytope(obj, lc, phi_tol, &start);
  out.phi_max = r.value;
  out.feasible = r.value >= 0.0;
  out.witness = r.argmax * pr.noise_w;
  return out;
}

double ee_upper_bound(const ClusterPowerProblem& pr) {
  // Every UE at its single-antenna power ceiling, over the cost floor.
  double rate = 0.0;
  for (Eigen::Index u = 0; u < pr.gain.cols(); ++u) {
    double p_max = std::numeric_limits<double>::infinity();
    for (Eigen::Index m = 0; m < pr.gain.rows(); ++m) {
      if (pr.gain(m, u) > 0.0) p_max = std::min(p_max, pr.max_power_w / pr.gain(m, u));
    }
    rate += pr.bandwidth_hz * std::log2(1.0 + p_max / pr.noise_w);
  }
  const double floor_w = pr.fixed_share_w > 0.0 ? pr.fixed_share_w : pr.tpi_w;
  return rate / floor_w;
}

PowerAllocation optimal_power(const ClusterPowerProblem& pr, double ee_tol) {
  PowerAllocation out;
  out.method = PowerControlMethod::kOptimal;
  const ScaledProblem s = scale(pr);
  if (min_slack(s) < -kLoadTol) {
    out.status = PowerStatus::kRateVsPower;
    out.p = pr.min_power;
    return out;
  }
  // xi = 0 is feasible: any interior point is a witness.
  RVector best = min_slack(s) > kLoadTol ? RVector(interior_start(s) * pr.noise_w) : pr.min_power;
  const double hi = ee_upper_bound(pr);
  auto predicate = [&](double xi) {
    const FeasibilityResult f = feasibility_check(pr, xi);
    if (f.feasible) best = f.witness;
    return f.feasible;
  };
  const BisectionResult b = bisect(predicate, 0.0, hi, ee_tol);
  out.p = best;
  out.iterations = b.iterations;
  out.achieved_ee_bound = b.value;
  out.ee_bits_per_joule = pr.ee(out.p);
  return out;
}

}  // namespace ldas
