#pragma once

#include "ldas/numerics.hpp"
#include "ldas/precoding.hpp"
#include "ldas/scenario.hpp"

namespace ldas {

/// Everything the per-cluster power allocation needs once the ZF precoder is
/// fixed: radiated-power coefficients per (antenna, UE) and the cost model.
struct ClusterPowerProblem {
  RMatrix gain;          // |[S^d W]_mu|^2, active antennas x cluster UEs
  RVector min_power;     // per-UE power meeting the target rate under ZF
  double noise_w = 0.0;
  double bandwidth_hz = 0.0;
  double max_power_w = 0.0;  // per-antenna average-power limit
  double tpd_factor = 0.0;   // c / eta
  double tpi_w = 0.0;        // transmit-independent cluster cost
  double fixed_share_w = 0.0;  // P_fix / L, a floor of the cluster cost
  int num_clusters = 1;

  int num_ues() const { return static_cast<int>(gain.cols()); }
  double rate_bps(const RVector& p) const;
  double cost_w(const RVector& p) const;
  double ee(const RVector& p) const { return rate_bps(p) / cost_w(p); }
  /// Largest per-antenna radiated power relative to the limit.
  double max_antenna_load(const RVector& p) const;
};

ClusterPowerProblem make_power_problem(const ClusterPrecoder& precoder, int num_clusters,
                                       const ScenarioConfig& config);

enum class PowerStatus {
  kFeasible,
  kRateVsPower,  // per-UE rate floors violate an antenna's power limit
};

struct PowerAllocation {
  RVector p;  // post-ZF effective power per UE, watts
  PowerStatus status = PowerStatus::kFeasible;
  PowerControlMethod method = PowerControlMethod::kHeuristic;
  double ee_bits_per_joule = 0.0;  // true cluster EE at p
  double achieved_ee_bound = 0.0;  // lower-bound objective (heuristic) or bisection floor (optimal)
  int iterations = 0;

  bool feasible() const { return status == PowerStatus::kFeasible; }
};

/// Intermediate quantities of the closed-form scaling rule.
struct HeuristicTerms {
  RVector portion;  // relative power split, sums to 1
  double alpha_lb = 0.0;
  double alpha_ub = 0.0;
  double c1 = 0.0;  // min portion / noise
  double c2 = 0.0;  // amplifier-scaled radiated power per unit scaling
  double c3 = 0.0;  // transmit-independent cost
  double alpha_stationary = 0.0;
  double alpha = 0.0;  // stationary point clamped to [alpha_lb, alpha_ub]
};

HeuristicTerms heuristic_terms(const ClusterPowerProblem& problem);

/// Lower-bound EE  Omega U log2(1 + c1 a) / (c2 a + c3)  of a common scaling a.
double heuristic_objective(const ClusterPowerProblem& problem, const HeuristicTerms& terms, double alpha);

/// p = clamp(alpha_o, alpha_lb, alpha_ub) * portion, alpha_o from Lambert W.
PowerAllocation heuristic_power(const ClusterPowerProblem& problem);

struct FeasibilityResult {
  bool feasible = false;
  bool polytope_empty = false;
  double phi_max = 0.0;  // in bit/s/Hz units: max rate/Omega - xi*cost/Omega
  RVector witness;       // watts, valid when feasible
};

/// Is there a power vector inside the rate/power polytope whose cluster EE
/// reaches `xi` (bits/J)? Maximizes the concave slack
/// sum log2(1 + p/noise) - xi * cost(p) / Omega over the polytope.
FeasibilityResult feasibility_check(const ClusterPowerProblem& problem, double xi,
                                    double phi_tol = kTolerances.feasibility_phi);

/// Largest achievable cluster EE by bisection on xi with `feasibility_check`.
/// `ee_tol_bits_per_joule` is the final bracket width.
PowerAllocation optimal_power(const ClusterPowerProblem& problem,
                              double ee_tol_bits_per_joule = kTolerances.bisection_ee_mbpj * 1e6);

/// Safe finite upper end of the bisection bracket.
double ee_upper_bound(const ClusterPowerProblem& problem);

}  // namespace ldas
