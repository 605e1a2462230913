#pragma once

#include <vector>

#include "ldas/antenna_selection.hpp"
#include "ldas/channel.hpp"
#include "ldas/clustering.hpp"
#include "ldas/power_control.hpp"
#include "ldas/power_model.hpp"
#include "ldas/precoding.hpp"

namespace ldas {

/// Precoder and power allocation of one cluster.
struct ClusterSolution {
  ClusterPrecoder precoder;
  PowerAllocation power;

  bool feasible() const { return precoder.ok() && power.feasible(); }
};

struct EEReport {
  double ee_mbpj = 0.0;
  double sum_rate_bps = 0.0;
  PowerBreakdown power;
  int num_clusters = 0;
  bool outage = false;
  std::vector<double> per_ue_rates;  // achieved, with inter-cluster interference
  std::vector<double> design_rates;  // per-cluster ZF rates, no interference
  long long csi_count = 0;
  double gamma_db = 0.0;
  std::vector<int> quotas;
  int as_passes = 0;            // AS/UC passes run by the M_u adaptation
  int gamma_probes = 0;         // quota-adaptation runs made by gamma adaptation
  double max_antenna_power_w = 0.0;
  std::vector<std::vector<int>> clusters;

  nlohmann::json to_json() const;
};

/// Network-level scoring of a fully solved realization: assembles the global
/// masked precoder and powers, computes each UE's SINR with the actual
/// inter-cluster interference, and charges the network power model with
/// signaling for every deployed antenna.
EEReport evaluate(const CMatrix& channel, const SelectionAssignment& selection,
                  const ClusterPartition& partition, const std::vector<ClusterSolution>& solutions,
                  const ScenarioConfig& config);

/// Outage placeholder: EE = 0.
EEReport outage_report(const ScenarioConfig& config, double gamma_db, std::vector<int> quotas);

/// Precoding plus power control for every cluster of a partition.
std::vector<ClusterSolution> solve_clusters(const CMatrix& channel, const ClusterPartition& partition,
                                            const ScenarioConfig& config);

/// AS, UC, precoding and power control with M_u adaptation at `gamma_db`.
/// The first pass always runs; up to q_as further passes follow, each adding
/// one antenna to the weakest UE of every infeasible cluster.
EEReport solve_realization(const ChannelRealization& realization, const ScenarioConfig& config,
                           double gamma_db);
inline EEReport solve_realization(const ChannelRealization& realization, const ScenarioConfig& config) {
  return solve_realization(realization, config, config.gamma_db);
}

/// Line search on gamma from `adapt_gamma_start_db` in steps of `delta_db`
/// with at most q_uc continuation steps. Returns the best report seen.
EEReport adapt_gamma(const ChannelRealization& realization, const ScenarioConfig& config);

/// adapt_gamma when `config.adapt_gamma` is set, otherwise solve_realization.
EEReport run_realization(const ChannelRealization& realization, const ScenarioConfig& config);

}  // namespace ldas
