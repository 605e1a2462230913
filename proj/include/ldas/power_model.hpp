#pragma once

#include <span>

#include "ldas/numerics.hpp"
#include "ldas/scenario.hpp"

namespace ldas {

using SelectionMatrix = Eigen::MatrixXi;  // M x U, entries 0/1

/// Consumed power split into its model components, in watts.
struct PowerBreakdown {
  double tpd = 0.0;                // amplifier-scaled radiated power
  double rf_circuit = 0.0;         // per active RF chain and fiber
  double signal_processing = 0.0;  // precoding + baseband
  double signaling = 0.0;          // channel-estimation overhead
  double fixed = 0.0;
  double total = 0.0;

  double tpi() const { return rf_circuit + signal_processing + signaling + fixed; }
  /// Recomputes `total` in the canonical order.
  void finalize() { total = tpd + rf_circuit + signal_processing + signaling + fixed; }
};

/// Average radiated power per antenna: diag(W diag(p) W^H).
RVector per_antenna_power(const CMatrix& masked_precoder, const RVector& powers);

/// c/eta * sum_m [W diag(p) W^H]_mm for an antenna-masked precoder W.
double tpd_power(const CMatrix& masked_precoder, const RVector& powers, const ScenarioConfig& config);

/// Transmit-independent terms at network scale. `precoder_dims` holds the
/// column count of each independently computed precoder block (one entry per
/// cluster); the signal-processing term charges each block separately and
/// the per-frequency baseband term once. The signaling term covers all
/// `selection.rows()` deployed antennas.
PowerBreakdown tpi_power(const SelectionMatrix& selection, std::span<const int> precoder_dims,
                         const ScenarioConfig& config, double sum_target_rate_bps);

/// Transmit-independent share of one cluster: its active antennas' RF
/// chains, its precoder block, its own signaling, and a 1/L share of the
/// baseband and fixed terms.
double cluster_tpi(int active_das, int cluster_ues, int num_clusters, const ScenarioConfig& config,
                   double cluster_target_rate_bps);

/// Full cost of one cluster for a precoder restricted to the cluster's
/// active antennas (rows) and its UEs (columns).
double cluster_cost(const CMatrix& restricted_precoder, const RVector& powers, int num_clusters,
                    const ScenarioConfig& config);

}  // namespace ldas
