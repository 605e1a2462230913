#pragma once

#include <vector>

#include "ldas/antenna_selection.hpp"

namespace ldas {

/// UE clusters and the antennas each cluster owns.
struct ClusterPartition {
  std::vector<std::vector<int>> ues;  // sorted members, clusters ordered by first member
  std::vector<std::vector<int>> das;  // union of the members' assigned antennas, sorted

  int num_clusters() const { return static_cast<int>(ues.size()); }
  /// Complex channel coefficients fed back: sum over clusters of M_l * U_l.
  long long csi_count() const;
};

/// Minimum of the two directed max-power SINRs between UEs `u` and `v`
/// (linear). Each direction counts the UE's own assigned antennas as signal
/// and the other UE's assigned antennas as interference.
double pair_distance(int u, int v, const CMatrix& channel, const SelectionAssignment& selection,
                     const ScenarioConfig& config);

/// Symmetric U x U table of pair_distance; the diagonal is +inf.
RMatrix pairwise_distances(const CMatrix& channel, const SelectionAssignment& selection,
                           const ScenarioConfig& config);

/// Single-linkage agglomeration from singletons: merge the closest pair of
/// clusters while their distance is strictly below `gamma_linear`. Ties go to
/// the lexicographically smallest cluster pair.
std::vector<std::vector<int>> agglomerate(const RMatrix& distances, double gamma_linear);

/// Cluster-level distance: smallest pairwise distance across the two sets.
double cluster_distance(const RMatrix& distances, const std::vector<int>& a, const std::vector<int>& b);

/// Agglomerates and attaches each cluster's antenna set.
ClusterPartition cluster_users(const RMatrix& distances, double gamma_linear,
                               const SelectionAssignment& selection);

/// One cluster holding every UE.
ClusterPartition single_cluster(const SelectionAssignment& selection);

}  // namespace ldas
