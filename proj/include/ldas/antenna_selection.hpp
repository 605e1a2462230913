#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "ldas/channel.hpp"
#include "ldas/power_model.hpp"

namespace ldas {

/// Requested antenna quotas exceed the deployed antennas.
class InfeasibleSelection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary antenna-to-UE assignment. Every antenna serves at most one UE.
struct SelectionAssignment {
  SelectionMatrix s;                      // M x U
  std::vector<std::vector<int>> assigned; // per UE, in assignment order
  std::vector<int> quota;                 // requested antennas per UE

  int num_das() const { return static_cast<int>(s.rows()); }
  int num_ues() const { return static_cast<int>(s.cols()); }
  int active_das() const;
};

/// Greedy pairing. `score` is U x M: channel magnitudes |H_um| for CGB
/// (largest first) or UE-DA distances for MDB (smallest first). Each step
/// takes the best remaining (DA, UE) pair, ties to the lower DA then lower
/// UE index; a DA leaves the pool once used and a UE once its quota is met.
SelectionAssignment greedy_select(const RMatrix& score, std::span<const int> quota,
                                  SelectionMetric metric);

/// Greedy selection driven by a realization under the chosen metric.
SelectionAssignment select_antennas(const ChannelRealization& channel, std::span<const int> quota,
                                    SelectionMetric metric);

/// Colocated baseline: activates the `count` antennas with the largest
/// aggregate gain sum_u |H_um|^2 (ties to the lower index) and hands them out
/// round-robin so each UE owns at least one. All of them end up in one
/// full-MU cluster.
SelectionAssignment lcas_select(const CMatrix& channel, int count);

}  // namespace ldas
