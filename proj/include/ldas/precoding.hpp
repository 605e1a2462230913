#pragma once

#include <span>
#include <vector>

#include "ldas/numerics.hpp"

namespace ldas {

enum class PrecoderStatus { kOk, kTooFewAntennas, kRankDeficient };

/// Zero-forcing precoder of one cluster, stored on the cluster's active
/// antennas only. Rows of the full M x U_l matrix outside `das` are zero.
struct ClusterPrecoder {
  PrecoderStatus status = PrecoderStatus::kOk;
  std::vector<int> das;
  CMatrix restricted;  // |das| x U_l
  CMatrix effective;   // H_l S_l W_l, U_l x U_l
  double zf_residual = 0.0;  // ||effective - I||_F

  bool ok() const { return status == PrecoderStatus::kOk; }
  int num_ues() const { return static_cast<int>(restricted.cols()); }
  /// Embeds the restricted precoder into an M x U_l matrix.
  CMatrix expand(int total_das) const;
};

/// W = (H_l diag(s_l))^dagger where `cluster_channel` holds the cluster's
/// U_l rows of the full U x M channel and `active_das` lists the antennas
/// with s = 1. Flags too few antennas or a rank-deficient restriction
/// instead of returning an ill-conditioned precoder.
ClusterPrecoder zf_precoder(const CMatrix& cluster_channel, std::span<const int> active_das);

/// ZF threshold check: ||H S W - I||_F <= tol * ||W||_F * ||H||_F.
bool satisfies_zf(const ClusterPrecoder& precoder, const CMatrix& cluster_channel,
                  double tol = kTolerances.zf_residual);

}  // namespace ldas
