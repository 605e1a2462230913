#include "ldas/precoding.hpp"

#include <stdexcept>

namespace ldas {

CMatrix ClusterPrecoder::expand(int total_das) const {
  CMatrix full = CMatrix::Zero(total_das, restricted.cols());
  for (size_t k = 0; k < das.size(); ++k) {
    full.row(das[k]) = restricted.row(static_cast<Eigen::Index>(k));
  }
  return full;
}

namespace {

CMatrix restrict_columns(const CMatrix& h, std::span<const int> cols) {
  CMatrix out(h.rows(), static_cast<Eigen::Index>(cols.size()));
  for (size_t k = 0; k < cols.size(); ++k) {
    if (cols[k] < 0 || cols[k] >= h.cols()) throw std::out_of_range("zf_precoder: antenna index out of range");
    out.col(static_cast<Eigen::Index>(k)) = h.col(cols[k]);
  }
  return out;
}

}  // namespace

ClusterPrecoder zf_precoder(const CMatrix& cluster_channel, std::span<const int> active_das) {
  ClusterPrecoder out;
  out.das.assign(active_das.begin(), active_das.end());
  const auto ues = cluster_channel.rows();
  const CMatrix h = restrict_columns(cluster_channel, active_das);
  if (h.cols() < ues) {
    out.status = PrecoderStatus::kTooFewAntennas;
    out.restricted = CMatrix::Zero(h.cols(), ues);
    return out;
  }
  if (numerical_rank(h) < ues) {
    out.status = PrecoderStatus::kRankDeficient;
    out.restricted = CMatrix::Zero(h.cols(), ues);
    return out;
  }
  out.restricted = pseudo_inverse(h);
  out.effective = h * out.restricted;
  out.zf_residual = (out.effective - CMatrix::Identity(ues, ues)).norm();
  return out;
}

bool satisfies_zf(const ClusterPrecoder& precoder, const CMatrix& cluster_channel, double tol) {
  if (!precoder.ok()) return false;
  const CMatrix h = restrict_columns(cluster_channel, precoder.das);
  const auto ues = cluster_channel.rows();
  const double residual = (h * precoder.restricted - CMatrix::Identity(ues, ues)).norm();
  return residual <= tol * precoder.restricted.norm() * h.norm();
}

}  // namespace ldas
