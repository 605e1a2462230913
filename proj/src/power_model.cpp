#include "ldas/power_model.hpp"

#include <cmath>
#include <stdexcept>

namespace ldas {

RVector per_antenna_power(const CMatrix& masked_precoder, const RVector& powers) {
  if (masked_precoder.cols() != powers.size())
    throw std::invalid_argument("per_antenna_power: precoder columns must match power vector");
  if ((powers.array() < 0.0).any())
    throw std::invalid_argument("per_antenna_power: negative power allocation");
  return masked_precoder.cwiseAbs2() * powers;
}

double tpd_power(const CMatrix& masked_precoder, const RVector& powers, const ScenarioConfig& config) {
  return config.tpd_factor() * per_antenna_power(masked_precoder, powers).sum();
}

PowerBreakdown tpi_power(const SelectionMatrix& selection, std::span<const int> precoder_dims,
                         const ScenarioConfig& config, double sum_target_rate_bps) {
  PowerBreakdown out;
  const double per_chain = config.p_cc1_w + config.p_cc2_w_per_bps * sum_target_rate_bps;
  for (Eigen::Index m = 0; m < selection.rows(); ++m) {
    if (selection.row(m).maxCoeff() > 0) out.rf_circuit += per_chain;
  }
  const double sp1 = config.bandwidth_hz * config.p_sp1_w_per_hz;
  for (int dim : precoder_dims) {
    if (dim < 0) throw std::invalid_argument("tpi_power: negative precoder dimension");
    out.signal_processing += sp1 * std::pow(static_cast<double>(dim), config.beta + 1.0);
  }
  out.signal_processing += config.bandwidth_hz * config.p_sp2_w_per_hz;
  out.signaling = static_cast<double>(selection.rows()) * config.bandwidth_hz * config.p_sig_w_per_hz;
  out.fixed = config.p_fix_w;
  out.finalize();
  return out;
}

double cluster_tpi(int active_das, int cluster_ues, int num_clusters, const ScenarioConfig& config,
                   double cluster_target_rate_bps) {
  if (num_clusters <= 0) throw std::invalid_argument("cluster_tpi: cluster count must be positive");
  if (active_das < 0 || cluster_ues < 0) throw std::invalid_argument("cluster_tpi: negative size");
  const double omega = config.bandwidth_hz;
  const double rf = active_das * (config.p_cc1_w + config.p_cc2_w_per_bps * cluster_target_rate_bps);
  const double sp = omega * config.p_sp1_w_per_hz * std::pow(static_cast<double>(cluster_ues), config.beta + 1.0);
  const double sig = active_das * omega * config.p_sig_w_per_hz;
  const double shared = (omega * config.p_sp2_w_per_hz + config.p_fix_w) / num_clusters;
  return rf + sp + sig + shared;
}

double cluster_cost(const CMatrix& restricted_precoder, const RVector& powers, int num_clusters,
                    const ScenarioConfig& config) {
  const auto ues = static_cast<int>(restricted_precoder.cols());
  const double tpi = cluster_tpi(static_cast<int>(restricted_precoder.rows()), ues, num_clusters, config,
                                 ues * config.target_rate_bps);
  return tpd_power(restricted_precoder, powers, config) + tpi;
}

}  // namespace ldas
