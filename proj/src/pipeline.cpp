#include "ldas/pipeline.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace ldas {

nlohmann::json EEReport::to_json() const {
  nlohmann::json j;
  j["ee_mbpj"] = ee_mbpj;
  j["sum_rate_bps"] = sum_rate_bps;
  j["power"] = {{"tpd_w", power.tpd},
                {"rf_circuit_w", power.rf_circuit},
                {"signal_processing_w", power.signal_processing},
                {"signaling_w", power.signaling},
                {"fixed_w", power.fixed},
                {"total_w", power.total}};
  j["num_clusters"] = num_clusters;
  j["outage"] = outage;
  j["per_ue_rates"] = per_ue_rates;
  j["design_rates"] = design_rates;
  j["csi_count"] = csi_count;
  if (std::isfinite(gamma_db)) {
    j["gamma_db"] = gamma_db;
  } else {
    j["gamma_db"] = gamma_db > 0 ? "inf" : "-inf";
  }
  j["quotas"] = quotas;
  j["as_passes"] = as_passes;
  j["gamma_probes"] = gamma_probes;
  j["max_antenna_power_w"] = max_antenna_power_w;
  j["clusters"] = clusters;
  return j;
}

EEReport outage_report(const ScenarioConfig& config, double gamma_db, std::vector<int> quotas) {
  EEReport r;
  r.outage = true;
  r.gamma_db = gamma_db;
  r.quotas = std::move(quotas);
  r.per_ue_rates.assign(static_cast<size_t>(config.num_ues), 0.0);
  r.design_rates.assign(static_cast<size_t>(config.num_ues), 0.0);
  return r;
}

EEReport evaluate(const CMatrix& channel, const SelectionAssignment& selection,
                  const ClusterPartition& partition, const std::vector<ClusterSolution>& solutions,
                  const ScenarioConfig& config) {
  const auto num_ues = static_cast<int>(channel.rows());
  const auto num_das = static_cast<int>(channel.cols());
  CMatrix w = CMatrix::Zero(num_das, num_ues);
  RVector p = RVector::Zero(num_ues);
  EEReport r;
  r.design_rates.assign(static_cast<size_t>(num_ues), 0.0);
  const double noise = config.noise_power_w();
  std::vector<int> dims;
  for (int l = 0; l < partition.num_clusters(); ++l) {
    const auto& members = partition.ues[static_cast<size_t>(l)];
    const auto& sol = solutions[static_cast<size_t>(l)];
    const CMatrix full = sol.precoder.expand(num_das);
    for (size_t k = 0; k < members.size(); ++k) {
      const int u = members[k];
      w.col(u) = full.col(static_cast<Eigen::Index>(k));
      p(u) = sol.power.p(static_cast<Eigen::Index>(k));
      r.design_rates[static_cast<size_t>(u)] = config.bandwidth_hz * std::log2(1.0 + p(u) / noise);
    }
    dims.push_back(static_cast<int>(members.size()));
  }

  // gains(u, v) = |h_u w_v|^2
  const RMatrix gains = (channel * w).cwiseAbs2();
  r.per_ue_rates.resize(static_cast<size_t>(num_ues));
  for (int u = 0; u < num_ues; ++u) {
    const double signal = gains(u, u) * p(u);
    const double interference = gains.row(u).dot(p) - signal;
    const double sinr = signal / (noise + std::max(0.0, interference));
    const double rate = config.bandwidth_hz * std::log2(1.0 + sinr);
    r.per_ue_rates[static_cast<size_t>(u)] = rate;
    r.sum_rate_bps += rate;
  }

  const RVector antenna = per_antenna_power(w, p);
  r.max_antenna_power_w = antenna.size() ? antenna.maxCoeff() : 0.0;
  r.power = tpi_power(selection.s, dims, config, num_ues * config.target_rate_bps);
  r.power.tpd = config.tpd_factor() * antenna.sum();
  r.power.finalize();
  r.ee_mbpj = r.sum_rate_bps / r.power.total / 1e6;
  r.num_clusters = partition.num_clusters();
  r.csi_count = partition.csi_count();
  r.quotas = selection.quota;
  r.clusters = partition.ues;
  return r;
}

std::vector<ClusterSolution> solve_clusters(const CMatrix& channel, const ClusterPartition& partition,
                                            const ScenarioConfig& config) {
  std::vector<ClusterSolution> out;
  out.reserve(static_cast<size_t>(partition.num_clusters()));
  for (int l = 0; l < partition.num_clusters(); ++l) {
    const auto& members = partition.ues[static_cast<size_t>(l)];
    CMatrix h(static_cast<Eigen::Index>(members.size()), channel.cols());
    for (size_t k = 0; k < members.size(); ++k) h.row(static_cast<Eigen::Index>(k)) = channel.row(members[k]);
    ClusterSolution sol;
    sol.precoder = zf_precoder(h, partition.das[static_cast<size_t>(l)]);
    if (sol.precoder.ok()) {
      const ClusterPowerProblem problem = make_power_problem(sol.precoder, partition.num_clusters(), config);
      sol.power = config.power_control == PowerControlMethod::kOptimal ? optimal_power(problem)
                                                                      : heuristic_power(problem);
    }
    out.push_back(std::move(sol));
  }
  return out;
}

namespace {

struct Pass {
  SelectionAssignment selection;
  RMatrix distances;
};

// Selection and pairwise distances depend only on the quotas, so gamma probes
// of one realization share them.
class PassCache {
 public:
  PassCache(const ChannelRealization& realization, const ScenarioConfig& config)
      : realization_(realization), config_(config) {}

  const Pass& get(const std::vector<int>& quota) {
    auto it = cache_.find(quota);
    if (it != cache_.end()) return it->second;
    Pass pass;
    if (config_.mode == AntennaMode::kColocated) {
      pass.selection = lcas_select(realization_.composite, std::accumulate(quota.begin(), quota.end(), 0));
    } else {
      pass.selection = select_antennas(realization_, quota, config_.selection_metric);
      pass.distances = pairwise_distances(realization_.composite, pass.selection, config_);
    }
    return cache_.emplace(quota, std::move(pass)).first->second;
  }

 private:
  const ChannelRealization& realization_;
  const ScenarioConfig& config_;
  std::map<std::vector<int>, Pass> cache_;
};

double best_assigned_gain(const CMatrix& channel, int ue, const std::vector<int>& das) {
  double best = 0.0;
  for (int m : das) best = std::max(best, std::abs(channel(ue, m)));
  return best;
}

EEReport solve_with_cache(PassCache& cache, const ChannelRealization& realization, const ScenarioConfig& config,
                          double gamma_db) {
  const CMatrix& h = realization.composite;
  const int num_ues = realization.num_ues();
  const int num_das = realization.num_das();
  std::vector<int> quota(static_cast<size_t>(num_ues), 1);
  if (num_ues > num_das) return outage_report(config, gamma_db, quota);
  const bool colocated = config.mode == AntennaMode::kColocated;
  const double gamma_linear = db_to_linear(gamma_db);

  for (int pass = 0;; ++pass) {
    const Pass& p = cache.get(quota);
    const ClusterPartition partition =
        colocated ? single_cluster(p.selection) : cluster_users(p.distances, gamma_linear, p.selection);
    const std::vector<ClusterSolution> solutions = solve_clusters(h, partition, config);

    std::vector<int> infeasible;
    for (int l = 0; l < partition.num_clusters(); ++l) {
      if (!solutions[static_cast<size_t>(l)].feasible()) infeasible.push_back(l);
    }
    if (infeasible.empty()) {
      EEReport r = evaluate(h, p.selection, partition, solutions, config);
      r.gamma_db = gamma_db;
      r.as_passes = pass + 1;
      if (colocated) r.quotas = quota;
      return r;
    }
    if (pass >= config.q_as) {
      EEReport r = outage_report(config, gamma_db, quota);
      r.as_passes = pass + 1;
      return r;
    }

    int total = std::accumulate(quota.begin(), quota.end(), 0);
    bool grew = false;
    for (int l : infeasible) {
      if (total >= num_das) break;
      const auto& members = partition.ues[static_cast<size_t>(l)];
      int weakest = members.front();
      double weakest_gain = std::numeric_limits<double>::infinity();
      for (int u : members) {
        const double g = best_assigned_gain(h, u, p.selection.assigned[static_cast<size_t>(u)]);
        if (g < weakest_gain) {
          weakest_gain = g;
          weakest = u;
        }
      }
      ++quota[static_cast<size_t>(weakest)];
      ++total;
      grew = true;
    }
    if (!grew) {
      EEReport r = outage_report(config, gamma_db, quota);
      r.as_passes = pass + 1;
      return r;
    }
  }
}

}  // namespace

EEReport solve_realization(const ChannelRealization& realization, const ScenarioConfig& config,
                           double gamma_db) {
  PassCache cache(realization, config);
  return solve_with_cache(cache, realization, config, gamma_db);
}

namespace {

// A probe that lands on the same partition with the same EE sits on a plateau
// of EE(gamma). Walking across it is allowed while the partition can still
// change in that direction: merges remain when stepping up, splits when
// stepping down.
bool keeps_going(const EEReport& probe, const EEReport& incumbent, int direction) {
  if (probe.ee_mbpj > incumbent.ee_mbpj) return true;
  if (probe.ee_mbpj < incumbent.ee_mbpj || probe.outage || probe.clusters != incumbent.clusters) return false;
  const int ues = static_cast<int>(probe.per_ue_rates.size());
  return direction > 0 ? probe.num_clusters > 1 : probe.num_clusters < ues;
}

}  // namespace

EEReport adapt_gamma(const ChannelRealization& realization, const ScenarioConfig& config) {
  PassCache cache(realization, config);
  const double delta = config.delta_db;
  int probes = 0;
  auto probe = [&](double gamma_db) {
    ++probes;
    return solve_with_cache(cache, realization, config, gamma_db);
  };

  double gamma = config.adapt_gamma_start_db;
  EEReport best = probe(gamma);
  gamma += delta;
  EEReport current = probe(gamma);
  int direction = 0;
  if (keeps_going(current, best, 1)) {
    best = std::move(current);
    direction = 1;
  } else {
    gamma -= 2.0 * delta;
    current = probe(gamma);
    if (keeps_going(current, best, -1)) {
      best = std::move(current);
      direction = -1;
    }
  }
  for (int q = 0; direction != 0 && q < config.q_uc; ++q) {
    gamma += direction * delta;
    current = probe(gamma);
    if (!keeps_going(current, best, direction)) break;
    best = std::move(current);
  }
  best.gamma_probes = probes;
  return best;
}

EEReport run_realization(const ChannelRealization& realization, const ScenarioConfig& config) {
  return config.adapt_gamma ? adapt_gamma(realization, config) : solve_realization(realization, config);
}

}  // namespace ldas
