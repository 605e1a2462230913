#include "ldas/clustering.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ldas {

long long ClusterPartition::csi_count() const {
  long long total = 0;
  for (size_t l = 0; l < ues.size(); ++l) {
    total += static_cast<long long>(ues[l].size()) * static_cast<long long>(das[l].size());
  }
  return total;
}

namespace {

// Received max-power gain at `ue` from the antennas in `das`.
double received(int ue, const std::vector<int>& das, const CMatrix& channel, double p_max) {
  double sum = 0.0;
  for (int m : das) sum += std::norm(channel(ue, m)) * p_max;
  return sum;
}

}  // namespace

double pair_distance(int u, int v, const CMatrix& channel, const SelectionAssignment& selection,
                     const ScenarioConfig& config) {
  const auto& mu = selection.assigned.at(static_cast<size_t>(u));
  const auto& mv = selection.assigned.at(static_cast<size_t>(v));
  if (mu.empty() || mv.empty()) throw std::invalid_argument("pair_distance: UE without assigned antennas");
  const double noise = config.noise_power_w();
  const double p = config.max_tx_power_w;
  const double to_u = received(u, mu, channel, p) / (noise + received(u, mv, channel, p));
  const double to_v = received(v, mv, channel, p) / (noise + received(v, mu, channel, p));
  return std::min(to_u, to_v);
}

RMatrix pairwise_distances(const CMatrix& channel, const SelectionAssignment& selection,
                           const ScenarioConfig& config) {
  const int n = selection.num_ues();
  RMatrix d = RMatrix::Constant(n, n, std::numeric_limits<double>::infinity());
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      d(u, v) = d(v, u) = pair_distance(u, v, channel, selection, config);
    }
  }
  return d;
}

double cluster_distance(const RMatrix& distances, const std::vector<int>& a, const std::vector<int>& b) {
  double best = std::numeric_limits<double>::infinity();
  for (int u : a) {
    for (int v : b) best = std::min(best, distances(u, v));
  }
  return best;
}

std::vector<std::vector<int>> agglomerate(const RMatrix& distances, double gamma_linear) {
  const auto n = static_cast<int>(distances.rows());
  if (distances.cols() != n) throw std::invalid_argument("agglomerate: distance table must be square");
  std::vector<std::vector<int>> clusters;
  clusters.reserve(static_cast<size_t>(n));
  for (int u = 0; u < n; ++u) clusters.push_back({u});
  // Inter-cluster single-linkage distances, updated in place on merge.
  RMatrix link = distances;
  while (clusters.size() > 1) {
    const auto k = clusters.size();
    double best = std::numeric_limits<double>::infinity();
    size_t bi = 0;
    size_t bj = 0;
    bool found = false;
    for (size_t i = 0; i < k; ++i) {
      for (size_t j = i + 1; j < k; ++j) {
        const double d = link(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (!found || d < best) {
          best = d;
          bi = i;
          bj = j;
          found = true;
        }
      }
    }
    if (!(best < gamma_linear)) break;
    auto& target = clusters[bi];
    target.insert(target.end(), clusters[bj].begin(), clusters[bj].end());
    std::sort(target.begin(), target.end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    // Fold row/column bj into bi, then drop bj.
    const auto ii = static_cast<Eigen::Index>(bi);
    const auto jj = static_cast<Eigen::Index>(bj);
    for (Eigen::Index t = 0; t < static_cast<Eigen::Index>(k); ++t) {
      const double merged = std::min(link(ii, t), link(jj, t));
      link(ii, t) = merged;
      link(t, ii) = merged;
    }
    link(ii, ii) = std::numeric_limits<double>::infinity();
    RMatrix reduced(k - 1, k - 1);
    for (Eigen::Index r = 0, rr = 0; r < static_cast<Eigen::Index>(k); ++r) {
      if (r == jj) continue;
      for (Eigen::Index c = 0, cc = 0; c < static_cast<Eigen::Index>(k); ++c) {
        if (c == jj) continue;
        reduced(rr, cc++) = link(r, c);
      }
      ++rr;
    }
    link = std::move(reduced);
  }
  return clusters;
}

namespace {

ClusterPartition attach_antennas(std::vector<std::vector<int>> groups, const SelectionAssignment& selection) {
  ClusterPartition out;
  out.ues = std::move(groups);
  for (const auto& members : out.ues) {
    std::vector<int> das;
    for (int u : members) {
      const auto& mine = selection.assigned.at(static_cast<size_t>(u));
      das.insert(das.end(), mine.begin(), mine.end());
    }
    std::sort(das.begin(), das.end());
    out.das.push_back(std::move(das));
  }
  return out;
}

}  // namespace

ClusterPartition cluster_users(const RMatrix& distances, double gamma_linear,
                               const SelectionAssignment& selection) {
  return attach_antennas(agglomerate(distances, gamma_linear), selection);
}

ClusterPartition single_cluster(const SelectionAssignment& selection) {
  std::vector<int> all(static_cast<size_t>(selection.num_ues()));
  for (int u = 0; u < selection.num_ues(); ++u) all[static_cast<size_t>(u)] = u;
  return attach_antennas({all}, selection);
}

}  // namespace ldas
