#include "ldas/antenna_selection.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace ldas {

int SelectionAssignment::active_das() const {
  int n = 0;
  for (Eigen::Index m = 0; m < s.rows(); ++m) n += s.row(m).maxCoeff() > 0 ? 1 : 0;
  return n;
}

namespace {

void check_quota(std::span<const int> quota, int num_das) {
  long long total = 0;
  for (int q : quota) {
    if (q < 1) throw std::invalid_argument("antenna quota must be at least 1");
    total += q;
  }
  if (total > num_das)
    throw InfeasibleSelection("antenna quotas sum to " + std::to_string(total) + " but only " +
                              std::to_string(num_das) + " antennas exist");
}

}  // namespace

SelectionAssignment greedy_select(const RMatrix& score, std::span<const int> quota,
                                  SelectionMetric metric) {
  const auto num_ues = static_cast<int>(score.rows());
  const auto num_das = static_cast<int>(score.cols());
  if (static_cast<int>(quota.size()) != num_ues)
    throw std::invalid_argument("greedy_select: one quota per UE required");
  if (!score.allFinite()) throw std::invalid_argument("greedy_select: non-finite metric");
  check_quota(quota, num_das);

  struct Pair {
    double key;
    int da;
    int ue;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<size_t>(num_ues) * static_cast<size_t>(num_das));
  const double sign = metric == SelectionMetric::kChannelGain ? -1.0 : 1.0;
  for (int u = 0; u < num_ues; ++u) {
    for (int m = 0; m < num_das; ++m) pairs.push_back({sign * score(u, m), m, u});
  }
  // One sort, then a linear sweep: a skipped pair can never become valid again.
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.key != b.key) return a.key < b.key;
    if (a.da != b.da) return a.da < b.da;
    return a.ue < b.ue;
  });

  SelectionAssignment out;
  out.s = SelectionMatrix::Zero(num_das, num_ues);
  out.assigned.assign(static_cast<size_t>(num_ues), {});
  out.quota.assign(quota.begin(), quota.end());
  std::vector<bool> da_used(static_cast<size_t>(num_das), false);
  int open_ues = num_ues;
  for (const auto& p : pairs) {
    if (open_ues == 0) break;
    auto& mine = out.assigned[static_cast<size_t>(p.ue)];
    if (da_used[static_cast<size_t>(p.da)] || static_cast<int>(mine.size()) >= quota[static_cast<size_t>(p.ue)])
      continue;
    da_used[static_cast<size_t>(p.da)] = true;
    mine.push_back(p.da);
    out.s(p.da, p.ue) = 1;
    if (static_cast<int>(mine.size()) == quota[static_cast<size_t>(p.ue)]) --open_ues;
  }
  return out;
}

SelectionAssignment select_antennas(const ChannelRealization& channel, std::span<const int> quota,
                                    SelectionMetric metric) {
  if (metric == SelectionMetric::kChannelGain) {
    return greedy_select(channel.composite.cwiseAbs(), quota, metric);
  }
  RMatrix dist(channel.num_ues(), channel.num_das());
  for (int u = 0; u < channel.num_ues(); ++u) {
    for (int m = 0; m < channel.num_das(); ++m) dist(u, m) = channel.distance(u, m);
  }
  return greedy_select(dist, quota, metric);
}

SelectionAssignment lcas_select(const CMatrix& channel, int count) {
  const auto num_ues = static_cast<int>(channel.rows());
  const auto num_das = static_cast<int>(channel.cols());
  if (num_ues < 1) throw std::invalid_argument("lcas_select: no UEs");
  if (count < num_ues) throw std::invalid_argument("lcas_select: need at least one antenna per UE");
  if (count > num_das)
    throw InfeasibleSelection("lcas_select: " + std::to_string(count) + " antennas requested, " +
                              std::to_string(num_das) + " available");
  const RVector strength = channel.cwiseAbs2().colwise().sum().transpose();
  std::vector<int> order(static_cast<size_t>(num_das));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return strength(a) > strength(b); });

  SelectionAssignment out;
  out.s = SelectionMatrix::Zero(num_das, num_ues);
  out.assigned.assign(static_cast<size_t>(num_ues), {});
  out.quota.assign(static_cast<size_t>(num_ues), 0);
  for (int k = 0; k < count; ++k) {
    const int da = order[static_cast<size_t>(k)];
    const int ue = k % num_ues;
    out.s(da, ue) = 1;
    out.assigned[static_cast<size_t>(ue)].push_back(da);
    ++out.quota[static_cast<size_t>(ue)];
  }
  return out;
}

}  // namespace ldas
