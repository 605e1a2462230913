#pragma once

#include <cstdint>
#include <vector>

#include "ldas/numerics.hpp"
#include "ldas/scenario.hpp"

namespace ldas {

struct Point {
  double x = 0.0;  // km
  double y = 0.0;  // km
};

double distance_km(const Point& a, const Point& b);

/// Minimum UE-DA distance used by the path-loss model.
inline constexpr double kMinDistanceKm = 1e-3;

/// One drop of UEs plus its fading draw. Rows index UEs, columns index DAs.
struct ChannelRealization {
  std::vector<Point> da_positions;
  std::vector<Point> ue_positions;
  RMatrix path_gain;  // linear power gain A_um
  CMatrix fading;     // small-scale h_um ~ CN(0,1)
  CMatrix composite;  // sqrt(A_um) h_um
  double iad_km = 0.0;

  int num_ues() const { return static_cast<int>(composite.rows()); }
  int num_das() const { return static_cast<int>(composite.cols()); }
  double distance(int ue, int da) const;
};

/// Cell-centered sqrt(M) x sqrt(M) grid with spacing cell_side / sqrt(M).
std::vector<Point> grid_layout(const ScenarioConfig& config);

/// g - 128 - 10 mu log10(d), d in km (clamped at kMinDistanceKm).
double path_gain_db(double distance_km, const ScenarioConfig& config);

/// Seed of realization `index` under `master_seed`; independent of run order.
std::uint64_t realization_seed(std::uint64_t master_seed, std::uint64_t index);

ChannelRealization draw_realization(const ScenarioConfig& config, std::uint64_t seed);

/// Assembles a realization from explicit geometry and fading (fixtures, tests).
ChannelRealization make_realization(const ScenarioConfig& config, std::vector<Point> da_positions,
                                    std::vector<Point> ue_positions, CMatrix fading);

nlohmann::json realization_to_json(const ChannelRealization& r);
ChannelRealization realization_from_json(const nlohmann::json& j);

}  // namespace ldas
