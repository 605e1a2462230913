#include "ldas/channel.hpp"

#include <cmath>
#include <random>

namespace ldas {

double distance_km(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double ChannelRealization::distance(int ue, int da) const {
  return distance_km(ue_positions.at(static_cast<size_t>(ue)), da_positions.at(static_cast<size_t>(da)));
}

std::vector<Point> grid_layout(const ScenarioConfig& config) {
  const int side = config.grid_side();
  if (side * side != config.num_das || side < 1)
    throw ConfigError("grid_layout: num_das must be a perfect square");
  const double iad = config.cell_side_km / side;
  std::vector<Point> out;
  out.reserve(static_cast<size_t>(config.num_das));
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      out.push_back({(c + 0.5) * iad, (r + 0.5) * iad});
    }
  }
  return out;
}

double path_gain_db(double distance_km, const ScenarioConfig& config) {
  const double d = std::max(distance_km, kMinDistanceKm);
  return config.antenna_gain_db - 128.0 - 10.0 * config.path_loss_exponent * std::log10(d);
}

std::uint64_t realization_seed(std::uint64_t master_seed, std::uint64_t index) {
  // splitmix64 finalizer over a combination of both words.
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(master_seed) ^ (index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

ChannelRealization make_realization(const ScenarioConfig& config, std::vector<Point> da_positions,
                                    std::vector<Point> ue_positions, CMatrix fading) {
  const auto m = static_cast<Eigen::Index>(da_positions.size());
  const auto u = static_cast<Eigen::Index>(ue_positions.size());
  if (fading.rows() != u || fading.cols() != m)
    throw std::invalid_argument("make_realization: fading must be U x M");
  ChannelRealization r;
  r.da_positions = std::move(da_positions);
  r.ue_positions = std::move(ue_positions);
  r.fading = std::move(fading);
  r.path_gain.resize(u, m);
  r.composite.resize(u, m);
  for (Eigen::Index i = 0; i < u; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double d = distance_km(r.ue_positions[static_cast<size_t>(i)], r.da_positions[static_cast<size_t>(j)]);
      const double gain = db_to_linear(path_gain_db(d, config));
      r.path_gain(i, j) = gain;
      r.composite(i, j) = std::sqrt(gain) * r.fading(i, j);
    }
  }
  r.iad_km = config.mode == AntennaMode::kDistributed ? config.cell_side_km / config.grid_side() : 0.0;
  return r;
}

ChannelRealization draw_realization(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  std::mt19937_64 rng(seed);
  std::vector<Point> das;
  if (config.mode == AntennaMode::kDistributed) {
    das = grid_layout(config);
  } else {
    das.assign(static_cast<size_t>(config.num_das), Point{config.cell_side_km / 2, config.cell_side_km / 2});
  }
  std::uniform_real_distribution<double> uniform(0.0, config.cell_side_km);
  std::vector<Point> ues(static_cast<size_t>(config.num_ues));
  for (auto& p : ues) {
    p.x = uniform(rng);
    p.y = uniform(rng);
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix h(config.num_ues, config.num_das);
  const double scale = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    for (Eigen::Index j = 0; j < h.cols(); ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      h(i, j) = Complex(re * scale, im * scale);
    }
  }
  return make_realization(config, std::move(das), std::move(ues), std::move(h));
}

nlohmann::json realization_to_json(const ChannelRealization& r) {
  auto points = [](const std::vector<Point>& ps) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& p : ps) a.push_back({p.x, p.y});
    return a;
  };
  nlohmann::json h_re = nlohmann::json::array();
  nlohmann::json h_im = nlohmann::json::array();
  nlohmann::json gain = nlohmann::json::array();
  for (Eigen::Index i = 0; i < r.composite.rows(); ++i) {
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    nlohmann::json g = nlohmann::json::array();
    for (Eigen::Index j = 0; j < r.composite.cols(); ++j) {
      re.push_back(r.fading(i, j).real());
      im.push_back(r.fading(i, j).imag());
      g.push_back(r.path_gain(i, j));
    }
    h_re.push_back(std::move(re));
    h_im.push_back(std::move(im));
    gain.push_back(std::move(g));
  }
  return {{"da_positions_km", points(r.da_positions)},
          {"ue_positions_km", points(r.ue_positions)},
          {"iad_km", r.iad_km},
          {"path_gain", std::move(gain)},
          {"fading_re", std::move(h_re)},
          {"fading_im", std::move(h_im)}};
}

ChannelRealization realization_from_json(const nlohmann::json& j) {
  auto points = [](const nlohmann::json& a) {
    std::vector<Point> out;
    for (const auto& p : a) out.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return out;
  };
  ChannelRealization r;
  r.da_positions = points(j.at("da_positions_km"));
  r.ue_positions = points(j.at("ue_positions_km"));
  r.iad_km = j.at("iad_km").get<double>();
  const auto u = static_cast<Eigen::Index>(r.ue_positions.size());
  const auto m = static_cast<Eigen::Index>(r.da_positions.size());
  r.path_gain.resize(u, m);
  r.fading.resize(u, m);
  r.composite.resize(u, m);
  for (Eigen::Index i = 0; i < u; ++i) {
    for (Eigen::Index k = 0; k < m; ++k) {
      r.path_gain(i, k) = j.at("path_gain").at(static_cast<size_t>(i)).at(static_cast<size_t>(k)).get<double>();
      r.fading(i, k) = Complex(j.at("fading_re").at(static_cast<size_t>(i)).at(static_cast<size_t>(k)).get<double>(),
                               j.at("fading_im").at(static_cast<size_t>(i)).at(static_cast<size_t>(k)).get<double>());
      r.composite(i, k) = std::sqrt(r.path_gain(i, k)) * r.fading(i, k);
    }
  }
  return r;
}

}  // namespace ldas
