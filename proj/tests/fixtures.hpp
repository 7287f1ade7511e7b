#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "netfloc/generator.hpp"
#include "netfloc/metric.hpp"
#include "netfloc/trace.hpp"

namespace fixtures {

// Points 0, 25, 50, 100, 101 on a line; F0 at P0 and F1 at P3.
inline netfloc::Instance line5(double f1_cost = 10.0) {
  using namespace netfloc;
  auto metric = MetricSpace::euclidean(MetricKind::EuclideanL2, {{0}, {25}, {50}, {100}, {101}});
  return Instance(std::move(metric), {Facility{FacilityId{0}, PointId{0}, 10.0},
                                      Facility{FacilityId{1}, PointId{3}, f1_cost}});
}

inline netfloc::Instance on_line(const std::vector<double>& xs,
                                 const std::vector<std::pair<std::uint32_t, double>>& facilities) {
  using namespace netfloc;
  std::vector<std::vector<double>> rows;
  for (double x : xs) rows.push_back({x});
  std::vector<Facility> fs;
  for (std::uint32_t i = 0; i < facilities.size(); ++i) {
    fs.push_back(Facility{FacilityId{i}, PointId{facilities[i].first}, facilities[i].second});
  }
  return Instance(MetricSpace::euclidean(MetricKind::EuclideanL2, rows), std::move(fs));
}

inline std::vector<netfloc::TraceEvent> trace(const std::string& text) {
  std::istringstream in(text);
  return netfloc::parse_trace(in);
}

inline netfloc::Instance random_instance(std::uint64_t seed, std::size_t points, std::size_t facilities) {
  std::mt19937_64 rng(seed);
  netfloc::GeneratorConfig config;
  config.points = points;
  config.facilities = facilities;
  return netfloc::random_instance(rng, config);
}

}  // namespace fixtures
