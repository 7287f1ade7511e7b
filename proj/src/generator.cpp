#include "netfloc/generator.hpp"

#include <cstdlib>
#include <set>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace netfloc {

Instance random_instance(std::mt19937_64& rng, const GeneratorConfig& config) {
  if (config.facilities == 0 || config.facilities > config.points) {
    throw std::invalid_argument("need 1 <= facilities <= points");
  }
  std::uniform_int_distribution<int> coord(0, config.grid);
  std::uniform_int_distribution<int> cost(config.min_cost, config.max_cost);

  std::set<std::pair<int, int>> seen;
  std::vector<std::vector<double>> points;
  while (points.size() < config.points) {
    const int x = coord(rng);
    const int y = coord(rng);
    if (seen.emplace(x, y).second) points.push_back({double(x), double(y)});
  }
  std::vector<Facility> facilities;
  for (std::uint32_t i = 0; i < config.facilities; ++i) {
    facilities.push_back(Facility{FacilityId{i}, PointId{i}, double(cost(rng))});
  }
  return Instance(MetricSpace::euclidean(MetricKind::EuclideanL2, points), std::move(facilities));
}

std::vector<TraceEvent> random_trace(std::mt19937_64& rng, const Instance& instance,
                                     std::size_t mutations, std::size_t query_every) {
  std::uniform_int_distribution<std::uint32_t> point(
      0, static_cast<std::uint32_t>(instance.num_points() - 1));
  std::uniform_int_distribution<int> op(0, 2);
  std::vector<std::string> live;
  std::size_t next_client = 0;
  std::vector<TraceEvent> out;
  int line = 0;
  for (std::size_t m = 0; m < mutations; ++m) {
    TraceEvent ev;
    ev.line = ++line;
    if (op(rng) == 2 && !live.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
      const std::size_t k = pick(rng);
      ev.kind = TraceEvent::Kind::Delete;
      ev.client = live[k];
      live[k] = live.back();
      live.pop_back();
    } else {
      ev.kind = TraceEvent::Kind::Insert;
      ev.client = fmt::format("c{}", next_client++);
      ev.point = PointId{point(rng)};
      live.push_back(ev.client);
    }
    out.push_back(std::move(ev));
    if (query_every > 0 && (m + 1) % query_every == 0) {
      TraceEvent q;
      q.kind = TraceEvent::Kind::CostQuery;
      q.line = ++line;
      out.push_back(q);
    }
  }
  return out;
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* text = std::getenv("NETFLOC_SEED");
  if (text == nullptr || *text == '\0') return fallback;
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw std::invalid_argument(fmt::format("NETFLOC_SEED '{}' is not an unsigned integer", text));
  }
}

}  // namespace netfloc
