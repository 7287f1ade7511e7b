#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "netfloc/metric.hpp"
#include "netfloc/trace.hpp"

namespace netfloc {

struct GeneratorConfig {
  std::size_t points = 60;      // size of the declared universe
  std::size_t facilities = 20;  // placed on the first points
  int grid = 1000;              // coordinates uniform in [0, grid]^2
  int min_cost = 1;
  int max_cost = 500;
};

/// Distinct integer points on the grid under L2, integer opening costs.
Instance random_instance(std::mt19937_64& rng, const GeneratorConfig& config);

/// `mutations` insert/delete events at a 2:1 ratio; a delete removes a
/// uniformly random live client and falls back to an insert when none is live.
/// With `query_every` > 0 a cost query follows every that many mutations.
std::vector<TraceEvent> random_trace(std::mt19937_64& rng, const Instance& instance,
                                     std::size_t mutations, std::size_t query_every = 0);

/// Seed from NETFLOC_SEED, or `fallback` when unset.
std::uint64_t seed_from_env(std::uint64_t fallback);

}  // namespace netfloc
