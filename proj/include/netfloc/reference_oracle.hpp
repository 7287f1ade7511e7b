#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

#include "netfloc/hierarchy.hpp"
#include "netfloc/metric.hpp"
#include "netfloc/snapshot.hpp"

// Slow, direct evaluation of every definition the dynamic engine maintains.
// Nothing here shares code with the incremental update path: areas are found
// by scanning all nodes, memberships by explicit distance tests, and the open
// set by a single pass in (r, color) order.

namespace netfloc {

using ClientMap = std::map<ClientId, PointId>;

/// Recomputes the full annotated state for `clients` over a built hierarchy.
StateSnapshot recompute_state(const NetHierarchy& hierarchy, const ClientMap& clients);

/// Smallest-logradius area containing p, by exhaustive scan.
NodeId brute_force_area(const NetHierarchy& hierarchy, PointId p);

/// Designated facility of v by exhaustive scan over all facilities.
FacilityId brute_force_designated(const NetHierarchy& hierarchy, NodeId v);

inline constexpr std::size_t max_exact_facilities = 20;

struct OptResult {
  double cost = 0.0;
  std::vector<FacilityId> open_set;
  std::map<ClientId, FacilityId> assignment;
};

/// Exact optimum by enumerating facility subsets. Refuses more than
/// max_exact_facilities facilities.
OptResult brute_force_opt(const Instance& instance, const ClientMap& clients);

/// Cost of serving `clients` from `open` with nearest-facility assignment.
double solution_cost(const Instance& instance, const ClientMap& clients,
                     const std::vector<FacilityId>& open);

}  // namespace netfloc
