#pragma once

#include <string>
#include <vector>

#include "netfloc/dynamic_state.hpp"
#include "netfloc/hierarchy.hpp"

namespace netfloc {

/// Static structure checks over every declared point: covering/separating,
/// tree shape, laminar areas, ball cover by X, X/Y containment, Y nesting,
/// coloring, designated facilities, find_balls against exhaustive scan, and
/// above-neighbour lists. Returns one message per violation.
std::vector<std::string> check_structure(const NetHierarchy& hierarchy);

/// Size bounds implied by a declared doubling dimension. Empty when the
/// instance declares none.
std::vector<std::string> check_kappa_bounds(const NetHierarchy& hierarchy);

/// Per-state logical properties: open => enabled, abundant => enabled,
/// enabled ancestors, at most one open X per client, nonempty open set, root
/// payment equals the sum of client payments, r_area no smaller than the
/// logradius of an open X holding the client, distance to the assigned
/// facility, and registry consistency.
std::vector<std::string> check_logical(const DynamicFacilityLocation& engine);

/// sum_i dist(i, j_open(i)) + sum over open facilities of f_j.
double realized_cost(const DynamicFacilityLocation& engine);

/// realized_cost <= 427 * cost_query, with 1e-9 relative slack.
std::vector<std::string> check_payment_bound(const DynamicFacilityLocation& engine);

}  // namespace netfloc
