#include "netfloc/reference_oracle.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include <fmt/format.h>

#include "netfloc/scale.hpp"

namespace netfloc {

using constants::c2;
using constants::cX;
using constants::cY;

NodeId brute_force_area(const NetHierarchy& h, PointId p) {
  std::optional<NodeId> best;
  double best_dist = 0.0;
  for (std::uint32_t i = 0; i < h.size(); ++i) {
    const NodeId v{i};
    const TripletNode& n = h.node(v);
    const double d = h.point_distance(p, v);
    if (!within(d, c2, n.r)) continue;
    if (!best) {
      best = v;
      best_dist = d;
      continue;
    }
    const TripletNode& b = h.node(*best);
    if (n.r < b.r || (n.r == b.r && (d < best_dist || (d == best_dist && n.facility < b.facility)))) {
      best = v;
      best_dist = d;
    }
  }
  if (!best) throw std::logic_error("point lies in no area");
  return *best;
}

namespace {

/// Areas containing p, one per logradius: `by_level[rho_max - r]`, absent below
/// the point's smallest area.
struct PointAreas {
  std::vector<std::optional<NodeId>> by_level;

  std::optional<NodeId> at(const NetHierarchy& h, int r) const {
    return by_level[static_cast<std::size_t>(h.rho_max() - r)];
  }
};

PointAreas point_areas(const NetHierarchy& h, PointId p) {
  PointAreas out;
  out.by_level.assign(static_cast<std::size_t>(h.num_levels()), std::nullopt);
  for (std::optional<NodeId> v = brute_force_area(h, p); v; v = h.node(*v).parent) {
    out.by_level[static_cast<std::size_t>(h.rho_max() - h.node(*v).r)] = *v;
  }
  return out;
}

bool in_neighbourhood(const NetHierarchy& h, const PointAreas& areas, NodeId v, double c) {
  const int r = h.node(v).r;
  const auto entry = areas.at(h, r);
  return entry && within(h.center_distance(*entry, v), c, r);
}

}  // namespace

FacilityId brute_force_designated(const NetHierarchy& h, NodeId v) {
  const Instance& inst = h.instance();
  std::optional<FacilityId> best;
  for (const Facility& f : inst.facilities()) {
    if (!in_neighbourhood(h, point_areas(h, f.point), v, cX)) continue;
    if (!best || f.opening_cost < inst.facility(*best).opening_cost) best = f.id;
  }
  if (!best) throw std::logic_error("X neighbourhood holds no facility");
  return *best;
}

StateSnapshot recompute_state(const NetHierarchy& h, const ClientMap& clients) {
  const Instance& inst = h.instance();
  const std::size_t num_nodes = h.size();
  const int base = h.rho_min();

  StateSnapshot s;
  s.rho_min = h.rho_min();
  s.rho_max = h.rho_max();
  for (std::uint32_t i = 0; i < num_nodes; ++i) s.nodes.push_back(h.key(NodeId{i}));
  s.annotations.assign(num_nodes, NodeAnnotation{});

  // Clients grouped by point; every quantity depends only on the point.
  std::map<PointId, std::int64_t> multiplicity;
  for (const auto& [id, p] : clients) ++multiplicity[p];
  std::map<PointId, PointAreas> areas;
  for (const auto& [p, count] : multiplicity) areas.emplace(p, point_areas(h, p));

  std::vector<PointAreas> facility_areas;
  for (const Facility& f : inst.facilities()) facility_areas.push_back(point_areas(h, f.point));

  // Designated facilities and client counts.
  std::vector<FacilityId> designated(num_nodes);
  std::vector<double> fstar(num_nodes);
  for (std::uint32_t i = 0; i < num_nodes; ++i) {
    const NodeId v{i};
    std::optional<FacilityId> best;
    for (const Facility& f : inst.facilities()) {
      if (!in_neighbourhood(h, facility_areas[f.id.value], v, cX)) continue;
      if (!best || f.opening_cost < inst.facility(*best).opening_cost) best = f.id;
    }
    designated[i] = *best;
    fstar[i] = inst.facility(*best).opening_cost;

    NodeAnnotation& a = s.annotations[i];
    for (const auto& [p, count] : multiplicity) {
      const PointAreas& pa = areas.at(p);
      if (in_neighbourhood(h, pa, v, cX)) a.n_x += count;
      if (pa.at(h, h.node(v).r) == v) a.n_area += count;
    }
    a.is_abundant = abundant(h.node(v).r, static_cast<std::uint64_t>(a.n_x), fstar[i]);
  }

  // Open set: the definition only refers to strictly smaller (r, color), so one
  // pass in that order reaches the fixed point.
  std::vector<NodeId> order;
  for (std::uint32_t i = 0; i < num_nodes; ++i) order.push_back(NodeId{i});
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return h.key(a) < h.key(b); });

  const auto in_y = [&](NodeId u, NodeId v) {
    return in_neighbourhood(h, facility_areas[h.node(u).facility.value], v, cY);
  };
  std::vector<NodeId> open;
  for (NodeId v : order) {
    NodeAnnotation& a = s.annotations[v.value];
    bool blocked = false;
    bool enabled = false;
    for (NodeId u : open) {
      if (!in_y(u, v)) continue;
      enabled = true;
      if (h.key(u).level_color_before(h.key(v))) {
        blocked = true;
        ++a.open_below;
      }
    }
    a.is_open = a.is_abundant && !blocked;
    a.is_enabled = enabled || a.is_open;
    if (a.is_open) open.push_back(v);
  }
  // Open triplets of the same (r, color) that come later in facility order can
  // still enable v.
  for (NodeId v : order) {
    NodeAnnotation& a = s.annotations[v.value];
    if (a.is_enabled) continue;
    for (NodeId u : open) {
      const TripletKey ku = h.key(u);
      const TripletKey kv = h.key(v);
      if (!kv.level_color_before(ku) && in_y(u, v)) a.is_enabled = true;
    }
  }

  // Payments.
  std::map<PointId, std::optional<NodeId>> area_triplet;
  for (const auto& [p, pa] : areas) {
    std::optional<NodeId> lowest;
    for (int r = h.rho_min(); r <= h.rho_max() && !lowest; ++r) {
      const auto v = pa.at(h, r);
      if (v && s.annotations[v->value].is_enabled) lowest = v;
    }
    area_triplet[p] = lowest;
  }
  for (std::uint32_t i = 0; i < num_nodes; ++i) {
    const NodeId v{i};
    const int r = h.node(v).r;
    NodeAnnotation& a = s.annotations[i];
    for (const auto& [p, count] : multiplicity) {
      const PointAreas& pa = areas.at(p);
      if (pa.at(h, r) != v) continue;
      const auto& lowest = area_triplet.at(p);
      if (!lowest) continue;
      const int r_area = h.node(*lowest).r;
      // Payments are settled at the client's enabled area, so a disabled
      // subtree carries no cost.
      if (r_area > r) continue;
      a.cost += count * payment_units(r_area, base);
      if (r_area < r) a.n_enabled_below += count;
    }
  }
  for (std::uint32_t i = 0; i < num_nodes; ++i) {
    if (const auto parent = h.node(NodeId{i}).parent) {
      s.annotations[parent->value].y += s.annotations[i].cost;
    }
  }

  for (NodeId v : open) s.open_facilities.push_back(designated[v.value]);
  std::sort(s.open_facilities.begin(), s.open_facilities.end());
  s.open_facilities.erase(std::unique(s.open_facilities.begin(), s.open_facilities.end()),
                          s.open_facilities.end());

  for (const auto& [id, p] : clients) {
    const auto& lowest = area_triplet.at(p);
    if (!lowest) throw std::logic_error("client lies in no enabled area");
    Assignment asg;
    asg.area_triplet = *lowest;
    asg.r_area = h.node(*lowest).r;
    std::optional<NodeId> aux;
    for (NodeId u : open) {
      if (h.key(*lowest).level_color_before(h.key(u))) continue;
      if (!in_y(u, *lowest)) continue;
      if (!aux || h.key(u) < h.key(*aux)) aux = u;
    }
    if (!aux) throw std::logic_error("enabled area has no open triplet in its Y neighbourhood");
    asg.aux_triplet = *aux;
    asg.open_facility = designated[aux->value];
    s.assignments.emplace(id, asg);
  }
  return s;
}

double solution_cost(const Instance& instance, const ClientMap& clients,
                     const std::vector<FacilityId>& open) {
  if (clients.empty()) {
    double total = 0.0;
    for (FacilityId f : open) total += instance.facility(f).opening_cost;
    return total;
  }
  if (open.empty()) return std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (FacilityId f : open) total += instance.facility(f).opening_cost;
  for (const auto& [id, p] : clients) {
    double best = std::numeric_limits<double>::infinity();
    for (FacilityId f : open) best = std::min(best, instance.point_facility_distance(p, f));
    total += best;
  }
  return total;
}

OptResult brute_force_opt(const Instance& instance, const ClientMap& clients) {
  const std::size_t m = instance.num_facilities();
  if (m > max_exact_facilities) {
    throw std::length_error(fmt::format("exact optimum refused: {} facilities exceeds limit {}", m,
                                        max_exact_facilities));
  }
  OptResult result;
  if (clients.empty()) return result;

  std::map<PointId, double> weight;
  for (const auto& [id, p] : clients) weight[p] += 1.0;
  std::vector<std::vector<double>> dist;
  std::vector<double> mult;
  for (const auto& [p, w] : weight) {
    std::vector<double> row;
    for (const Facility& f : instance.facilities()) row.push_back(instance.point_facility_distance(p, f.id));
    dist.push_back(std::move(row));
    mult.push_back(w);
  }

  double best_cost = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    double cost = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (mask & (1u << j)) cost += instance.facilities()[j].opening_cost;
    }
    for (std::size_t k = 0; k < dist.size() && cost < best_cost; ++k) {
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < m; ++j) {
        if (mask & (1u << j)) nearest = std::min(nearest, dist[k][j]);
      }
      cost += mult[k] * nearest;
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_mask = mask;
    }
  }

  result.cost = best_cost;
  for (std::size_t j = 0; j < m; ++j) {
    if (best_mask & (1u << j)) result.open_set.push_back(FacilityId{static_cast<std::uint32_t>(j)});
  }
  for (const auto& [id, p] : clients) {
    FacilityId best = result.open_set.front();
    for (FacilityId f : result.open_set) {
      if (instance.point_facility_distance(p, f) < instance.point_facility_distance(p, best)) best = f;
    }
    result.assignment.emplace(id, best);
  }
  return result;
}

}  // namespace netfloc
