#include "netfloc/hierarchy.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

#include "netfloc/scale.hpp"

namespace netfloc {

using constants::c1;
using constants::c2;
using constants::c4;
using constants::cX;
using constants::cY;

NetHierarchy::NetHierarchy(const Instance& instance, int rho_min, int rho_max)
    : instance_(&instance), rho_min_(rho_max), rho_max_(rho_max) {
  if (rho_min > rho_max) throw std::invalid_argument("rho_min exceeds rho_max");
  build_top_level();
  while (rho_min_ > rho_min) extend_downward();
  finalize();
}

TripletKey NetHierarchy::key(NodeId id) const {
  const TripletNode& n = nodes_[id.value];
  return {n.r, n.color, n.facility.value};
}

std::span<const NodeId> NetHierarchy::level(int r) const {
  if (r < rho_min_ || r > rho_max_) return {};
  return levels_[level_index(r)];
}

std::vector<FacilityId> NetHierarchy::separated_set(int r) const {
  std::vector<FacilityId> out;
  for (NodeId v : level(r)) out.push_back(nodes_[v.value].facility);
  return out;
}

std::uint32_t NetHierarchy::num_colors(int r) const {
  std::uint32_t colors = 0;
  for (NodeId v : level(r)) colors = std::max(colors, nodes_[v.value].color + 1);
  return colors;
}

double NetHierarchy::center_distance(NodeId a, NodeId b) const {
  return instance_->facility_distance(nodes_[a.value].facility, nodes_[b.value].facility);
}

double NetHierarchy::point_distance(PointId p, NodeId v) const {
  return instance_->point_facility_distance(p, nodes_[v.value].facility);
}

std::vector<NodeId> NetHierarchy::find_balls(PointId p, double cstar) const {
  if (cstar < 1.25 * c1) throw std::invalid_argument("find_balls needs cstar >= 1.25 * c1");
  std::vector<NodeId> out{root()};
  std::size_t frontier_begin = 0;
  for (int r = rho_max_; r > rho_min_; --r) {
    const std::size_t frontier_end = out.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (NodeId child : nodes_[out[i].value].children) {
        if (within(point_distance(p, child), cstar, r - 1)) out.push_back(child);
      }
    }
    if (out.size() == frontier_end) break;
    frontier_begin = frontier_end;
  }
  return out;
}

NodeId NetHierarchy::find_area(PointId p) const {
  const std::vector<NodeId> balls = find_balls(p, c2);
  // find_balls emits nodes level by level, so the bottom-most level is a suffix.
  const int bottom = nodes_[balls.back().value].r;
  NodeId best = balls.back();
  double best_dist = point_distance(p, best);
  for (auto it = balls.rbegin(); it != balls.rend() && nodes_[it->value].r == bottom; ++it) {
    const double d = point_distance(p, *it);
    const auto& cand = nodes_[it->value];
    if (d < best_dist || (d == best_dist && cand.facility < nodes_[best.value].facility)) {
      best = *it;
      best_dist = d;
    }
  }
  return best;
}

AreaChain NetHierarchy::area_chain(PointId p) const {
  AreaChain chain;
  NodeId v = find_area(p);
  chain.bottom_r = nodes_[v.value].r;
  chain.nodes.push_back(v);
  while (nodes_[v.value].parent) {
    v = *nodes_[v.value].parent;
    chain.nodes.push_back(v);
  }
  return chain;
}

bool NetHierarchy::chain_in_x(const AreaChain& chain, NodeId v) const {
  const TripletNode& n = nodes_[v.value];
  const auto entry = chain.at(n.r);
  return entry && within(center_distance(*entry, v), cX, n.r);
}

bool NetHierarchy::facility_in_y(FacilityId f, NodeId v) const {
  const TripletNode& n = nodes_[v.value];
  const auto entry = facility_chains_[f.value].at(n.r);
  return entry && within(center_distance(*entry, v), cY, n.r);
}

void NetHierarchy::build_top_level() {
  std::vector<FacilityId> members;
  for (const Facility& f : instance_->facilities()) {
    const bool separated = std::all_of(members.begin(), members.end(), [&](FacilityId m) {
      return !within(instance_->facility_distance(f.id, m), c1, rho_max_);
    });
    if (separated) members.push_back(f.id);
  }
  if (members.size() != 1) {
    throw std::logic_error("top logradius must hold exactly one facility");
  }
  TripletNode top;
  top.facility = members.front();
  top.r = rho_max_;
  nodes_.push_back(std::move(top));
  levels_.push_back({NodeId{0}});
}

void NetHierarchy::extend_downward() {
  const int upper_r = rho_min_;
  const int r = upper_r - 1;
  const std::vector<NodeId>& upper = levels_[level_index(upper_r)];
  const std::uint32_t first_upper = upper.front().value;

  // Members of the new level grouped under their parent; seeded with the level above.
  std::vector<std::vector<FacilityId>> members_by_parent(upper.size());
  std::vector<char> is_seed(instance_->num_facilities(), 0);
  for (std::size_t k = 0; k < upper.size(); ++k) {
    const FacilityId f = nodes_[upper[k].value].facility;
    members_by_parent[k].push_back(f);
    is_seed[f.value] = 1;
  }

  for (const Facility& f : instance_->facilities()) {
    if (is_seed[f.id.value]) continue;
    const std::vector<NodeId> balls = find_balls(f.point, c2);
    std::optional<NodeId> parent;
    double parent_dist = 0.0;
    bool covered = false;
    for (NodeId u : balls) {
      if (nodes_[u.value].r != upper_r) continue;
      const double d = point_distance(f.point, u);
      if (!parent || d < parent_dist ||
          (d == parent_dist && nodes_[u.value].facility < nodes_[parent->value].facility)) {
        parent = u;
        parent_dist = d;
      }
      for (FacilityId m : members_by_parent[u.value - first_upper]) {
        if (within(instance_->facility_distance(f.id, m), c1, r)) covered = true;
      }
    }
    if (!parent) throw std::logic_error("covering property violated while extending hierarchy");
    if (!covered) members_by_parent[parent->value - first_upper].push_back(f.id);
  }

  std::vector<std::pair<FacilityId, NodeId>> members;
  for (std::size_t k = 0; k < upper.size(); ++k) {
    for (FacilityId f : members_by_parent[k]) members.emplace_back(f, upper[k]);
  }
  std::sort(members.begin(), members.end());

  std::vector<NodeId> ids;
  ids.reserve(members.size());
  for (const auto& [f, parent] : members) {
    const NodeId id{static_cast<std::uint32_t>(nodes_.size())};
    TripletNode node;
    node.facility = f;
    node.r = r;
    node.parent = parent;
    nodes_.push_back(std::move(node));
    nodes_[parent.value].children.push_back(id);
    ids.push_back(id);
  }
  levels_.push_back(std::move(ids));
  rho_min_ = r;
}

void NetHierarchy::push_bottom_level() {
  extend_downward();
  finalize();
}

void NetHierarchy::pop_bottom_level() {
  if (rho_min_ >= rho_max_) throw std::logic_error("cannot remove the only level");
  const std::uint32_t first = levels_.back().front().value;
  for (NodeId u : levels_[level_index(rho_min_ + 1)]) nodes_[u.value].children.clear();
  nodes_.resize(first);
  levels_.pop_back();
  ++rho_min_;
  finalize();
}

void NetHierarchy::finalize() {
  for (int r = rho_max_; r >= rho_min_; --r) color_level(r);
  compute_neighbourhoods();
  facility_chains_.clear();
  facility_chains_.reserve(instance_->num_facilities());
  for (const Facility& f : instance_->facilities()) facility_chains_.push_back(area_chain(f.point));
  compute_designations();
  compute_neighbors_above();
}

namespace {

std::vector<NodeId> at_level(const std::vector<NodeId>& balls, const std::vector<TripletNode>& nodes,
                             int r) {
  std::vector<NodeId> out;
  for (NodeId v : balls) {
    if (nodes[v.value].r == r) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void NetHierarchy::color_level(int r) {
  const std::vector<NodeId>& lvl = levels_[level_index(r)];
  const std::uint32_t first = lvl.front().value;
  std::vector<char> colored(lvl.size(), 0);
  for (std::size_t k = 0; k < lvl.size(); ++k) {
    TripletNode& n = nodes_[lvl[k].value];
    const auto conflicts =
        at_level(find_balls(instance_->facility(n.facility).point, c4), nodes_, r);
    std::vector<char> used;
    for (NodeId u : conflicts) {
      if (u == lvl[k] || !colored[u.value - first]) continue;
      const std::uint32_t c = nodes_[u.value].color;
      if (used.size() <= c) used.resize(c + 1, 0);
      used[c] = 1;
    }
    std::uint32_t color = 0;
    while (color < used.size() && used[color]) ++color;
    n.color = color;
    colored[k] = 1;
  }
}

void NetHierarchy::compute_neighbourhoods() {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    TripletNode& n = nodes_[i];
    const PointId p = instance_->facility(n.facility).point;
    n.x_areas = at_level(find_balls(p, cX), nodes_, n.r);
    n.y_areas = at_level(find_balls(p, cY), nodes_, n.r);
  }
}

void NetHierarchy::compute_designations() {
  const auto cheaper = [&](FacilityId a, FacilityId b) {
    const double fa = instance_->facility(a).opening_cost;
    const double fb = instance_->facility(b).opening_cost;
    return fa < fb || (fa == fb && a < b);
  };
  for (int r = rho_max_; r >= rho_min_; --r) {
    const std::vector<NodeId>& lvl = levels_[level_index(r)];
    const std::uint32_t first = lvl.front().value;
    // Cheapest facility inside each area of this level.
    std::vector<std::optional<FacilityId>> cheapest(lvl.size());
    for (const Facility& f : instance_->facilities()) {
      const auto area = facility_chains_[f.id.value].at(r);
      if (!area) continue;
      auto& slot = cheapest[area->value - first];
      if (!slot || cheaper(f.id, *slot)) slot = f.id;
    }
    for (NodeId v : lvl) {
      TripletNode& n = nodes_[v.value];
      std::optional<FacilityId> best;
      for (NodeId a : n.x_areas) {
        const auto& cand = cheapest[a.value - first];
        if (cand && (!best || cheaper(*cand, *best))) best = cand;
      }
      if (!best) throw std::logic_error("X neighbourhood holds no facility");
      n.designated_facility = *best;
      n.designated_cost = instance_->facility(*best).opening_cost;
    }
  }
}

void NetHierarchy::compute_neighbors_above() {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    TripletNode& n = nodes_[i];
    const TripletKey own = key(NodeId{static_cast<std::uint32_t>(i)});
    const AreaChain& chain = facility_chains_[n.facility.value];
    std::vector<NodeId> above;
    for (int r = n.r; r <= rho_max_; ++r) {
      const auto entry = chain.at(r);
      if (!entry) continue;
      // Y membership is symmetric in the two centres, so the triplets whose Y
      // contains this facility are exactly the Y list of its level-r area.
      for (NodeId u : nodes_[entry->value].y_areas) {
        if (own.level_color_before(key(u))) above.push_back(u);
      }
    }
    std::sort(above.begin(), above.end());
    above.erase(std::unique(above.begin(), above.end()), above.end());
    n.neighbors_above = std::move(above);
  }
}

NetHierarchy::Extents NetHierarchy::extents() const {
  Extents e;
  for (const TripletNode& n : nodes_) {
    e.max_children = std::max(e.max_children, n.children.size());
    e.max_x_areas = std::max(e.max_x_areas, n.x_areas.size());
    e.max_y_areas = std::max(e.max_y_areas, n.y_areas.size());
    e.max_colors = std::max(e.max_colors, n.color + 1);
  }
  return e;
}

std::string NetHierarchy::dump() const {
  std::string out;
  std::vector<std::pair<NodeId, int>> stack{{root(), 0}};
  while (!stack.empty()) {
    const auto [v, depth] = stack.back();
    stack.pop_back();
    const TripletNode& n = nodes_[v.value];
    const std::string parent =
        n.parent ? fmt::format("{}", nodes_[n.parent->value].facility.value) : std::string("-");
    out += fmt::format("{:{}}r={} s={} j={} parent={} f*={} j*={}\n", "", 2 * depth, n.r, n.color,
                       n.facility.value, parent, n.designated_cost, n.designated_facility.value);
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
      stack.emplace_back(*it, depth + 1);
    }
  }
  return out;
}

}  // namespace netfloc
