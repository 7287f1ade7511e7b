#include "netfloc/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "netfloc/reference_oracle.hpp"
#include "netfloc/scale.hpp"

namespace netfloc {

using namespace constants;

namespace {

std::string node_label(const NetHierarchy& h, NodeId v) {
  const TripletNode& n = h.node(v);
  return fmt::format("(F{},{})", n.facility.value, n.r);
}

std::vector<NodeId> brute_force_balls(const NetHierarchy& h, PointId p, double cstar) {
  std::vector<NodeId> out;
  for (std::uint32_t i = 0; i < h.size(); ++i) {
    const NodeId v{i};
    if (within(h.point_distance(p, v), cstar, h.node(v).r)) out.push_back(v);
  }
  return out;
}

void check_nets(const NetHierarchy& h, std::vector<std::string>& out) {
  const Instance& inst = h.instance();
  for (int r = h.rho_min(); r <= h.rho_max(); ++r) {
    const auto lvl = h.level(r);
    for (std::size_t a = 0; a < lvl.size(); ++a) {
      for (std::size_t b = a + 1; b < lvl.size(); ++b) {
        if (within(h.center_distance(lvl[a], lvl[b]), c1, r)) {
          out.push_back(fmt::format("separating: {} and {} too close", node_label(h, lvl[a]),
                                    node_label(h, lvl[b])));
        }
      }
    }
    for (const Facility& f : inst.facilities()) {
      const bool covered = std::any_of(lvl.begin(), lvl.end(), [&](NodeId v) {
        return within(inst.point_facility_distance(f.point, h.node(v).facility), c1, r);
      });
      if (!covered) out.push_back(fmt::format("covering: F{} uncovered at r={}", f.id.value, r));
    }
    if (r < h.rho_max()) {
      // Nested nets: every member of the level above is also a member here.
      const auto members = h.separated_set(r);
      for (FacilityId f : h.separated_set(r + 1)) {
        if (!std::binary_search(members.begin(), members.end(), f)) {
          out.push_back(fmt::format("nesting: F{} in J_{} but not J_{}", f.value, r + 1, r));
        }
      }
    }
  }
  if (h.level(h.rho_max()).size() != 1) out.push_back("top level is not a singleton");
}

void check_tree(const NetHierarchy& h, std::vector<std::string>& out) {
  for (std::uint32_t i = 0; i < h.size(); ++i) {
    const NodeId v{i};
    const TripletNode& n = h.node(v);
    if (!n.parent) {
      if (v != h.root()) out.push_back(fmt::format("{} has no parent", node_label(h, v)));
      continue;
    }
    const TripletNode& p = h.node(*n.parent);
    if (p.r != n.r + 1) out.push_back(fmt::format("{}: parent logradius {}", node_label(h, v), p.r));
    if (!within(h.center_distance(v, *n.parent), c1, p.r)) {
      out.push_back(fmt::format("{}: parent farther than c1*5^(r+1)", node_label(h, v)));
    }
    if (std::count(p.children.begin(), p.children.end(), v) != 1) {
      out.push_back(fmt::format("{}: missing from parent's children", node_label(h, v)));
    }
    if (!std::binary_search(n.x_areas.begin(), n.x_areas.end(), v)) {
      out.push_back(fmt::format("{}: not in its own X", node_label(h, v)));
    }
    if (!std::includes(n.y_areas.begin(), n.y_areas.end(), n.x_areas.begin(), n.x_areas.end())) {
      out.push_back(fmt::format("{}: X list not contained in Y list", node_label(h, v)));
    }
  }
}

void check_areas(const NetHierarchy& h, std::vector<std::string>& out) {
  const Instance& inst = h.instance();
  for (std::uint32_t q = 0; q < inst.num_points(); ++q) {
    const PointId p{q};
    const AreaChain chain = h.area_chain(p);
    if (chain.bottom() != brute_force_area(h, p)) {
      out.push_back(fmt::format("P{}: find_area disagrees with exhaustive scan", q));
    }
    for (std::size_t k = 0; k + 1 < chain.nodes.size(); ++k) {
      if (h.node(chain.nodes[k]).parent != chain.nodes[k + 1]) {
        out.push_back(fmt::format("P{}: area chain is not a tree path", q));
      }
    }
    for (int r = h.rho_min(); r <= h.rho_max(); ++r) {
      const auto entry = chain.at(r);
      bool in_ball = false;
      for (NodeId v : h.level(r)) in_ball = in_ball || within(h.point_distance(p, v), c2, r);
      if (in_ball != entry.has_value()) {
        out.push_back(fmt::format("P{}: level-{} areas do not match the ball union", q, r));
      }
      if (entry && !within(h.point_distance(p, *entry), c2, r)) {
        out.push_back(fmt::format("P{}: area {} farther than c2*5^r", q, node_label(h, *entry)));
      }
    }
    for (double cstar : {double(c2), double(cX), double(c4)}) {
      std::vector<NodeId> fast = h.find_balls(p, cstar);
      std::sort(fast.begin(), fast.end());
      if (fast != brute_force_balls(h, p, cstar)) {
        out.push_back(fmt::format("P{}: find_balls(c={}) disagrees with exhaustive scan", q, cstar));
      }
    }
  }
  for (std::uint32_t i = 0; i < h.size(); ++i) {
    const NodeId v{i};
    const TripletNode& n = h.node(v);
    if (h.facility_chain(n.facility).at(n.r) != v) {
      out.push_back(fmt::format("{}: centre outside its own area", node_label(h, v)));
    }
  }
}

void check_neighbourhoods(const NetHierarchy& h, std::vector<std::string>& out) {
  const Instance& inst = h.instance();
  std::vector<AreaChain> chains;
  for (std::uint32_t q = 0; q < inst.num_points(); ++q) chains.push_back(h.area_chain(PointId{q}));

  for (std::uint32_t i = 0; i < h.size(); ++i) {
    const NodeId v{i};
    const TripletNode& n = h.node(v);
    const int r = n.r;
    for (std::uint32_t q = 0; q < inst.num_points(); ++q) {
      const auto entry = chains[q].at(r);
      if (!entry) continue;
      const double d = h.point_distance(PointId{q}, v);
      const bool in_x = within(h.center_distance(*entry, v), cX, r);
      const bool in_y = within(h.center_distance(*entry, v), cY, r);
      if (in_x && !within(d, c3, r)) {
        out.push_back(fmt::format("{}: X holds P{} beyond c3*5^r", node_label(h, v), q));
      }
      if (in_y && !within(d, c4, r)) {
        out.push_back(fmt::format("{}: Y holds P{} beyond c4*5^r", node_label(h, v), q));
      }
      if (in_y && n.parent) {
        const auto up = chains[q].at(r + 1);
        if (!up || !within(h.center_distance(*up, *n.parent), cY, r + 1)) {
          out.push_back(fmt::format("{}: P{} in Y but not in the parent's Y", node_label(h, v), q));
        }
      }
    }
    // Neighbourhood lists against direct distance tests.
    std::vector<NodeId> xs;
    std::vector<NodeId> ys;
    for (NodeId u : h.level(r)) {
      if (within(h.center_distance(u, v), cX, r)) xs.push_back(u);
      if (within(h.center_distance(u, v), cY, r)) ys.push_back(u);
    }
    if (xs != n.x_areas) out.push_back(fmt::format("{}: x_areas mismatch", node_label(h, v)));
    if (ys != n.y_areas) out.push_back(fmt::format("{}: y_areas mismatch", node_label(h, v)));

    if (brute_force_designated(h, v) != n.designated_facility) {
      out.push_back(fmt::format("{}: designated facility mismatch", node_label(h, v)));
    }
    if (!within(inst.facility_distance(n.facility, n.designated_facility), c3, r)) {
      out.push_back(fmt::format("{}: designated facility beyond c3*5^r", node_label(h, v)));
    }
    if (n.designated_cost > inst.facility(n.facility).opening_cost) {
      out.push_back(fmt::format("{}: designated cost exceeds own cost", node_label(h, v)));
    }

    std::vector<NodeId> above;
    for (std::uint32_t k = 0; k < h.size(); ++k) {
      const NodeId u{k};
      if (h.key(v).level_color_before(h.key(u)) && h.facility_in_y(n.facility, u)) {
        above.push_back(u);
      }
    }
    if (above != n.neighbors_above) {
      out.push_back(fmt::format("{}: neighbors_above mismatch", node_label(h, v)));
    }
  }

  // Coloring.
  for (int r = h.rho_min(); r <= h.rho_max(); ++r) {
    const auto lvl = h.level(r);
    for (std::size_t a = 0; a < lvl.size(); ++a) {
      for (std::size_t b = a + 1; b < lvl.size(); ++b) {
        if (h.node(lvl[a]).color == h.node(lvl[b]).color &&
            within(h.center_distance(lvl[a], lvl[b]), c4, r)) {
          out.push_back(fmt::format("coloring: {} and {} share a color", node_label(h, lvl[a]),
                                    node_label(h, lvl[b])));
        }
      }
    }
  }

  // Ball cover: every declared point of B(j, 5^r) fits in a single X.
  for (const Facility& f : inst.facilities()) {
    for (int r = h.rho_min(); r <= h.rho_max(); ++r) {
      std::vector<std::uint32_t> ball;
      for (std::uint32_t q = 0; q < inst.num_points(); ++q) {
        if (within(inst.point_facility_distance(PointId{q}, f.id), 1.0, r)) ball.push_back(q);
      }
      const auto lvl = h.level(r);
      const bool covered = std::any_of(lvl.begin(), lvl.end(), [&](NodeId v) {
        return std::all_of(ball.begin(), ball.end(),
                           [&](std::uint32_t q) { return h.chain_in_x(chains[q], v); });
      });
      if (!covered) out.push_back(fmt::format("ball cover fails for F{} at r={}", f.id.value, r));
    }
  }
}

}  // namespace

std::vector<std::string> check_structure(const NetHierarchy& hierarchy) {
  std::vector<std::string> out;
  check_nets(hierarchy, out);
  check_tree(hierarchy, out);
  check_areas(hierarchy, out);
  check_neighbourhoods(hierarchy, out);
  const auto bounds = check_kappa_bounds(hierarchy);
  out.insert(out.end(), bounds.begin(), bounds.end());
  return out;
}

std::vector<std::string> check_kappa_bounds(const NetHierarchy& hierarchy) {
  std::vector<std::string> out;
  const auto kappa = hierarchy.instance().kappa();
  if (!kappa) return out;
  const NetHierarchy::Extents e = hierarchy.extents();
  const auto limit = [&](int exponent) { return std::pow(2.0, exponent * *kappa); };
  if (static_cast<double>(e.max_children) > limit(4)) {
    out.push_back(fmt::format("{} children exceed 2^(4 kappa)", e.max_children));
  }
  if (static_cast<double>(e.max_x_areas) > limit(3)) {
    out.push_back(fmt::format("{} X areas exceed 2^(3 kappa)", e.max_x_areas));
  }
  if (static_cast<double>(e.max_y_areas) > limit(5)) {
    out.push_back(fmt::format("{} Y areas exceed 2^(5 kappa)", e.max_y_areas));
  }
  if (static_cast<double>(e.max_colors) > limit(5) + 1) {
    out.push_back(fmt::format("{} colors exceed 2^(5 kappa) + 1", e.max_colors));
  }
  return out;
}

std::vector<std::string> check_logical(const DynamicFacilityLocation& engine) {
  std::vector<std::string> out;
  const NetHierarchy& h = engine.hierarchy();
  const Instance& inst = engine.instance();

  std::size_t open_count = 0;
  std::map<FacilityId, std::uint32_t> designations;
  for (std::uint32_t i = 0; i < h.size(); ++i) {
    const NodeId v{i};
    const NodeAnnotation& a = engine.annotation(v);
    const TripletNode& n = h.node(v);
    if (a.is_open) {
      ++open_count;
      ++designations[n.designated_facility];
    }
    if (a.is_open && !a.is_enabled) out.push_back(fmt::format("{}: open but not enabled", node_label(h, v)));
    if (a.is_abundant && !a.is_enabled) {
      out.push_back(fmt::format("{}: abundant but not enabled", node_label(h, v)));
    }
    if (a.is_abundant != abundant(n.r, static_cast<std::uint64_t>(a.n_x), n.designated_cost)) {
      out.push_back(fmt::format("{}: abundance bit disagrees with its counters", node_label(h, v)));
    }
    if (a.is_enabled && n.parent && !engine.annotation(*n.parent).is_enabled) {
      out.push_back(fmt::format("{}: enabled under a disabled parent", node_label(h, v)));
    }
  }

  for (const Facility& f : inst.facilities()) {
    const auto it = designations.find(f.id);
    const std::uint32_t expected = it == designations.end() ? 0 : it->second;
    if (engine.open_facilities().refcount(f.id) != expected) {
      out.push_back(fmt::format("F{}: registry refcount {} but {} open designations", f.id.value,
                                engine.open_facilities().refcount(f.id), expected));
    }
  }

  const auto& clients = engine.clients();
  if (clients.empty()) return out;
  if (open_count == 0) out.push_back("clients are live but no triplet is open");
  if (!engine.annotation(h.root()).is_enabled) out.push_back("clients are live but the root is disabled");
  if (!out.empty()) return out;

  const std::vector<NodeId> open = engine.open_triplets();
  const int base = h.rho_min();
  std::int64_t payments = 0;
  for (const auto& [id, p] : clients.entries()) {
    const AreaChain& chain = engine.client_chain(id);
    std::optional<NodeId> holder;
    for (NodeId v : open) {
      if (!h.chain_in_x(chain, v)) continue;
      if (holder) {
        out.push_back(fmt::format("client {}: inside X of two open triplets {} and {}", id.value,
                                  node_label(h, *holder), node_label(h, v)));
      }
      holder = v;
    }
    const Assignment asg = engine.assign_client(id);
    payments += payment_units(asg.r_area, base);
    // Only r_area >= r is provable; equality fails when the client's own
    // area triplet has a smaller color than the open one.
    if (holder && asg.r_area < h.node(*holder).r) {
      out.push_back(fmt::format("client {}: inside open X at r={} but r_area={}", id.value,
                                h.node(*holder).r, asg.r_area));
    }
    if (!within(inst.point_facility_distance(p, asg.open_facility), c2 + c3 + c4, asg.r_area)) {
      out.push_back(fmt::format("client {}: open facility F{} beyond (c2+c3+c4)*5^r_area", id.value,
                                asg.open_facility.value));
    }
  }
  if (payments != engine.cost_units()) {
    out.push_back(fmt::format("root cost {} units but client payments sum to {}", engine.cost_units(),
                              payments));
  }
  return out;
}

double realized_cost(const DynamicFacilityLocation& engine) {
  const Instance& inst = engine.instance();
  double total = 0.0;
  for (FacilityId f : engine.solution_query()) total += inst.facility(f).opening_cost;
  for (const auto& [id, p] : engine.clients().entries()) {
    total += inst.point_facility_distance(p, engine.assign_client(id).open_facility);
  }
  return total;
}

std::vector<std::string> check_payment_bound(const DynamicFacilityLocation& engine) {
  std::vector<std::string> out;
  const double realized = realized_cost(engine);
  const double bound = payment_factor * engine.cost_query();
  if (realized > bound * (1.0 + 1e-9)) {
    out.push_back(fmt::format("realized cost {} exceeds {} * cost estimate {}", realized,
                              payment_factor, engine.cost_query()));
  }
  return out;
}

}  // namespace netfloc
