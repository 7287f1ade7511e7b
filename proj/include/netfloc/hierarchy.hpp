#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netfloc/metric.hpp"

namespace netfloc {

struct NodeTag {};
using NodeId = StrongId<NodeTag>;

/// Lexicographic processing order of triplets: logradius, then color, then
/// facility id.
struct TripletKey {
  int r = 0;
  std::uint32_t color = 0;
  std::uint32_t facility = 0;
  friend constexpr auto operator<=>(const TripletKey&, const TripletKey&) = default;

  /// (r, color) strictly before other's (r, color); facility ignored.
  constexpr bool level_color_before(const TripletKey& o) const {
    return r < o.r || (r == o.r && color < o.color);
  }
};

/// One (facility, logradius, color) node of the dependency tree.
struct TripletNode {
  FacilityId facility;
  int r = 0;
  std::uint32_t color = 0;
  std::optional<NodeId> parent;
  std::vector<NodeId> children;
  std::vector<NodeId> x_areas;  // same-level nodes within cX * 5^r, sorted
  std::vector<NodeId> y_areas;  // same-level nodes within cY * 5^r, sorted
  FacilityId designated_facility;
  double designated_cost = 0.0;
  std::vector<NodeId> neighbors_above;  // sorted by node id
};

/// Areas containing a point, one per logradius from the point's smallest area
/// up to the root.
struct AreaChain {
  int bottom_r = 0;
  std::vector<NodeId> nodes;  // nodes[k] has logradius bottom_r + k

  std::optional<NodeId> at(int r) const {
    if (r < bottom_r || r >= bottom_r + static_cast<int>(nodes.size())) return std::nullopt;
    return nodes[static_cast<std::size_t>(r - bottom_r)];
  }
  NodeId bottom() const { return nodes.front(); }
};

/// Static preprocessing: separated facility sets per logradius, the dependency
/// tree, laminar areas, X/Y neighbourhoods, coloring, designated facilities and
/// above-neighbour lists.
///
/// Node ids are assigned level by level from the root down, in ascending
/// facility id within a level. Separated sets are nested (each level is seeded
/// with the level above), so building with a smaller rho_min only appends
/// nodes; push/pop of the bottom level therefore keep every other node id.
///
/// The instance must outlive the hierarchy.
class NetHierarchy {
 public:
  NetHierarchy(const Instance& instance, int rho_min, int rho_max);
  NetHierarchy(const Instance& instance, const Params& params)
      : NetHierarchy(instance, params.rho_min, params.rho_max) {}

  const Instance& instance() const { return *instance_; }
  int rho_min() const { return rho_min_; }
  int rho_max() const { return rho_max_; }
  int num_levels() const { return rho_max_ - rho_min_ + 1; }

  std::size_t size() const { return nodes_.size(); }
  const TripletNode& node(NodeId id) const { return nodes_[id.value]; }
  NodeId root() const { return NodeId{0}; }
  TripletKey key(NodeId id) const;

  /// Nodes of logradius r in ascending facility id.
  std::span<const NodeId> level(int r) const;
  /// J_r as facility ids.
  std::vector<FacilityId> separated_set(int r) const;
  std::uint32_t num_colors(int r) const;

  double center_distance(NodeId a, NodeId b) const;
  double point_distance(PointId p, NodeId v) const;

  /// All nodes <j, r> with dist(p, j) <= cstar * 5^r, found by a top-down sweep
  /// that only expands children of surviving nodes. Requires cstar >= 1.25 c1.
  std::vector<NodeId> find_balls(PointId p, double cstar) const;
  /// Smallest-logradius area containing p.
  NodeId find_area(PointId p) const;
  AreaChain area_chain(PointId p) const;
  const AreaChain& facility_chain(FacilityId f) const { return facility_chains_[f.value]; }

  /// p's chain entry at v's logradius lies in X(v).
  bool chain_in_x(const AreaChain& chain, NodeId v) const;
  /// Facility f lies in Y(v).
  bool facility_in_y(FacilityId f, NodeId v) const;

  /// Adds logradius rho_min - 1 below the current bottom level.
  void push_bottom_level();
  /// Removes the bottom level. Requires at least two levels.
  void pop_bottom_level();

  /// One line per node, indented by depth.
  std::string dump() const;

  /// Largest observed sizes, for checking against 2^{O(kappa)} bounds.
  struct Extents {
    std::size_t max_children = 0;
    std::size_t max_x_areas = 0;
    std::size_t max_y_areas = 0;
    std::uint32_t max_colors = 0;
  };
  Extents extents() const;

 private:
  std::size_t level_index(int r) const { return static_cast<std::size_t>(rho_max_ - r); }
  void build_top_level();
  void extend_downward();
  void finalize();
  void color_level(int r);
  void compute_neighbourhoods();
  void compute_designations();
  void compute_neighbors_above();

  const Instance* instance_;
  int rho_min_;
  int rho_max_;
  std::vector<TripletNode> nodes_;
  std::vector<std::vector<NodeId>> levels_;  // levels_[rho_max - r]
  std::vector<AreaChain> facility_chains_;
};

}  // namespace netfloc
