#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "netfloc/hierarchy.hpp"
#include "netfloc/metric.hpp"

namespace netfloc {

/// Dynamic per-node fields of the annotated dependency tree.
///
/// Costs are integer multiples of 5^rho_min (a client at logradius r pays
/// 5^(r - rho_min) units), so every cost comparison is exact.
struct NodeAnnotation {
  bool is_open = false;
  bool is_enabled = false;
  bool is_abundant = false;
  std::int64_t n_area = 0;           // live clients in A(v)
  std::int64_t n_x = 0;              // live clients in X(v)
  std::int64_t open_below = 0;       // lex-smaller open triplets with facility in Y(v)
  std::int64_t n_enabled_below = 0;  // clients of A(v) inside enabled child areas
  std::int64_t cost = 0;             // total payment of clients in A(v), in units
  std::int64_t y = 0;                // sum of children's cost, in units

  friend bool operator==(const NodeAnnotation&, const NodeAnnotation&) = default;
};

struct Assignment {
  int r_area = 0;
  NodeId area_triplet;
  NodeId aux_triplet;
  FacilityId open_facility;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Full observable state: every annotation, the open facility set and every
/// client's assignment.
struct StateSnapshot {
  int rho_min = 0;
  int rho_max = 0;
  std::vector<TripletKey> nodes;  // hierarchy signature, indexed by node id
  std::vector<NodeAnnotation> annotations;
  std::vector<FacilityId> open_facilities;  // sorted
  std::map<ClientId, Assignment> assignments;
};

/// Thrown when two snapshots were taken over different hierarchies.
class StructuralMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Field-by-field difference; empty iff the snapshots are identical.
std::vector<std::string> compare_states(const StateSnapshot& a, const StateSnapshot& b);

/// FNV-1a over every field, for cheap bit-exact identity checks.
std::uint64_t snapshot_hash(const StateSnapshot& s);

}  // namespace netfloc
