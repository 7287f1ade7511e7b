#pragma once

#include <cstdint>
#include <list>
#include <queue>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "netfloc/hierarchy.hpp"
#include "netfloc/metric.hpp"
#include "netfloc/snapshot.hpp"

namespace netfloc {

/// Min-heap of dirty triplets keyed by (r, color, facility). A node is queued
/// at most once at a time; popping a node that was already cleaned during the
/// current pass is an invariant violation.
class DirtyHeap {
 public:
  void resize(std::size_t nodes);
  /// Starts a new update pass.
  void begin_pass();
  void push(NodeId v, const TripletKey& key);
  NodeId pop();
  bool empty() const { return heap_.empty(); }
  /// Nodes cleaned in the current pass, in pull order.
  const std::vector<NodeId>& cleaned() const { return cleaned_list_; }

 private:
  using Entry = std::pair<TripletKey, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
  std::vector<char> queued_;
  std::vector<char> cleaned_;
  std::vector<NodeId> cleaned_list_;
};

/// Open facilities in a linked list with O(1) add/remove. A facility can be
/// designated by several open triplets, so membership is reference counted.
class OpenFacilityRegistry {
 public:
  void reset(std::size_t facilities);
  void acquire(FacilityId f);
  void release(FacilityId f);
  bool is_open(FacilityId f) const { return refs_[f.value] > 0; }
  std::uint32_t refcount(FacilityId f) const { return refs_[f.value]; }
  std::size_t size() const { return open_.size(); }
  std::vector<FacilityId> facilities() const { return {open_.begin(), open_.end()}; }

 private:
  std::list<FacilityId> open_;
  std::vector<std::list<FacilityId>::iterator> position_;
  std::vector<std::uint32_t> refs_;
};

struct StatusProposal {
  bool open = false;
  bool switched = false;
};

/// Open/closed decision for a dirty triplet given its current abundance bit and
/// open_below counter.
StatusProposal check_status(const NodeAnnotation& a);

/// A node whose enabled bit changes in the current update.
struct EnabledFlip {
  NodeId node;
  bool enabled = false;
};

struct UpdateStats {
  std::size_t affected = 0;    // |S|
  std::size_t heap_pulls = 0;  // cleaned triplets
  std::size_t status_flips = 0;
  std::size_t enabled_flips = 0;  // |U|
  bool level_shift = false;
};

/// Annotated dependency tree maintained under client insertions and deletions.
///
/// Single mutating owner; const queries may run concurrently with each other.
class DynamicFacilityLocation {
 public:
  explicit DynamicFacilityLocation(const Instance& instance);

  DynamicFacilityLocation(const DynamicFacilityLocation&) = delete;
  DynamicFacilityLocation& operator=(const DynamicFacilityLocation&) = delete;

  void insert_client(ClientId id, PointId p);
  void delete_client(ClientId id);

  /// Cost estimate: total client payment, read off the root.
  double cost_query() const;
  std::int64_t cost_units() const { return annotations_[hierarchy_.root().value].cost; }
  /// Designated facilities of open triplets, in list order.
  std::vector<FacilityId> solution_query() const { return registry_.facilities(); }
  Assignment assign_client(ClientId id) const;

  // Update pipeline steps. insert_client/delete_client run them in order;
  // they are public so the individual stages can be exercised directly.

  /// Triplets whose X contains p.
  std::vector<NodeId> find_affected_triplets(PointId p) const;
  std::vector<NodeId> find_affected_triplets(const AreaChain& chain) const;
  std::vector<EnabledFlip> update_status(std::span<const NodeId> affected, int delta);
  void update_cost(const AreaChain& chain, std::span<const EnabledFlip> flips, int delta);
  /// Recomputes n from the live count and shifts the bottom level if rho_min moved.
  void adjust_levels();

  const Instance& instance() const { return *instance_; }
  const NetHierarchy& hierarchy() const { return hierarchy_; }
  const Params& params() const { return params_; }
  const ClientRegistry& clients() const { return clients_; }
  const NodeAnnotation& annotation(NodeId v) const { return annotations_[v.value]; }
  const AreaChain& client_chain(ClientId id) const;
  const OpenFacilityRegistry& open_facilities() const { return registry_; }
  /// Open triplets in (r, color, facility) order.
  std::vector<NodeId> open_triplets() const;

  const UpdateStats& last_update() const { return last_; }
  std::size_t level_shifts() const { return level_shifts_; }

  StateSnapshot snapshot() const;

  /// Test hook: direct write access to an annotation, for fault injection.
  NodeAnnotation& annotation_for_testing(NodeId v) { return annotations_[v.value]; }

 private:
  void apply_client(const AreaChain& chain, int delta);
  void rebuild_annotations();
  std::int64_t units(int r) const;

  const Instance* instance_;
  Params params_;
  NetHierarchy hierarchy_;
  std::vector<NodeAnnotation> annotations_;
  ClientRegistry clients_;
  std::unordered_map<std::uint64_t, AreaChain> chains_;
  OpenFacilityRegistry registry_;
  std::set<std::pair<TripletKey, NodeId>> open_set_;
  DirtyHeap heap_;
  std::vector<char> queued_for_cost_;
  UpdateStats last_;
  std::size_t level_shifts_ = 0;
};

}  // namespace netfloc
