#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "netfloc/dynamic_state.hpp"
#include "netfloc/invariants.hpp"
#include "netfloc/reference_oracle.hpp"
#include "netfloc/scale.hpp"

using namespace netfloc;

namespace {

NodeId node_at(const NetHierarchy& h, std::uint32_t facility, int r) {
  for (NodeId v : h.level(r)) {
    if (h.node(v).facility.value == facility) return v;
  }
  FAIL("no such node");
  return {};
}

double cost_of(const DynamicFacilityLocation& e, NodeId v) {
  return units_to_cost(e.annotation(v).cost, e.hierarchy().rho_min());
}

void require_matches_oracle(const DynamicFacilityLocation& e) {
  const auto diff = compare_states(e.snapshot(), recompute_state(e.hierarchy(), e.clients().entries()));
  REQUIRE_MESSAGE(diff.empty(), (diff.empty() ? "" : diff.front()));
}

}  // namespace

TEST_CASE("check_status decision rule") {
  NodeAnnotation a;
  a.is_abundant = true;
  StatusProposal p = check_status(a);
  CHECK(p.open);
  CHECK(p.switched);

  a.is_open = true;
  a.open_below = 2;
  p = check_status(a);
  CHECK_FALSE(p.open);
  CHECK(p.switched);

  a = NodeAnnotation{};
  p = check_status(a);
  CHECK_FALSE(p.open);
  CHECK_FALSE(p.switched);

  a.is_open = true;
  a.is_abundant = false;
  p = check_status(a);
  CHECK_FALSE(p.open);
  CHECK(p.switched);

  a.is_abundant = true;
  a.open_below = 0;
  p = check_status(a);
  CHECK(p.open);
  CHECK_FALSE(p.switched);

  a.is_open = false;
  a.open_below = 1;
  p = check_status(a);
  CHECK_FALSE(p.open);
  CHECK_FALSE(p.switched);
}

TEST_CASE("dirty heap pulls in key order and refuses a second clean") {
  DirtyHeap heap;
  heap.resize(4);
  heap.begin_pass();
  heap.push(NodeId{2}, TripletKey{1, 1, 0});
  heap.push(NodeId{1}, TripletKey{1, 0, 5});
  heap.push(NodeId{3}, TripletKey{0, 3, 9});
  heap.push(NodeId{1}, TripletKey{1, 0, 5});
  CHECK(heap.pop() == NodeId{3});
  CHECK(heap.pop() == NodeId{1});
  CHECK(heap.pop() == NodeId{2});
  CHECK(heap.empty());
  CHECK(heap.cleaned() == std::vector<NodeId>{NodeId{3}, NodeId{1}, NodeId{2}});

  heap.push(NodeId{1}, TripletKey{1, 0, 5});
  CHECK_THROWS_AS(heap.pop(), std::logic_error);

  heap.begin_pass();
  heap.push(NodeId{1}, TripletKey{1, 0, 5});
  CHECK(heap.pop() == NodeId{1});
}

TEST_CASE("open facility registry counts designations") {
  OpenFacilityRegistry reg;
  reg.reset(3);
  reg.acquire(FacilityId{2});
  reg.acquire(FacilityId{0});
  reg.acquire(FacilityId{2});
  CHECK(reg.size() == 2);
  CHECK(reg.refcount(FacilityId{2}) == 2);
  reg.release(FacilityId{2});
  CHECK(reg.is_open(FacilityId{2}));
  reg.release(FacilityId{2});
  CHECK_FALSE(reg.is_open(FacilityId{2}));
  CHECK(reg.facilities() == std::vector<FacilityId>{FacilityId{0}});
  CHECK_THROWS_AS(reg.release(FacilityId{1}), std::logic_error);
}

TEST_CASE("LINE5 first insertion, stage by stage") {
  const Instance inst = fixtures::line5();
  DynamicFacilityLocation e(inst);
  const NetHierarchy& h = e.hierarchy();
  const NodeId v1 = node_at(h, 0, 1);
  const NodeId v2 = node_at(h, 0, 2);
  const NodeId v3 = node_at(h, 0, 3);

  std::vector<NodeId> s = e.find_affected_triplets(PointId{3});
  std::sort(s.begin(), s.end());
  CHECK(s == std::vector<NodeId>{v3, v2, v1});

  const std::vector<EnabledFlip> flips = e.update_status(s, +1);
  std::vector<NodeId> u;
  for (const EnabledFlip& f : flips) {
    CHECK(f.enabled);
    u.push_back(f.node);
  }
  std::sort(u.begin(), u.end());
  CHECK(u == std::vector<NodeId>{v3, v2});
  CHECK(e.annotation(v2).is_open);
  CHECK(e.annotation(v3).open_below == 1);
  CHECK_FALSE(e.annotation(v3).is_open);

  e.update_cost(h.area_chain(PointId{3}), flips, +1);
  CHECK(cost_of(e, v1) == 0.0);
  CHECK(cost_of(e, v2) == 25.0);
  CHECK(cost_of(e, v3) == 25.0);
  CHECK(e.cost_query() == 25.0);
}

TEST_CASE("LINE5 worked example") {
  const Instance inst = fixtures::line5();
  DynamicFacilityLocation e(inst);
  const NetHierarchy& h = e.hierarchy();

  CHECK(e.cost_query() == 0.0);
  CHECK(e.solution_query().empty());

  e.insert_client(ClientId{1}, PointId{3});
  CHECK(e.cost_query() == 25.0);
  CHECK(e.solution_query() == std::vector<FacilityId>{FacilityId{0}});
  CHECK(e.open_triplets() == std::vector<NodeId>{node_at(h, 0, 2)});
  Assignment a = e.assign_client(ClientId{1});
  CHECK(a.r_area == 2);
  CHECK(a.aux_triplet == node_at(h, 0, 2));
  CHECK(a.open_facility == FacilityId{0});
  require_matches_oracle(e);

  e.insert_client(ClientId{2}, PointId{4});
  e.insert_client(ClientId{3}, PointId{3});
  CHECK(e.cost_query() == 15.0);
  CHECK(e.open_triplets() == std::vector<NodeId>{node_at(h, 0, 1)});
  for (int r = 1; r <= 3; ++r) CHECK(cost_of(e, node_at(h, 0, r)) == 15.0);
  for (std::uint64_t id = 1; id <= 3; ++id) {
    a = e.assign_client(ClientId{id});
    CHECK(a.r_area == 1);
    CHECK(a.open_facility == FacilityId{0});
  }
  CHECK(realized_cost(e) == 311.0);
  require_matches_oracle(e);

  // Back to one client at P3.
  e.delete_client(ClientId{3});
  e.delete_client(ClientId{2});
  CHECK(e.cost_query() == 25.0);
  require_matches_oracle(e);

  e.delete_client(ClientId{1});
  CHECK(e.cost_query() == 0.0);
  CHECK(e.open_triplets().empty());
  CHECK(e.solution_query().empty());
  CHECK(e.snapshot().annotations == DynamicFacilityLocation(inst).snapshot().annotations);
}

TEST_CASE("LINE5 with a cheaper F1 opens F1") {
  const Instance inst = fixtures::line5(9.0);
  DynamicFacilityLocation e(inst);
  e.insert_client(ClientId{1}, PointId{3});
  CHECK(e.solution_query() == std::vector<FacilityId>{FacilityId{1}});
}

TEST_CASE("rejected operations leave the state untouched") {
  const Instance inst = fixtures::line5();
  DynamicFacilityLocation e(inst);
  e.insert_client(ClientId{1}, PointId{3});
  e.insert_client(ClientId{2}, PointId{1});
  const std::uint64_t before = snapshot_hash(e.snapshot());

  CHECK_THROWS_AS(e.delete_client(ClientId{9}), ClientError);
  CHECK(snapshot_hash(e.snapshot()) == before);
  CHECK_THROWS_AS(e.insert_client(ClientId{1}, PointId{0}), ClientError);
  CHECK(snapshot_hash(e.snapshot()) == before);
  CHECK_THROWS_AS(e.insert_client(ClientId{5}, PointId{17}), InstanceError);
  CHECK(snapshot_hash(e.snapshot()) == before);
  CHECK_THROWS_AS(e.assign_client(ClientId{9}), ClientError);
}

TEST_CASE("random updates agree with the oracle and are reversible") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    CAPTURE(seed);
    const Instance inst = fixtures::random_instance(seed, 40, 3 + seed * 4);
    std::mt19937_64 rng(seed);
    const auto trace = random_trace(rng, inst, 120);
    DynamicFacilityLocation e(inst);
    ClientInterner ids;
    std::uniform_int_distribution<std::uint32_t> point(0, static_cast<std::uint32_t>(inst.num_points() - 1));
    for (const TraceEvent& ev : trace) {
      if (ev.kind == TraceEvent::Kind::Insert) e.insert_client(ids.intern(ev.client), ev.point);
      if (ev.kind == TraceEvent::Kind::Delete) e.delete_client(ids.intern(ev.client));
      require_matches_oracle(e);
      REQUIRE(check_logical(e).empty());
      REQUIRE(check_payment_bound(e).empty());

      const std::uint64_t before = snapshot_hash(e.snapshot());
      const std::size_t shifts = e.level_shifts();
      e.insert_client(ClientId{1u << 30}, PointId{point(rng)});
      e.delete_client(ClientId{1u << 30});
      // A probe that crosses a level threshold rebuilds twice; the state must still match.
      CHECK(snapshot_hash(e.snapshot()) == before);
      CHECK(e.level_shifts() >= shifts);
    }
  }
}

TEST_CASE("LINE5 level shift at 25 clients and back") {
  const Instance inst = fixtures::line5();
  DynamicFacilityLocation e(inst);
  for (std::uint64_t id = 0; id < 24; ++id) e.insert_client(ClientId{id}, PointId{static_cast<std::uint32_t>(id % 5)});
  CHECK(e.hierarchy().rho_min() == 1);
  const StateSnapshot at24 = e.snapshot();

  e.insert_client(ClientId{24}, PointId{2});
  CHECK(e.last_update().level_shift);
  CHECK(e.level_shifts() == 1);
  CHECK(e.hierarchy().rho_min() == 0);
  CHECK(e.params().delta == 4);
  std::vector<FacilityId> j0 = e.hierarchy().separated_set(0);
  CHECK(j0 == std::vector<FacilityId>{FacilityId{0}, FacilityId{1}});
  require_matches_oracle(e);
  const NetHierarchy fresh(inst, e.params());
  CHECK(compare_states(e.snapshot(), recompute_state(fresh, e.clients().entries())).empty());
  CHECK(check_logical(e).empty());

  e.delete_client(ClientId{24});
  CHECK(e.hierarchy().rho_min() == 1);
  CHECK(e.level_shifts() == 2);
  CHECK(compare_states(e.snapshot(), at24).empty());
}
