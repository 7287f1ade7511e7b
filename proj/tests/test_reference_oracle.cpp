#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "netfloc/dynamic_state.hpp"
#include "netfloc/reference_oracle.hpp"

using namespace netfloc;

TEST_CASE("empty client set") {
  const Instance inst = fixtures::line5();
  const NetHierarchy h(inst, derive_parameters(inst, 0));
  const StateSnapshot s = recompute_state(h, {});
  for (const NodeAnnotation& a : s.annotations) CHECK(a == NodeAnnotation{});
  CHECK(s.open_facilities.empty());
  CHECK(s.assignments.empty());

  const OptResult opt = brute_force_opt(inst, {});
  CHECK(opt.cost == 0.0);
  CHECK(opt.open_set.empty());
}

TEST_CASE("LINE5 from scratch") {
  const Instance inst = fixtures::line5();
  const NetHierarchy h(inst, derive_parameters(inst, 1));
  const ClientMap one{{ClientId{1}, PointId{3}}};
  const StateSnapshot s = recompute_state(h, one);

  std::vector<TripletKey> open;
  std::vector<TripletKey> enabled;
  for (std::size_t i = 0; i < s.annotations.size(); ++i) {
    if (s.annotations[i].is_open) open.push_back(s.nodes[i]);
    if (s.annotations[i].is_enabled) enabled.push_back(s.nodes[i]);
  }
  std::sort(enabled.begin(), enabled.end());
  CHECK(open == std::vector<TripletKey>{{2, 0, 0}});
  CHECK(enabled == std::vector<TripletKey>{{2, 0, 0}, {3, 0, 0}});
  CHECK(s.annotations[h.root().value].cost == 5);  // 25 in units of 5^1
  CHECK(s.open_facilities == std::vector<FacilityId>{FacilityId{0}});

  const OptResult opt1 = brute_force_opt(inst, one);
  CHECK(opt1.cost == 10.0);
  CHECK(opt1.open_set == std::vector<FacilityId>{FacilityId{1}});
  CHECK(opt1.assignment.at(ClientId{1}) == FacilityId{1});

  const ClientMap three{{ClientId{1}, PointId{3}}, {ClientId{2}, PointId{4}}, {ClientId{3}, PointId{3}}};
  const OptResult opt3 = brute_force_opt(inst, three);
  CHECK(opt3.cost == 11.0);
  CHECK(opt3.open_set == std::vector<FacilityId>{FacilityId{1}});
  CHECK(solution_cost(inst, three, {FacilityId{0}}) == 311.0);
}

TEST_CASE("exact optimum refuses large instances") {
  const Instance inst = fixtures::random_instance(3, 30, 21);
  CHECK_THROWS_AS(brute_force_opt(inst, {{ClientId{0}, PointId{0}}}), std::length_error);
}

TEST_CASE("exact optimum matches a direct enumeration") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance inst = fixtures::random_instance(seed, 20, 6);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> point(0, 19);
    ClientMap clients;
    for (std::uint64_t i = 0; i < 8; ++i) clients.emplace(ClientId{i}, PointId{point(rng)});
    const OptResult opt = brute_force_opt(inst, clients);
    CHECK(solution_cost(inst, clients, opt.open_set) == doctest::Approx(opt.cost));
    for (std::uint32_t mask = 1; mask < 64; ++mask) {
      std::vector<FacilityId> open;
      for (std::uint32_t j = 0; j < 6; ++j) {
        if (mask & (1u << j)) open.push_back(FacilityId{j});
      }
      CHECK(solution_cost(inst, clients, open) >= opt.cost - 1e-9);
    }
  }
}

TEST_CASE("recomputation depends only on the live set") {
  const Instance inst = fixtures::random_instance(9, 40, 12);
  const NetHierarchy h(inst, derive_parameters(inst, 5));
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::uint32_t> point(0, 39);
  std::vector<std::pair<ClientId, PointId>> clients;
  for (std::uint64_t i = 0; i < 20; ++i) clients.emplace_back(ClientId{i}, PointId{point(rng)});

  // The engine sees two different insertion orders; both must match the oracle.
  const StateSnapshot expected = recompute_state(h, ClientMap(clients.begin(), clients.end()));
  for (int round = 0; round < 3; ++round) {
    std::shuffle(clients.begin(), clients.end(), rng);
    DynamicFacilityLocation e(inst);
    for (const auto& [id, p] : clients) e.insert_client(id, p);
    CHECK(compare_states(e.snapshot(), expected).empty());
  }
}

TEST_CASE("compare_states names the differing field") {
  const Instance inst = fixtures::line5();
  DynamicFacilityLocation e(inst);
  e.insert_client(ClientId{1}, PointId{3});
  const StateSnapshot a = e.snapshot();
  CHECK(compare_states(a, a).empty());

  StateSnapshot b = a;
  b.annotations[1].is_abundant = !b.annotations[1].is_abundant;
  const auto diff = compare_states(a, b);
  REQUIRE(diff.size() == 1);
  CHECK(diff.front().find("node 1") != std::string::npos);
  CHECK(diff.front().find("is_abundant") != std::string::npos);

  StateSnapshot c = a;
  c.nodes.pop_back();
  CHECK_THROWS_AS(compare_states(a, c), StructuralMismatch);
}

TEST_CASE("cost estimate can exceed five times the optimum") {
  // One facility of cost 2 with every client on top of it. OPT is 2, but each
  // client pays at least 5^rho_min, and rho_min only follows |C| in powers of 5.
  const Instance inst = fixtures::on_line({0}, {{0, 2.0}});
  DynamicFacilityLocation e(inst);
  for (std::uint64_t id = 0; id < 4; ++id) e.insert_client(ClientId{id}, PointId{0});
  CHECK(e.hierarchy().rho_min() == 1);
  CHECK(e.cost_query() == 20.0);
  CHECK(brute_force_opt(inst, e.clients().entries()).cost == 2.0);
  CHECK(e.cost_query() > 5 * 2.0);
  CHECK(e.cost_query() <= 25 * 2.0);
}
