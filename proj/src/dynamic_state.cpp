#include "netfloc/dynamic_state.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

#include "netfloc/scale.hpp"

namespace netfloc {

void DirtyHeap::resize(std::size_t nodes) {
  heap_ = {};
  queued_.assign(nodes, 0);
  cleaned_.assign(nodes, 0);
  cleaned_list_.clear();
}

void DirtyHeap::begin_pass() {
  for (NodeId v : cleaned_list_) cleaned_[v.value] = 0;
  cleaned_list_.clear();
}

void DirtyHeap::push(NodeId v, const TripletKey& key) {
  if (queued_[v.value]) return;
  queued_[v.value] = 1;
  heap_.emplace(key, v);
}

NodeId DirtyHeap::pop() {
  const NodeId v = heap_.top().second;
  heap_.pop();
  queued_[v.value] = 0;
  if (cleaned_[v.value]) {
    throw std::logic_error(fmt::format("triplet {} cleaned twice in one update", v.value));
  }
  cleaned_[v.value] = 1;
  cleaned_list_.push_back(v);
  return v;
}

void OpenFacilityRegistry::reset(std::size_t facilities) {
  open_.clear();
  position_.assign(facilities, open_.end());
  refs_.assign(facilities, 0);
}

void OpenFacilityRegistry::acquire(FacilityId f) {
  if (refs_[f.value]++ == 0) position_[f.value] = open_.insert(open_.end(), f);
}

void OpenFacilityRegistry::release(FacilityId f) {
  if (refs_[f.value] == 0) throw std::logic_error("releasing a facility that is not open");
  if (--refs_[f.value] == 0) {
    open_.erase(position_[f.value]);
    position_[f.value] = open_.end();
  }
}

StatusProposal check_status(const NodeAnnotation& a) {
  if (!a.is_open && a.is_abundant && a.open_below == 0) return {.open = true, .switched = true};
  if ((a.is_open && a.open_below >= 1) || !a.is_abundant) {
    return {.open = false, .switched = a.is_open};
  }
  return {.open = a.is_open, .switched = false};
}

DynamicFacilityLocation::DynamicFacilityLocation(const Instance& instance)
    : instance_(&instance),
      params_(derive_parameters(instance, 0)),
      hierarchy_(instance, params_) {
  rebuild_annotations();
}

std::int64_t DynamicFacilityLocation::units(int r) const {
  return payment_units(r, hierarchy_.rho_min());
}

void DynamicFacilityLocation::insert_client(ClientId id, PointId p) {
  instance_->check_point(p);
  clients_.insert(id, p);
  AreaChain chain = hierarchy_.area_chain(p);
  last_ = {};
  apply_client(chain, +1);
  chains_.emplace(id.value, std::move(chain));
  adjust_levels();
}

void DynamicFacilityLocation::delete_client(ClientId id) {
  clients_.erase(id);
  auto it = chains_.find(id.value);
  const AreaChain chain = std::move(it->second);
  chains_.erase(it);
  last_ = {};
  apply_client(chain, -1);
  adjust_levels();
}

void DynamicFacilityLocation::apply_client(const AreaChain& chain, int delta) {
  const std::vector<NodeId> affected = find_affected_triplets(chain);
  const std::vector<EnabledFlip> flips = update_status(affected, delta);
  update_cost(chain, flips, delta);
}

std::vector<NodeId> DynamicFacilityLocation::find_affected_triplets(PointId p) const {
  return find_affected_triplets(hierarchy_.area_chain(p));
}

std::vector<NodeId> DynamicFacilityLocation::find_affected_triplets(const AreaChain& chain) const {
  // X membership is symmetric in the two centres: the triplets whose X holds
  // the chain's level-r area are that area's own X list.
  std::vector<NodeId> out;
  for (NodeId u : chain.nodes) {
    const auto& xs = hierarchy_.node(u).x_areas;
    out.insert(out.end(), xs.begin(), xs.end());
  }
  return out;
}

std::vector<EnabledFlip> DynamicFacilityLocation::update_status(std::span<const NodeId> affected,
                                                                int delta) {
  heap_.begin_pass();
  last_.affected += affected.size();
  for (NodeId v : affected) {
    NodeAnnotation& a = annotations_[v.value];
    const TripletNode& n = hierarchy_.node(v);
    a.n_x += delta;
    const bool now_abundant = abundant(n.r, static_cast<std::uint64_t>(a.n_x), n.designated_cost);
    if (now_abundant != a.is_abundant) {
      a.is_abundant = now_abundant;
      heap_.push(v, hierarchy_.key(v));
    }
  }

  while (!heap_.empty()) {
    const NodeId v = heap_.pop();
    ++last_.heap_pulls;
    NodeAnnotation& a = annotations_[v.value];
    const StatusProposal proposal = check_status(a);
    if (!proposal.switched) continue;
    ++last_.status_flips;
    a.is_open = proposal.open;
    const TripletNode& n = hierarchy_.node(v);
    if (a.is_open) {
      registry_.acquire(n.designated_facility);
      open_set_.emplace(hierarchy_.key(v), v);
    } else {
      registry_.release(n.designated_facility);
      open_set_.erase({hierarchy_.key(v), v});
    }
    const int step = a.is_open ? 1 : -1;
    for (NodeId u : n.neighbors_above) {
      heap_.push(u, hierarchy_.key(u));
      annotations_[u.value].open_below += step;
    }
  }

  std::vector<EnabledFlip> flips;
  for (NodeId v : heap_.cleaned()) {
    const NodeAnnotation& a = annotations_[v.value];
    const bool enabled = a.is_open || a.open_below >= 1;
    if (enabled != a.is_enabled) flips.push_back({v, enabled});
  }
  last_.enabled_flips += flips.size();
  return flips;
}

void DynamicFacilityLocation::update_cost(const AreaChain& chain,
                                          std::span<const EnabledFlip> flips, int delta) {
  for (const EnabledFlip& flip : flips) {
    NodeAnnotation& a = annotations_[flip.node.value];
    if (const auto parent = hierarchy_.node(flip.node).parent) {
      const std::int64_t change = flip.enabled ? a.n_area : -a.n_area;
      annotations_[parent->value].n_enabled_below += change;
    }
    a.is_enabled = flip.enabled;
  }
  for (NodeId v : chain.nodes) {
    NodeAnnotation& a = annotations_[v.value];
    a.n_area += delta;
    const auto parent = hierarchy_.node(v).parent;
    if (parent && a.is_enabled) annotations_[parent->value].n_enabled_below += delta;
  }

  // Costs must be recomputed bottom-up along the client's own chain as well as
  // above every node whose enabled bit changed.
  std::vector<NodeId> queue;
  const auto enqueue_path = [&](NodeId start) {
    for (std::optional<NodeId> v = start; v && !queued_for_cost_[v->value];
         v = hierarchy_.node(*v).parent) {
      queued_for_cost_[v->value] = 1;
      queue.push_back(*v);
    }
  };
  enqueue_path(chain.bottom());
  for (const EnabledFlip& flip : flips) enqueue_path(flip.node);
  std::sort(queue.begin(), queue.end(), [&](NodeId a, NodeId b) {
    const int ra = hierarchy_.node(a).r;
    const int rb = hierarchy_.node(b).r;
    return ra < rb || (ra == rb && a < b);
  });

  for (NodeId v : queue) {
    queued_for_cost_[v.value] = 0;
    NodeAnnotation& a = annotations_[v.value];
    const TripletNode& n = hierarchy_.node(v);
    std::int64_t cost = a.y;
    if (a.is_enabled) cost += (a.n_area - a.n_enabled_below) * units(n.r);
    if (n.parent) annotations_[n.parent->value].y += cost - a.cost;
    a.cost = cost;
  }
}

void DynamicFacilityLocation::adjust_levels() {
  const std::uint64_t n = client_scale(clients_.size());
  if (n == params_.n) return;
  const Params next = derive_parameters(*instance_, n);
  const bool shift = next.rho_min != hierarchy_.rho_min();
  params_ = next;
  if (!shift) return;
  while (hierarchy_.rho_min() > next.rho_min) hierarchy_.push_bottom_level();
  while (hierarchy_.rho_min() < next.rho_min) hierarchy_.pop_bottom_level();
  ++level_shifts_;
  const UpdateStats update = last_;
  rebuild_annotations();
  last_ = update;
  last_.level_shift = true;
}

void DynamicFacilityLocation::rebuild_annotations() {
  annotations_.assign(hierarchy_.size(), NodeAnnotation{});
  heap_.resize(hierarchy_.size());
  queued_for_cost_.assign(hierarchy_.size(), 0);
  registry_.reset(instance_->num_facilities());
  open_set_.clear();
  for (const auto& [id, p] : clients_.entries()) {
    AreaChain chain = hierarchy_.area_chain(p);
    apply_client(chain, +1);
    chains_[id.value] = std::move(chain);
  }
}

double DynamicFacilityLocation::cost_query() const {
  return units_to_cost(cost_units(), hierarchy_.rho_min());
}

const AreaChain& DynamicFacilityLocation::client_chain(ClientId id) const {
  auto it = chains_.find(id.value);
  if (it == chains_.end()) throw ClientError(fmt::format("client {} is not live", id.value));
  return it->second;
}

std::vector<NodeId> DynamicFacilityLocation::open_triplets() const {
  std::vector<NodeId> out;
  out.reserve(open_set_.size());
  for (const auto& entry : open_set_) out.push_back(entry.second);
  return out;
}

Assignment DynamicFacilityLocation::assign_client(ClientId id) const {
  const AreaChain& chain = client_chain(id);
  Assignment result;
  const auto area = std::find_if(chain.nodes.begin(), chain.nodes.end(),
                                 [&](NodeId v) { return annotations_[v.value].is_enabled; });
  if (area == chain.nodes.end()) throw std::logic_error("client lies in no enabled area");
  result.area_triplet = *area;
  result.r_area = hierarchy_.node(*area).r;
  const TripletKey area_key = hierarchy_.key(*area);
  for (const auto& [key, u] : open_set_) {
    if (area_key.level_color_before(key)) break;
    if (hierarchy_.facility_in_y(hierarchy_.node(u).facility, *area)) {
      result.aux_triplet = u;
      result.open_facility = hierarchy_.node(u).designated_facility;
      return result;
    }
  }
  throw std::logic_error("enabled area has no open triplet in its Y neighbourhood");
}

StateSnapshot DynamicFacilityLocation::snapshot() const {
  StateSnapshot s;
  s.rho_min = hierarchy_.rho_min();
  s.rho_max = hierarchy_.rho_max();
  s.nodes.reserve(hierarchy_.size());
  for (std::uint32_t i = 0; i < hierarchy_.size(); ++i) s.nodes.push_back(hierarchy_.key(NodeId{i}));
  s.annotations = annotations_;
  s.open_facilities = registry_.facilities();
  std::sort(s.open_facilities.begin(), s.open_facilities.end());
  for (const auto& entry : clients_.entries()) s.assignments.emplace(entry.first, assign_client(entry.first));
  return s;
}

}  // namespace netfloc
