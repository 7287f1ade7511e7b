#include "netfloc/snapshot.hpp"

#include <fmt/format.h>

namespace netfloc {

namespace {

template <typename T>
void diff_field(std::vector<std::string>& out, std::size_t node, const char* field, const T& a,
                const T& b) {
  if (a != b) out.push_back(fmt::format("node {}: {} {} != {}", node, field, a, b));
}

std::string facility_list(const std::vector<FacilityId>& fs) {
  std::string out;
  for (FacilityId f : fs) out += fmt::format("{}F{}", out.empty() ? "" : " ", f.value);
  return out;
}

class Fnv1a {
 public:
  template <typename T>
  void add(T value) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(&value);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      hash_ ^= bytes[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::vector<std::string> compare_states(const StateSnapshot& a, const StateSnapshot& b) {
  if (a.rho_min != b.rho_min || a.rho_max != b.rho_max || a.nodes != b.nodes) {
    throw StructuralMismatch("snapshots were taken over different hierarchies");
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < a.annotations.size(); ++i) {
    const NodeAnnotation& x = a.annotations[i];
    const NodeAnnotation& y = b.annotations[i];
    diff_field(out, i, "is_open", x.is_open, y.is_open);
    diff_field(out, i, "is_enabled", x.is_enabled, y.is_enabled);
    diff_field(out, i, "is_abundant", x.is_abundant, y.is_abundant);
    diff_field(out, i, "n_area", x.n_area, y.n_area);
    diff_field(out, i, "n_x", x.n_x, y.n_x);
    diff_field(out, i, "open_below", x.open_below, y.open_below);
    diff_field(out, i, "n_enabled_below", x.n_enabled_below, y.n_enabled_below);
    diff_field(out, i, "cost", x.cost, y.cost);
    diff_field(out, i, "y", x.y, y.y);
  }
  if (a.open_facilities != b.open_facilities) {
    out.push_back(fmt::format("open facilities [{}] != [{}]", facility_list(a.open_facilities),
                              facility_list(b.open_facilities)));
  }
  for (const auto& [id, x] : a.assignments) {
    auto it = b.assignments.find(id);
    if (it == b.assignments.end()) {
      out.push_back(fmt::format("client {}: missing from second snapshot", id.value));
      continue;
    }
    const Assignment& y = it->second;
    if (x.r_area != y.r_area) out.push_back(fmt::format("client {}: r_area {} != {}", id.value, x.r_area, y.r_area));
    if (x.area_triplet != y.area_triplet) {
      out.push_back(fmt::format("client {}: area_triplet {} != {}", id.value, x.area_triplet.value,
                                y.area_triplet.value));
    }
    if (x.aux_triplet != y.aux_triplet) {
      out.push_back(fmt::format("client {}: aux_triplet {} != {}", id.value, x.aux_triplet.value,
                                y.aux_triplet.value));
    }
    if (x.open_facility != y.open_facility) {
      out.push_back(fmt::format("client {}: open_facility F{} != F{}", id.value,
                                x.open_facility.value, y.open_facility.value));
    }
  }
  for (const auto& entry : b.assignments) {
    if (!a.assignments.contains(entry.first)) {
      out.push_back(fmt::format("client {}: missing from first snapshot", entry.first.value));
    }
  }
  return out;
}

std::uint64_t snapshot_hash(const StateSnapshot& s) {
  Fnv1a h;
  h.add(s.rho_min);
  h.add(s.rho_max);
  for (const TripletKey& k : s.nodes) {
    h.add(k.r);
    h.add(k.color);
    h.add(k.facility);
  }
  for (const NodeAnnotation& a : s.annotations) {
    h.add(static_cast<std::uint8_t>(a.is_open | (a.is_enabled << 1) | (a.is_abundant << 2)));
    h.add(a.n_area);
    h.add(a.n_x);
    h.add(a.open_below);
    h.add(a.n_enabled_below);
    h.add(a.cost);
    h.add(a.y);
  }
  for (FacilityId f : s.open_facilities) h.add(f.value);
  for (const auto& [id, asg] : s.assignments) {
    h.add(id.value);
    h.add(asg.r_area);
    h.add(asg.area_triplet.value);
    h.add(asg.aux_triplet.value);
    h.add(asg.open_facility.value);
  }
  return h.value();
}

}  // namespace netfloc
