#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace netfloc {

/// Thrown for malformed or semantically invalid instances.
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a client operation refers to an unknown or duplicate id.
class ClientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Tag>
struct StrongId {
  std::uint32_t value = 0;

  constexpr StrongId() = default;
  constexpr explicit StrongId(std::uint32_t v) : value(v) {}
  friend constexpr auto operator<=>(StrongId, StrongId) = default;
};

struct PointTag {};
struct FacilityTag {};

using PointId = StrongId<PointTag>;
using FacilityId = StrongId<FacilityTag>;

/// Client ids are caller-chosen and only need to be unique among live clients.
struct ClientId {
  std::uint64_t value = 0;
  friend constexpr auto operator<=>(ClientId, ClientId) = default;
};

enum class MetricKind { ExplicitMatrix, EuclideanL2, EuclideanLinf };

std::string to_string(MetricKind kind);
MetricKind metric_kind_from_string(const std::string& name);

/// Finite metric over a declared point universe.
class MetricSpace {
 public:
  /// Points given as coordinate rows; every row must have the same dimension.
  static MetricSpace euclidean(MetricKind kind,
                               const std::vector<std::vector<double>>& points);
  /// Square distance matrix. Metric axioms are checked exhaustively.
  static MetricSpace explicit_matrix(const std::vector<std::vector<double>>& matrix);

  MetricKind kind() const { return kind_; }
  std::size_t size() const { return size_; }
  std::size_t dimension() const { return dim_; }

  double distance(PointId p, PointId q) const;

  /// Largest pairwise distance, computed once at construction.
  double diameter() const { return diameter_; }

  std::vector<double> coordinates(PointId p) const;

 private:
  MetricSpace() = default;
  double raw_distance(std::size_t p, std::size_t q) const;
  void compute_diameter();

  MetricKind kind_ = MetricKind::EuclideanL2;
  std::size_t size_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> values_;  // coordinates (row-major) or matrix entries
  double diameter_ = 0.0;
};

struct Facility {
  FacilityId id;
  PointId point;
  double opening_cost = 0.0;
};

/// Metric, facilities with positive opening costs, optional declared doubling
/// dimension. Immutable once constructed.
class Instance {
 public:
  Instance(MetricSpace metric, std::vector<Facility> facilities,
           std::optional<double> kappa = std::nullopt);

  const MetricSpace& metric() const { return metric_; }
  const std::vector<Facility>& facilities() const { return facilities_; }
  const Facility& facility(FacilityId id) const;
  std::size_t num_facilities() const { return facilities_.size(); }
  std::size_t num_points() const { return metric_.size(); }
  std::optional<double> kappa() const { return kappa_; }

  double distance(PointId p, PointId q) const { return metric_.distance(p, q); }
  double facility_distance(FacilityId a, FacilityId b) const;
  double point_facility_distance(PointId p, FacilityId f) const;

  void check_point(PointId p) const;

 private:
  MetricSpace metric_;
  std::vector<Facility> facilities_;
  std::optional<double> kappa_;
};

/// Global scale parameters. Logradii range over [rho_min, rho_max].
struct Params {
  double diameter = 0.0;  // W
  double f_max = 0.0;
  double f_min = 0.0;
  std::uint64_t n = 0;
  int rho_min = 0;
  int rho_max = 0;
  int delta = 1;
  bool degenerate = false;  // rho_max < rho_min was clamped

  friend bool operator==(const Params&, const Params&) = default;
};

Params derive_parameters(const Instance& instance, std::uint64_t n);

/// Largest power of 5 not exceeding `count`; 0 for an empty client set.
std::uint64_t client_scale(std::uint64_t count);

/// Live clients and where they sit.
class ClientRegistry {
 public:
  bool contains(ClientId id) const { return clients_.contains(id); }
  std::size_t size() const { return clients_.size(); }
  bool empty() const { return clients_.empty(); }

  void insert(ClientId id, PointId p);
  PointId erase(ClientId id);
  PointId point(ClientId id) const;

  const std::map<ClientId, PointId>& entries() const { return clients_; }

 private:
  std::map<ClientId, PointId> clients_;
};

}  // namespace netfloc

template <typename Tag>
struct std::hash<netfloc::StrongId<Tag>> {
  std::size_t operator()(netfloc::StrongId<Tag> id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
