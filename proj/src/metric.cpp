#include "netfloc/metric.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "netfloc/scale.hpp"

namespace netfloc {

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::ExplicitMatrix: return "explicit-matrix";
    case MetricKind::EuclideanL2: return "euclidean-L2";
    case MetricKind::EuclideanLinf: return "euclidean-Linf";
  }
  return "unknown";
}

MetricKind metric_kind_from_string(const std::string& name) {
  if (name == "explicit-matrix") return MetricKind::ExplicitMatrix;
  if (name == "euclidean-L2") return MetricKind::EuclideanL2;
  if (name == "euclidean-Linf") return MetricKind::EuclideanLinf;
  throw InstanceError(fmt::format("unknown metric kind '{}'", name));
}

MetricSpace MetricSpace::euclidean(MetricKind kind,
                                   const std::vector<std::vector<double>>& points) {
  if (kind == MetricKind::ExplicitMatrix) {
    throw InstanceError("euclidean() called with explicit-matrix kind");
  }
  if (points.empty()) throw InstanceError("metric has no points");
  MetricSpace m;
  m.kind_ = kind;
  m.size_ = points.size();
  m.dim_ = points.front().size();
  if (m.dim_ == 0) throw InstanceError("points must have at least one coordinate");
  m.values_.reserve(m.size_ * m.dim_);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != m.dim_) {
      throw InstanceError(fmt::format("point {} has dimension {}, expected {}", i,
                                      points[i].size(), m.dim_));
    }
    for (double x : points[i]) {
      if (!std::isfinite(x)) throw InstanceError(fmt::format("point {} has a non-finite coordinate", i));
      m.values_.push_back(x);
    }
  }
  m.compute_diameter();
  return m;
}

MetricSpace MetricSpace::explicit_matrix(const std::vector<std::vector<double>>& matrix) {
  if (matrix.empty()) throw InstanceError("metric has no points");
  const std::size_t n = matrix.size();
  MetricSpace m;
  m.kind_ = MetricKind::ExplicitMatrix;
  m.size_ = n;
  m.values_.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) {
      throw InstanceError(fmt::format("matrix row {} has {} entries, expected {}", i,
                                      matrix[i].size(), n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double d = matrix[i][j];
      if (!std::isfinite(d) || d < 0.0) {
        throw InstanceError(fmt::format("matrix entry ({}, {}) is not a nonnegative length", i, j));
      }
      m.values_.push_back(d);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (m.values_[i * n + i] != 0.0) {
      throw InstanceError(fmt::format("matrix entry ({0}, {0}) must be zero", i));
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m.values_[i * n + j] != m.values_[j * n + i]) {
        throw InstanceError(fmt::format("matrix is not symmetric at pair ({}, {})", i, j));
      }
    }
  }
  double largest = 0.0;
  for (double d : m.values_) largest = std::max(largest, d);
  const double slack = 1e-12 * largest;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (m.values_[i * n + j] > m.values_[i * n + x] + m.values_[x * n + j] + slack) {
          throw InstanceError(fmt::format(
              "triangle inequality fails for pair ({}, {}) through point {}", i, j, x));
        }
      }
    }
  }
  m.diameter_ = largest;
  return m;
}

double MetricSpace::raw_distance(std::size_t p, std::size_t q) const {
  if (kind_ == MetricKind::ExplicitMatrix) return values_[p * size_ + q];
  const double* a = values_.data() + p * dim_;
  const double* b = values_.data() + q * dim_;
  double acc = 0.0;
  if (kind_ == MetricKind::EuclideanL2) {
    for (std::size_t k = 0; k < dim_; ++k) acc += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(acc);
  }
  for (std::size_t k = 0; k < dim_; ++k) acc = std::max(acc, std::abs(a[k] - b[k]));
  return acc;
}

double MetricSpace::distance(PointId p, PointId q) const {
  if (p.value >= size_ || q.value >= size_) {
    throw InstanceError(fmt::format("point index out of range: ({}, {}) with {} points",
                                    p.value, q.value, size_));
  }
  return raw_distance(p.value, q.value);
}

void MetricSpace::compute_diameter() {
  double best = 0.0;
  for (std::size_t i = 0; i < size_; ++i) {
    for (std::size_t j = i + 1; j < size_; ++j) best = std::max(best, raw_distance(i, j));
  }
  diameter_ = best;
}

std::vector<double> MetricSpace::coordinates(PointId p) const {
  if (kind_ == MetricKind::ExplicitMatrix || p.value >= size_) return {};
  auto first = values_.begin() + static_cast<std::ptrdiff_t>(p.value * dim_);
  return {first, first + static_cast<std::ptrdiff_t>(dim_)};
}

Instance::Instance(MetricSpace metric, std::vector<Facility> facilities,
                   std::optional<double> kappa)
    : metric_(std::move(metric)), facilities_(std::move(facilities)), kappa_(kappa) {
  if (facilities_.empty()) throw InstanceError("instance has no facilities");
  for (std::size_t i = 0; i < facilities_.size(); ++i) {
    const Facility& f = facilities_[i];
    if (f.id.value != i) {
      throw InstanceError(fmt::format("facility ids must be dense; position {} has id {}", i,
                                      f.id.value));
    }
    if (f.point.value >= metric_.size()) {
      throw InstanceError(fmt::format("facility {} refers to point {} outside the universe", i,
                                      f.point.value));
    }
    if (!std::isfinite(f.opening_cost) || f.opening_cost <= 0.0) {
      throw InstanceError(fmt::format("facility {} has non-positive opening cost {}", i,
                                      f.opening_cost));
    }
  }
  if (kappa_ && !(*kappa_ > 0.0)) throw InstanceError("declared kappa must be positive");
}

const Facility& Instance::facility(FacilityId id) const {
  if (id.value >= facilities_.size()) {
    throw InstanceError(fmt::format("facility id {} out of range", id.value));
  }
  return facilities_[id.value];
}

double Instance::facility_distance(FacilityId a, FacilityId b) const {
  return metric_.distance(facility(a).point, facility(b).point);
}

double Instance::point_facility_distance(PointId p, FacilityId f) const {
  return metric_.distance(p, facility(f).point);
}

void Instance::check_point(PointId p) const {
  if (p.value >= metric_.size()) {
    throw InstanceError(fmt::format("point index {} out of range ({} points)", p.value,
                                    metric_.size()));
  }
}

Params derive_parameters(const Instance& instance, std::uint64_t n) {
  Params params;
  params.diameter = instance.metric().diameter();
  params.n = n;
  params.f_max = 0.0;
  params.f_min = instance.facilities().front().opening_cost;
  for (const Facility& f : instance.facilities()) {
    params.f_max = std::max(params.f_max, f.opening_cost);
    params.f_min = std::min(params.f_min, f.opening_cost);
  }
  if (!(params.f_min > 0.0)) throw InstanceError("minimum opening cost must be positive");
  const auto divisor =
      static_cast<double>(std::max<std::uint64_t>(instance.num_facilities(), n));
  params.rho_min = cround_ratio(params.f_min, divisor);
  params.rho_max = cround(std::max(params.diameter, params.f_max));
  if (params.rho_max < params.rho_min) {
    params.degenerate = true;
    params.rho_min = params.rho_max;
  }
  params.delta = params.rho_max - params.rho_min + 1;
  return params;
}

std::uint64_t client_scale(std::uint64_t count) {
  if (count == 0) return 0;
  std::uint64_t n = 1;
  while (n <= count / 5) n *= 5;
  return n;
}

void ClientRegistry::insert(ClientId id, PointId p) {
  if (!clients_.emplace(id, p).second) {
    throw ClientError(fmt::format("client {} is already live", id.value));
  }
}

PointId ClientRegistry::erase(ClientId id) {
  auto it = clients_.find(id);
  if (it == clients_.end()) throw ClientError(fmt::format("client {} is not live", id.value));
  PointId p = it->second;
  clients_.erase(it);
  return p;
}

PointId ClientRegistry::point(ClientId id) const {
  auto it = clients_.find(id);
  if (it == clients_.end()) throw ClientError(fmt::format("client {} is not live", id.value));
  return it->second;
}

}  // namespace netfloc
