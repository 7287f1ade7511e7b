#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "netfloc/dynamic_state.hpp"
#include "netfloc/trace.hpp"

namespace netfloc {

enum class RunMode { Fast, Verified };

struct RunOptions {
  RunMode mode = RunMode::Fast;
  /// Also run the logical and payment checks after every mutation, and the
  /// structural checks whenever the hierarchy changes.
  bool invariants = false;
  /// Called after each event is applied and before it is checked. Tests use
  /// it to corrupt engine state.
  std::function<void(DynamicFacilityLocation&, std::size_t event_index)> after_event;
};

struct EventRecord {
  std::size_t index = 0;
  TraceEvent::Kind kind = TraceEvent::Kind::CostQuery;
  double micros = 0.0;
  UpdateStats stats;
};

/// First check that failed, with the offending event.
struct Failure {
  std::size_t event_index = 0;
  int line = 0;
  std::vector<std::string> messages;
};

struct RunReport {
  std::vector<std::string> outputs;  // one per query, in order
  std::vector<EventRecord> events;
  std::size_t touched = 0;  // sum of |S|
  std::size_t heap_pulls = 0;
  std::size_t status_flips = 0;
  std::size_t level_shifts = 0;
  double total_micros = 0.0;
  std::optional<Failure> failure;
};

std::string format_cost(double cost);
std::string format_solution(std::vector<FacilityId> facilities);

/// Applies the events in order. The trace must already be validated. In
/// verified mode the run stops at the first mismatch against the oracle.
RunReport run_trace(const Instance& instance, const std::vector<TraceEvent>& trace,
                    const RunOptions& options = {});

/// Verified run plus every invariant check.
RunReport verify_trace(const Instance& instance, const std::vector<TraceEvent>& trace,
                       const RunOptions& hooks = {});

/// CSV timing table: event_index,op,micros,heap_pulls,flips and, for more
/// than one repetition, median_micros.
std::string bench_trace(const Instance& instance, const std::vector<TraceEvent>& trace,
                        int repetitions);

struct OptReport {
  std::size_t clients = 0;
  double opt = 0.0;
  double engine_cost = 0.0;
  double realized_cost = 0.0;
  double realized_ratio = 1.0;  // realized / OPT, 1 when there are no clients
  double engine_ratio = 1.0;    // engine estimate / OPT
  std::vector<FacilityId> opt_open;
  std::vector<FacilityId> engine_open;
};

/// Replays the first `prefix` events (all by default) and compares against
/// the exact optimum.
OptReport opt_command(const Instance& instance, const std::vector<TraceEvent>& trace,
                      std::optional<std::size_t> prefix = std::nullopt);
std::string format_opt_report(const OptReport& report);

}  // namespace netfloc
