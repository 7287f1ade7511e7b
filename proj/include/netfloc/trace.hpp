#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "netfloc/metric.hpp"

namespace netfloc {

/// Malformed instance or trace input. The message carries the location.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TraceEvent {
  enum class Kind { Insert, Delete, CostQuery, SolutionQuery };

  Kind kind = Kind::CostQuery;
  std::string client;  // trace token, for Insert and Delete
  PointId point;       // Insert only
  int line = 0;        // 1-based source line
};

const char* op_name(TraceEvent::Kind kind);

/// Parses the line format:
///
///   + <cid> <point>     point is an index, optionally prefixed with 'P'
///   - <cid>
///   ? cost
///   ? solution
///   # comment
std::vector<TraceEvent> parse_trace(std::istream& in, const std::string& source = "<trace>");
std::vector<TraceEvent> load_trace(const std::filesystem::path& path);
std::string format_trace(const std::vector<TraceEvent>& events);

/// Checks point ranges and insert-before-delete consistency of client tokens.
void validate_trace(const Instance& instance, const std::vector<TraceEvent>& events,
                    const std::string& source = "<trace>");

/// Maps trace tokens to engine client ids. A token keeps its id for the whole run.
class ClientInterner {
 public:
  ClientId intern(const std::string& token);

 private:
  std::map<std::string, ClientId> ids_;
};

Instance parse_instance(const std::string& text, const std::string& source = "<instance>");
Instance load_instance(const std::filesystem::path& path);
std::string instance_to_json(const Instance& instance);

}  // namespace netfloc
