#include "netfloc/trace.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace netfloc {

using nlohmann::json;

const char* op_name(TraceEvent::Kind kind) {
  switch (kind) {
    case TraceEvent::Kind::Insert: return "insert";
    case TraceEvent::Kind::Delete: return "delete";
    case TraceEvent::Kind::CostQuery: return "cost";
    case TraceEvent::Kind::SolutionQuery: return "solution";
  }
  return "?";
}

namespace {

PointId parse_point_token(const std::string& token, const std::string& where) {
  std::string digits = token;
  if (!digits.empty() && (digits.front() == 'P' || digits.front() == 'p')) digits.erase(0, 1);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    throw InputError(fmt::format("{}: bad point '{}'", where, token));
  }
  const unsigned long long value = std::stoull(digits);
  if (value > 0xffffffffULL) throw InputError(fmt::format("{}: point '{}' out of range", where, token));
  return PointId{static_cast<std::uint32_t>(value)};
}

}  // namespace

std::vector<TraceEvent> parse_trace(std::istream& in, const std::string& source) {
  std::vector<TraceEvent> events;
  std::string text;
  int line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    std::istringstream fields(text);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    const std::string where = fmt::format("{}:{}", source, line_no);
    TraceEvent ev;
    ev.line = line_no;
    if (tok[0] == "+" && tok.size() == 3) {
      ev.kind = TraceEvent::Kind::Insert;
      ev.client = tok[1];
      ev.point = parse_point_token(tok[2], where);
    } else if (tok[0] == "-" && tok.size() == 2) {
      ev.kind = TraceEvent::Kind::Delete;
      ev.client = tok[1];
    } else if (tok[0] == "?" && tok.size() == 2 && tok[1] == "cost") {
      ev.kind = TraceEvent::Kind::CostQuery;
    } else if (tok[0] == "?" && tok.size() == 2 && tok[1] == "solution") {
      ev.kind = TraceEvent::Kind::SolutionQuery;
    } else {
      throw InputError(fmt::format("{}: unrecognised event '{}'", where, text));
    }
    events.push_back(std::move(ev));
  }
  return events;
}

std::vector<TraceEvent> load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open trace {}", path.string()));
  return parse_trace(in, path.string());
}

std::string format_trace(const std::vector<TraceEvent>& events) {
  std::string out;
  for (const TraceEvent& ev : events) {
    switch (ev.kind) {
      case TraceEvent::Kind::Insert: out += fmt::format("+ {} {}\n", ev.client, ev.point.value); break;
      case TraceEvent::Kind::Delete: out += fmt::format("- {}\n", ev.client); break;
      case TraceEvent::Kind::CostQuery: out += "? cost\n"; break;
      case TraceEvent::Kind::SolutionQuery: out += "? solution\n"; break;
    }
  }
  return out;
}

void validate_trace(const Instance& instance, const std::vector<TraceEvent>& events,
                    const std::string& source) {
  std::set<std::string> live;
  for (const TraceEvent& ev : events) {
    const std::string where = fmt::format("{}:{}", source, ev.line);
    if (ev.kind == TraceEvent::Kind::Insert) {
      if (ev.point.value >= instance.num_points()) {
        throw InputError(fmt::format("{}: point {} outside the instance's {} points", where,
                                     ev.point.value, instance.num_points()));
      }
      if (!live.insert(ev.client).second) {
        throw InputError(fmt::format("{}: client '{}' is already live", where, ev.client));
      }
    } else if (ev.kind == TraceEvent::Kind::Delete) {
      if (live.erase(ev.client) == 0) {
        throw InputError(fmt::format("{}: client '{}' is not live", where, ev.client));
      }
    }
  }
}

ClientId ClientInterner::intern(const std::string& token) {
  const auto [it, fresh] = ids_.try_emplace(token, ClientId{ids_.size()});
  return it->second;
}

namespace {

/// Reads a required member, naming its JSON path on failure.
template <typename T>
T member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InputError(fmt::format("{}: missing field {}/{}", path.empty() ? "/" : path, path, key));
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(fmt::format("{}/{}: wrong type ({})", path, key, obj.at(key).type_name()));
  }
}

std::vector<std::vector<double>> read_rows(const json& rows, const std::string& path) {
  if (!rows.is_array()) throw InputError(fmt::format("{}: expected an array", path));
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const json& row = rows[i];
    const std::string at = fmt::format("{}/{}", path, i);
    if (row.is_number()) {
      out.push_back({row.get<double>()});
    } else if (row.is_array()) {
      std::vector<double> values;
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (!row[k].is_number()) throw InputError(fmt::format("{}/{}: expected a number", at, k));
        values.push_back(row[k].get<double>());
      }
      out.push_back(std::move(values));
    } else {
      throw InputError(fmt::format("{}: expected a number or an array of numbers", at));
    }
  }
  return out;
}

}  // namespace

Instance parse_instance(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(fmt::format("{}: {}", source, e.what()));
  }

  try {
    const json& metric = doc.contains("metric") ? doc["metric"] : json();
    const std::string kind_name = member<std::string>(metric, "kind", "/metric");
    MetricKind kind;
    try {
      kind = metric_kind_from_string(kind_name);
    } catch (const InstanceError& e) {
      throw InputError(fmt::format("/metric/kind: {}", e.what()));
    }

    std::optional<MetricSpace> space;
    if (kind == MetricKind::ExplicitMatrix) {
      if (!metric.contains("matrix")) throw InputError("/metric: missing field /metric/matrix");
      space = MetricSpace::explicit_matrix(read_rows(metric["matrix"], "/metric/matrix"));
    } else {
      if (!metric.contains("points")) throw InputError("/metric: missing field /metric/points");
      space = MetricSpace::euclidean(kind, read_rows(metric["points"], "/metric/points"));
    }

    if (!doc.contains("facilities") || !doc["facilities"].is_array()) {
      throw InputError("/facilities: expected an array");
    }
    std::vector<Facility> facilities;
    const json& fs = doc["facilities"];
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const std::string path = fmt::format("/facilities/{}", i);
      const auto point = member<std::int64_t>(fs[i], "point", path);
      const auto cost = member<double>(fs[i], "cost", path);
      if (point < 0) throw InputError(fmt::format("{}/point: negative index {}", path, point));
      if (!(cost > 0.0)) throw InputError(fmt::format("{}/cost: opening cost {} is not positive", path, cost));
      facilities.push_back(Facility{FacilityId{static_cast<std::uint32_t>(i)},
                                    PointId{static_cast<std::uint32_t>(point)}, cost});
    }

    std::optional<double> kappa;
    if (doc.contains("kappa") && !doc["kappa"].is_null()) {
      if (!doc["kappa"].is_number()) throw InputError("/kappa: expected a number");
      kappa = doc["kappa"].get<double>();
    }
    return Instance(std::move(*space), std::move(facilities), kappa);
  } catch (const InstanceError& e) {
    throw InputError(fmt::format("{}: {}", source, e.what()));
  } catch (const InputError& e) {
    throw InputError(fmt::format("{}: {}", source, e.what()));
  }
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open instance {}", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str(), path.string());
}

std::string instance_to_json(const Instance& instance) {
  json doc;
  const MetricSpace& m = instance.metric();
  doc["metric"]["kind"] = to_string(m.kind());
  if (m.kind() == MetricKind::ExplicitMatrix) {
    json rows = json::array();
    for (std::uint32_t p = 0; p < m.size(); ++p) {
      json row = json::array();
      for (std::uint32_t q = 0; q < m.size(); ++q) row.push_back(m.distance(PointId{p}, PointId{q}));
      rows.push_back(std::move(row));
    }
    doc["metric"]["matrix"] = std::move(rows);
  } else {
    json rows = json::array();
    for (std::uint32_t p = 0; p < m.size(); ++p) rows.push_back(m.coordinates(PointId{p}));
    doc["metric"]["points"] = std::move(rows);
  }
  json fs = json::array();
  for (const Facility& f : instance.facilities()) {
    fs.push_back({{"point", f.point.value}, {"cost", f.opening_cost}});
  }
  doc["facilities"] = std::move(fs);
  if (instance.kappa()) doc["kappa"] = *instance.kappa();
  return doc.dump(2) + "\n";
}

}  // namespace netfloc
