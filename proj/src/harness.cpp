#include "netfloc/harness.hpp"

#include <algorithm>
#include <chrono>

#include <fmt/format.h>

#include "netfloc/invariants.hpp"
#include "netfloc/reference_oracle.hpp"

namespace netfloc {

std::string format_cost(double cost) { return fmt::format("{}", cost); }

std::string format_solution(std::vector<FacilityId> facilities) {
  std::sort(facilities.begin(), facilities.end());
  std::string out;
  for (FacilityId f : facilities) out += fmt::format("{}F{}", out.empty() ? "" : " ", f.value);
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::string> check_against_oracle(const DynamicFacilityLocation& engine) {
  const ClientMap& clients = engine.clients().entries();
  const StateSnapshot mine = engine.snapshot();
  std::vector<std::string> out = compare_states(mine, recompute_state(engine.hierarchy(), clients));
  if (!out.empty() || !engine.last_update().level_shift) return out;

  // After a level shift, the shifted hierarchy must match one built directly
  // for the current parameters.
  const NetHierarchy fresh(engine.instance(), engine.params());
  try {
    out = compare_states(mine, recompute_state(fresh, clients));
  } catch (const StructuralMismatch&) {
    out.push_back("shifted hierarchy differs from a fresh build");
  }
  return out;
}

}  // namespace

RunReport run_trace(const Instance& instance, const std::vector<TraceEvent>& trace,
                    const RunOptions& options) {
  RunReport report;
  DynamicFacilityLocation engine(instance);
  ClientInterner interner;
  const bool verified = options.mode == RunMode::Verified;

  const auto fail = [&](std::size_t index, int line, std::vector<std::string> messages) {
    report.failure = Failure{index, line, std::move(messages)};
  };

  if (options.invariants) {
    if (auto problems = check_structure(engine.hierarchy()); !problems.empty()) {
      fail(0, 0, std::move(problems));
      return report;
    }
  }

  for (std::size_t i = 0; i < trace.size(); ++i) {
    const TraceEvent& ev = trace[i];
    EventRecord rec;
    rec.index = i;
    rec.kind = ev.kind;
    const bool mutation = ev.kind == TraceEvent::Kind::Insert || ev.kind == TraceEvent::Kind::Delete;

    try {
      const auto start = Clock::now();
      switch (ev.kind) {
        case TraceEvent::Kind::Insert: engine.insert_client(interner.intern(ev.client), ev.point); break;
        case TraceEvent::Kind::Delete: engine.delete_client(interner.intern(ev.client)); break;
        case TraceEvent::Kind::CostQuery: report.outputs.push_back(format_cost(engine.cost_query())); break;
        case TraceEvent::Kind::SolutionQuery:
          report.outputs.push_back(format_solution(engine.solution_query()));
          break;
      }
      rec.micros = std::chrono::duration<double, std::micro>(Clock::now() - start).count();
    } catch (const std::logic_error& e) {
      // Internal assertions such as the clean-once check.
      fail(i, ev.line, {e.what()});
      break;
    }

    if (mutation) {
      rec.stats = engine.last_update();
      report.touched += rec.stats.affected;
      report.heap_pulls += rec.stats.heap_pulls;
      report.status_flips += rec.stats.status_flips;
    }
    report.total_micros += rec.micros;
    report.events.push_back(rec);

    if (options.after_event) options.after_event(engine, i);
    if (!mutation || (!verified && !options.invariants)) continue;

    std::vector<std::string> problems;
    try {
      if (verified) problems = check_against_oracle(engine);
      if (problems.empty() && options.invariants) {
        problems = check_logical(engine);
        if (problems.empty()) problems = check_payment_bound(engine);
        if (problems.empty() && rec.stats.level_shift) problems = check_structure(engine.hierarchy());
      }
    } catch (const std::exception& e) {
      problems.push_back(e.what());
    }
    if (!problems.empty()) {
      fail(i, ev.line, std::move(problems));
      break;
    }
  }
  report.level_shifts = engine.level_shifts();
  return report;
}

RunReport verify_trace(const Instance& instance, const std::vector<TraceEvent>& trace,
                       const RunOptions& hooks) {
  RunOptions options = hooks;
  options.mode = RunMode::Verified;
  options.invariants = true;
  return run_trace(instance, trace, options);
}

std::string bench_trace(const Instance& instance, const std::vector<TraceEvent>& trace,
                        int repetitions) {
  repetitions = std::max(repetitions, 1);
  std::vector<RunReport> runs;
  for (int k = 0; k < repetitions; ++k) runs.push_back(run_trace(instance, trace));

  std::string out = "event_index,op,micros,heap_pulls,flips";
  if (repetitions > 1) out += ",median_micros";
  out += '\n';
  const RunReport& first = runs.front();
  std::vector<double> samples(static_cast<std::size_t>(repetitions));
  for (std::size_t i = 0; i < first.events.size(); ++i) {
    const EventRecord& rec = first.events[i];
    out += fmt::format("{},{},{:.3f},{},{}", rec.index, op_name(rec.kind), rec.micros,
                       rec.stats.heap_pulls, rec.stats.status_flips);
    if (repetitions > 1) {
      for (std::size_t k = 0; k < runs.size(); ++k) samples[k] = runs[k].events[i].micros;
      std::sort(samples.begin(), samples.end());
      const std::size_t mid = samples.size() / 2;
      const double median =
          samples.size() % 2 ? samples[mid] : 0.5 * (samples[mid - 1] + samples[mid]);
      out += fmt::format(",{:.3f}", median);
    }
    out += '\n';
  }
  return out;
}

OptReport opt_command(const Instance& instance, const std::vector<TraceEvent>& trace,
                      std::optional<std::size_t> prefix) {
  if (instance.num_facilities() > max_exact_facilities) {
    throw InputError(fmt::format("opt needs at most {} facilities, instance has {}",
                                 max_exact_facilities, instance.num_facilities()));
  }
  DynamicFacilityLocation engine(instance);
  ClientInterner interner;
  const std::size_t limit = std::min(prefix.value_or(trace.size()), trace.size());
  for (std::size_t i = 0; i < limit; ++i) {
    const TraceEvent& ev = trace[i];
    if (ev.kind == TraceEvent::Kind::Insert) engine.insert_client(interner.intern(ev.client), ev.point);
    if (ev.kind == TraceEvent::Kind::Delete) engine.delete_client(interner.intern(ev.client));
  }

  OptReport report;
  const OptResult opt = brute_force_opt(instance, engine.clients().entries());
  report.clients = engine.clients().size();
  report.opt = opt.cost;
  report.opt_open = opt.open_set;
  report.engine_cost = engine.cost_query();
  report.realized_cost = realized_cost(engine);
  report.engine_open = engine.solution_query();
  std::sort(report.engine_open.begin(), report.engine_open.end());
  if (report.clients > 0) {
    report.realized_ratio = report.realized_cost / report.opt;
    report.engine_ratio = report.engine_cost / report.opt;
  }
  return report;
}

std::string format_opt_report(const OptReport& r) {
  return fmt::format(
      "clients {}\nopt {}\nopt_open {}\nengine_cost {}\nrealized_cost {}\nengine_open {}\n"
      "realized_ratio {}\nengine_ratio {}\n",
      r.clients, r.opt, format_solution(r.opt_open), r.engine_cost, r.realized_cost,
      format_solution(r.engine_open), r.realized_ratio, r.engine_ratio);
}

}  // namespace netfloc
