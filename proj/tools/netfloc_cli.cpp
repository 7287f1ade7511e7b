// Command-line driver: run, verify, benchmark and inspect update traces.
//
// Query results go to stdout, diagnostics to stderr. Exit status is 0 on
// success, 1 when verification fails and 2 on bad input.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "netfloc/dynamic_state.hpp"
#include "netfloc/generator.hpp"
#include "netfloc/harness.hpp"

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;

struct Inputs {
  std::string instance_path;
  std::string trace_path;
};

void add_inputs(CLI::App* cmd, Inputs& in, bool with_trace = true) {
  cmd->add_option("instance", in.instance_path, "Instance JSON file")->required();
  if (with_trace) cmd->add_option("trace", in.trace_path, "Update trace file")->required();
}

std::pair<netfloc::Instance, std::vector<netfloc::TraceEvent>> load(const Inputs& in) {
  netfloc::Instance instance = netfloc::load_instance(in.instance_path);
  std::vector<netfloc::TraceEvent> trace = netfloc::load_trace(in.trace_path);
  netfloc::validate_trace(instance, trace, in.trace_path);
  return {std::move(instance), std::move(trace)};
}

void report_failure(const netfloc::Failure& f) {
  fmt::print(stderr, "verification failed at event {} (line {}):\n", f.event_index, f.line);
  for (const std::string& msg : f.messages) fmt::print(stderr, "  {}\n", msg);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw netfloc::InputError(fmt::format("cannot write {}", path));
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic facility location over hierarchical metric nets"};
  app.require_subcommand(1);

  Inputs run_in;
  bool verified = false;
  auto* run = app.add_subcommand("run", "Apply a trace and print query results");
  add_inputs(run, run_in);
  run->add_flag("--verified", verified, "Check every state against the from-scratch oracle");

  Inputs verify_in;
  std::optional<std::size_t> corrupt_after;
  auto* verify = app.add_subcommand("verify", "Run with oracle and invariant checks");
  add_inputs(verify, verify_in);
  verify->add_option("--corrupt-after", corrupt_after,
                     "Testing aid: flip the root's n_x after this event index");

  Inputs bench_in;
  int reps = 1;
  auto* bench = app.add_subcommand("bench", "Per-event timing table as CSV");
  add_inputs(bench, bench_in);
  bench->add_option("--reps", reps, "Repetitions; more than one adds a median column")
      ->check(CLI::PositiveNumber);

  Inputs opt_in;
  std::optional<std::size_t> prefix;
  auto* opt = app.add_subcommand("opt", "Compare the engine against the exact optimum");
  add_inputs(opt, opt_in);
  opt->add_option("--prefix", prefix, "Only apply the first N events");

  Inputs dump_in;
  auto* dump = app.add_subcommand("dump-tree", "Print the dependency tree for an empty client set");
  add_inputs(dump, dump_in, false);

  netfloc::GeneratorConfig gen;
  std::size_t gen_events = 200;
  std::size_t gen_query_every = 0;
  std::string gen_instance_out;
  std::string gen_trace_out;
  auto* generate = app.add_subcommand("generate", "Write a random instance and fuzz trace");
  generate->add_option("--points", gen.points, "Declared points")->capture_default_str();
  generate->add_option("--facilities", gen.facilities, "Facilities")->capture_default_str();
  generate->add_option("--events", gen_events, "Insert/delete events")->capture_default_str();
  generate->add_option("--query-every", gen_query_every, "Cost query after every N mutations");
  generate->add_option("--instance-out", gen_instance_out, "Instance output path")->required();
  generate->add_option("--trace-out", gen_trace_out, "Trace output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (*run) {
      const auto [instance, trace] = load(run_in);
      netfloc::RunOptions options;
      options.mode = verified ? netfloc::RunMode::Verified : netfloc::RunMode::Fast;
      const netfloc::RunReport report = netfloc::run_trace(instance, trace, options);
      for (const std::string& line : report.outputs) fmt::print("{}\n", line);
      if (report.failure) {
        report_failure(*report.failure);
        return kExitVerifyFailed;
      }
    } else if (*verify) {
      const auto [instance, trace] = load(verify_in);
      netfloc::RunOptions hooks;
      if (corrupt_after) {
        hooks.after_event = [at = *corrupt_after](netfloc::DynamicFacilityLocation& engine,
                                                  std::size_t index) {
          if (index == at) engine.annotation_for_testing(engine.hierarchy().root()).n_x += 1;
        };
      }
      const netfloc::RunReport report = netfloc::verify_trace(instance, trace, hooks);
      if (report.failure) {
        report_failure(*report.failure);
        return kExitVerifyFailed;
      }
      fmt::print(stderr, "ok: {} events, {} level shifts, {} heap pulls\n", report.events.size(),
                 report.level_shifts, report.heap_pulls);
    } else if (*bench) {
      const auto [instance, trace] = load(bench_in);
      fmt::print("{}", netfloc::bench_trace(instance, trace, reps));
    } else if (*opt) {
      const auto [instance, trace] = load(opt_in);
      fmt::print("{}", netfloc::format_opt_report(netfloc::opt_command(instance, trace, prefix)));
    } else if (*dump) {
      const netfloc::Instance instance = netfloc::load_instance(dump_in.instance_path);
      const netfloc::DynamicFacilityLocation engine(instance);
      fmt::print("{}", engine.hierarchy().dump());
    } else if (*generate) {
      std::mt19937_64 rng(netfloc::seed_from_env(1));
      const netfloc::Instance instance = netfloc::random_instance(rng, gen);
      write_file(gen_instance_out, netfloc::instance_to_json(instance));
      write_file(gen_trace_out,
                 netfloc::format_trace(netfloc::random_trace(rng, instance, gen_events, gen_query_every)));
    }
  } catch (const netfloc::InputError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitInputError;
  } catch (const netfloc::InstanceError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitInputError;
  }
  return 0;
}
