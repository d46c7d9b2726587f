// Copyright 2026 The Scission Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <iterator>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "report.hpp"
#include "scission/error.hpp"
#include "scission/query.hpp"

namespace scission::cli {
namespace {

std::string read_file(const std::filesystem::path& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError(path.string() + ": cannot read " + std::string(what) + " file");
  }
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

template <typename Fn>
auto with_path(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const DataError& e) {
    const std::string prefix = path.string() + ": ";
    if (std::string_view(e.what()).starts_with(prefix)) throw;
    throw DataError(prefix + e.what());
  }
}

void finish_report(PlanReport& report, const PlanOptions& options, std::ostream& out) {
  render_table(report, out);
  if (options.csv_dir) write_csv(report, *options.csv_dir);
}

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

Instance load_instance(const PlanInputs& inputs) {
  DnnGraph graph = with_path(inputs.graph, [&] {
    return parse_graph(read_file(inputs.graph, "graph"));
  });
  PartitionSchema schema = find_cut_points(graph);
  Topology topology = with_path(inputs.topology, [&] {
    Topology t = parse_topology(read_file(inputs.topology, "topology"));
    t.require_pipeline_links();
    return t;
  });

  ProfileSet profiles;
  for (const std::filesystem::path& path : inputs.profiles) {
    ResourceProfile profile = with_path(path, [&] {
      return ingest_profile(read_file(path, "profile"), schema);
    });
    if (!topology.has_resource(profile.resource_id)) {
      throw DataError(path.string() + ": resource '" + profile.resource_id +
                      "' is not in the topology");
    }
    const std::string id = profile.resource_id;
    if (!profiles.emplace(id, std::move(profile)).second) {
      throw DataError(path.string() + ": duplicate profile for resource '" + id + "'");
    }
  }
  for (const std::string& id : topology.resources()) {
    if (!profiles.contains(id)) {
      throw DataError(inputs.topology.string() + ": no --profile given for resource '" + id +
                      "'");
    }
  }
  return Instance{std::move(graph), std::move(schema), std::move(profiles),
                  std::move(topology)};
}

int cmd_plan(const PlanOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const Instance instance = load_instance(options.inputs);
    const Stopwatch watch;
    SearchOptions search_options;
    search_options.objective = options.objective;
    search_options.top_n = options.top_n;
    search_options.threads = options.threads;
    const SearchResult result =
        search(instance.schema, instance.profiles, instance.topology, search_options);
    PlanReport report = make_report(instance.schema, instance.topology, result,
                                    options.objective, options.top_n);
    finish_report(report, options, out);
    if (options.timing) err << "solve: " << watch.elapsed_ms() << " ms\n";
    return kExitOk;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
}

int cmd_query(const PlanOptions& options, std::string_view query_text, std::ostream& out,
              std::ostream& err) {
  Query defaults;
  defaults.objective = options.objective;
  defaults.top_n = options.top_n;
  try {
    const Query query = parse_query(query_text, defaults);
    const Instance instance = load_instance(options.inputs);
    const Stopwatch watch;
    QueryResult result =
        solve(query, instance.schema, instance.profiles, instance.topology, options.threads);
    PlanReport report = make_report(instance.schema, instance.topology, result.search,
                                    query.objective, query.top_n);
    report.query = to_string(query);
    report.notes = std::move(result.notes);
    finish_report(report, options, out);
    if (options.timing) err << "solve: " << watch.elapsed_ms() << " ms\n";
    return kExitOk;
  } catch (const QueryError& e) {
    err << "query error: " << e.what() << "\n";
    return kExitQueryError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
}

int cmd_inspect(const std::filesystem::path& graph_path, std::ostream& out, std::ostream& err) {
  try {
    const DnnGraph graph = with_path(graph_path, [&] {
      return parse_graph(read_file(graph_path, "graph"));
    });
    render_schema(graph, find_cut_points(graph), out);
    return kExitOk;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Partition planner for DNN inference across device, edge and cloud"};
  app.require_subcommand(1);

  PlanOptions options;
  std::string objective = "latency";
  std::string csv_dir;
  std::string query_text;
  std::string graph_path;
  std::vector<std::string> profile_paths;
  std::string topology_path;

  auto add_plan_flags = [&](CLI::App* cmd) {
    cmd->add_option("--graph", graph_path, "Graph interchange file")->required();
    cmd->add_option("--profile", profile_paths, "Profile file, one per resource (repeatable)")
        ->required();
    cmd->add_option("--topology", topology_path, "Topology file")->required();
    cmd->add_option("--objective", objective, "Ranking objective")
        ->check(CLI::IsMember({"latency", "transfer"}));
    cmd->add_option("--top", options.top_n, "Number of configurations to report")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--csv", csv_dir, "Directory for configurations.csv and breakdown.csv");
    cmd->add_flag("--timing", options.timing, "Print solve time to stderr");
  };

  CLI::App* plan = app.add_subcommand("plan", "Rank every partition configuration");
  add_plan_flags(plan);
  CLI::App* query = app.add_subcommand("query", "Rank configurations that satisfy a query");
  add_plan_flags(query);
  query->add_option("--query", query_text, "Constraint query")->required();
  CLI::App* inspect = app.add_subcommand("inspect", "List execution units and cut points");
  inspect->add_option("--graph", graph_path, "Graph interchange file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitDataError;
  }

  if (*inspect) return cmd_inspect(graph_path, out, err);

  options.inputs.graph = graph_path;
  options.inputs.topology = topology_path;
  for (const std::string& p : profile_paths) options.inputs.profiles.emplace_back(p);
  options.objective = objective == "transfer" ? Objective::kTransfer : Objective::kLatency;
  if (!csv_dir.empty()) options.csv_dir = csv_dir;
  try {
    options.threads = threads_from_environment();
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }

  if (*plan) return cmd_plan(options, out, err);
  return cmd_query(options, query_text, out, err);
}

}  // namespace scission::cli
