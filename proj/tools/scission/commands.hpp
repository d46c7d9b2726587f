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

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "scission/graph.hpp"
#include "scission/network.hpp"
#include "scission/profile.hpp"
#include "scission/search.hpp"

namespace scission::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitDataError = 1,
  kExitQueryError = 2,
};

struct PlanInputs {
  std::filesystem::path graph;
  std::vector<std::filesystem::path> profiles;
  std::filesystem::path topology;
};

// A validated planning problem: the schema is derived from the graph and
// every profile is aligned with it.
struct Instance {
  DnnGraph graph;
  PartitionSchema schema;
  ProfileSet profiles;
  Topology topology;
};

// Throws DataError; messages start with the offending file path.
Instance load_instance(const PlanInputs& inputs);

struct PlanOptions {
  PlanInputs inputs;
  Objective objective = Objective::kLatency;
  std::size_t top_n = 3;
  std::optional<std::filesystem::path> csv_dir;
  unsigned threads = 0;
  // Elapsed solve time (excluding file loading) to the error stream.
  bool timing = false;
};

int cmd_plan(const PlanOptions& options, std::ostream& out, std::ostream& err);
int cmd_query(const PlanOptions& options, std::string_view query_text, std::ostream& out,
              std::ostream& err);
int cmd_inspect(const std::filesystem::path& graph_path, std::ostream& out, std::ostream& err);

// Parses argv and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace scission::cli
