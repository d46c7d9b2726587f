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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scission/graph.hpp"
#include "scission/network.hpp"
#include "scission/search.hpp"

namespace scission::cli {

// "device:0-1 | edge:2-175 | cloud:176", in layer ids.
std::string describe(std::span<const Segment> segments, const PartitionSchema& schema);

// Inverse of describe(). Throws DataError when a range does not start and end
// on unit boundaries.
std::vector<Segment> parse_description(std::string_view text, const PartitionSchema& schema);

struct ReportRow {
  std::size_t rank = 0;
  std::string description;
  Configuration config;
};

// Everything printed by plan and query, independent of the output format.
struct PlanReport {
  std::string model_name;
  std::size_t layer_count = 0;
  std::size_t unit_count = 0;
  std::size_t cut_count = 0;
  std::string topology;
  Objective objective = Objective::kLatency;
  std::size_t top_n = 0;
  std::optional<std::string> query;
  std::uint64_t evaluated = 0;
  std::uint64_t accepted = 0;
  std::vector<std::string> notes;
  std::vector<ReportRow> rows;
};

// "device[pi] -> edge[edge1, edge2] -> cloud[gpu] (source pi)"
std::string summarize(const Topology& topology);

PlanReport make_report(const PartitionSchema& schema, const Topology& topology,
                       const SearchResult& result, Objective objective, std::size_t top_n);

void render_table(const PlanReport& report, std::ostream& out);

// Writes configurations.csv (one row per configuration) and breakdown.csv
// (one row per compute segment or hop) into `dir`, creating it if needed.
void write_csv(const PlanReport& report, const std::filesystem::path& dir);

// Schema listing for `inspect`: first line is
// "model=<name> layers=<n> cuts=<p> units=<u>".
void render_schema(const DnnGraph& graph, const PartitionSchema& schema, std::ostream& out);

}  // namespace scission::cli
