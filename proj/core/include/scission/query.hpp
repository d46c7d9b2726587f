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
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "scission/graph.hpp"
#include "scission/network.hpp"
#include "scission/search.hpp"

namespace scission {

// A resource id, or a tier name meaning "some resource of that tier". Tier
// names win over equal resource ids.
struct ResourceRef {
  std::string name;

  friend bool operator==(const ResourceRef&, const ResourceRef&) = default;
};

enum class Comparison { kAtMost, kAtLeast };

struct UseResource {
  ResourceRef resource;
  friend bool operator==(const UseResource&, const UseResource&) = default;
};
struct ExcludeResource {
  ResourceRef resource;
  friend bool operator==(const ExcludeResource&, const ExcludeResource&) = default;
};
struct NativeOn {
  ResourceRef resource;
  friend bool operator==(const NativeOn&, const NativeOn&) = default;
};
// Pins the unit that contains `layer`.
struct PlaceLayer {
  LayerId layer = 0;
  ResourceRef resource;
  friend bool operator==(const PlaceLayer&, const PlaceLayer&) = default;
};
// Compute seconds on the resource (0 when unused).
struct TimeBound {
  ResourceRef resource;
  Comparison cmp = Comparison::kAtMost;
  double seconds = 0.0;
  friend bool operator==(const TimeBound&, const TimeBound&) = default;
};
// Share of total compute time (communication excluded).
struct TimeFraction {
  ResourceRef resource;
  Comparison cmp = Comparison::kAtMost;
  double fraction = 0.0;
  friend bool operator==(const TimeFraction&, const TimeFraction&) = default;
};
// Bytes on hops from -> to, including the input hop; 0 when absent.
struct HopTransferBound {
  ResourceRef from;
  ResourceRef to;
  Comparison cmp = Comparison::kAtMost;
  std::uint64_t bytes = 0;
  friend bool operator==(const HopTransferBound&, const HopTransferBound&) = default;
};
struct TotalTransferBound {
  Comparison cmp = Comparison::kAtMost;
  std::uint64_t bytes = 0;
  friend bool operator==(const TotalTransferBound&, const TotalTransferBound&) = default;
};

using Constraint = std::variant<UseResource, ExcludeResource, NativeOn, PlaceLayer, TimeBound,
                                TimeFraction, HopTransferBound, TotalTransferBound>;

// Conjunctive constraints plus objective and result count.
struct Query {
  Objective objective = Objective::kLatency;
  std::size_t top_n = 3;
  std::vector<Constraint> constraints;

  friend bool operator==(const Query&, const Query&) = default;
};

// Grammar:
//   query  := clause (";" clause)*
//   clause := "minimize" ("latency" | "transfer") | "topn" INT | atom
//   atom   := "use(" RES ")" | "exclude(" RES ")" | "native(" RES ")"
//           | "place(" INT "," RES ")" | "time(" RES ")" CMP DUR
//           | "time_frac(" RES ")" CMP FLOAT | "transfer(" RES "->" RES ")" CMP SIZE
//           | "total_transfer" CMP SIZE
//   CMP := "<=" | ">="   DUR := FLOAT ("s" | "ms")   SIZE := FLOAT ("B" | "KB" | "MB")
// Whitespace is allowed between tokens. Throws QueryError with the byte
// offset of the problem; use(x) together with exclude(x) is rejected.
Query parse_query(std::string_view text);
// As above, but the objective and result count fall back to those of
// `defaults` when the text does not set them.
Query parse_query(std::string_view text, const Query& defaults);

// Canonical text; parse_query(to_string(q)) == q.
std::string to_string(const Constraint& constraint);
std::string to_string(const Query& query);

// Throws QueryError for references to resources or tiers absent from the
// topology and for layers absent from the schema.
void check_references(const Query& query, const PartitionSchema& schema,
                      const Topology& topology);

bool satisfies(const Configuration& config, const Query& query,
               const PartitionSchema& schema, const Topology& topology);

struct QueryResult {
  SearchResult search;
  // Human-readable notes, e.g. how place() resolved a layer to its unit.
  std::vector<std::string> notes;
};

// rank(filter(enumerate, satisfies), objective, n).
QueryResult solve(const Query& query, const PartitionSchema& schema,
                  const ProfileSet& profiles, const Topology& topology,
                  unsigned threads = 1);

}  // namespace scission
