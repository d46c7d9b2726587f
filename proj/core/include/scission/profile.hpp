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
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scission/graph.hpp"
#include "scission/tier.hpp"

namespace scission {

// Mean execution time of every execution unit of one model on one resource.
struct ResourceProfile {
  std::string resource_id;
  Tier tier = Tier::kDevice;
  std::string model_name;
  int runs = 1;
  // Seconds, indexed by unit id.
  std::vector<double> unit_times;
  // Per-run seconds, indexed by unit id, when the document carried them.
  std::optional<std::vector<std::vector<double>>> raw_samples;

  std::size_t unit_count() const { return unit_times.size(); }
};

using ProfileSet = std::map<std::string, ResourceProfile, std::less<>>;

// Arithmetic mean. Throws DataError on an empty list or a negative sample.
double aggregate_runs(std::span<const double> samples);

// Parses the profile-interchange JSON document. Means are recomputed from
// `samples_s` when present. Unit ids must be dense from 0; a gap is reported
// as "missing unit k".
ResourceProfile ingest_profile(std::string_view document);

// As above, then checks the profile against a partition schema.
ResourceProfile ingest_profile(std::string_view document,
                               const PartitionSchema& schema);

// Throws DataError unless the profile belongs to the schema's model and has
// exactly one time per unit.
void check_alignment(const ResourceProfile& profile, const PartitionSchema& schema);

std::string serialize_profile(const ResourceProfile& profile);

// Sum of all unit times: the cost of running the whole model natively.
double native_time(const ResourceProfile& profile);

}  // namespace scission
