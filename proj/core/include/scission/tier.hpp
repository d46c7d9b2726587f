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

#include <array>
#include <optional>
#include <string_view>

namespace scission {

// Position of a resource in the pipeline, ordered by distance from the data
// source. Pipelines only ever move forward through tiers.
enum class Tier { kDevice = 0, kEdge = 1, kCloud = 2 };

inline constexpr std::array<Tier, 3> kAllTiers = {Tier::kDevice, Tier::kEdge,
                                                  Tier::kCloud};

constexpr std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::kDevice:
      return "device";
    case Tier::kEdge:
      return "edge";
    case Tier::kCloud:
      return "cloud";
  }
  return "unknown";
}

constexpr std::optional<Tier> parse_tier(std::string_view name) {
  for (Tier tier : kAllTiers) {
    if (to_string(tier) == name) return tier;
  }
  return std::nullopt;
}

}  // namespace scission
