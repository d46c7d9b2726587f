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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scission/tier.hpp"

namespace scission {

struct LinkParams {
  double latency_s = 0.0;
  // Decimal bits per second; +infinity models a free link.
  double bandwidth_bps = 0.0;
};

// Directed connection between two resources.
struct Link {
  std::string from;
  std::string to;
  double latency_s = 0.0;
  double bandwidth_bps = 0.0;

  LinkParams params() const { return {latency_s, bandwidth_bps}; }
};

// latency + bytes * 8 / bandwidth, decimal SI units.
double transfer_time(std::uint64_t bytes, const LinkParams& link);
inline double transfer_time(std::uint64_t bytes, const Link& link) {
  return transfer_time(bytes, link.params());
}

// Named network conditions: "3g", "4g", "wired" (home fibre upload) and
// "edge-cloud". Throws DataError for any other name.
LinkParams preset(std::string_view name);

// Resources grouped by tier, the resource where input data originates, and
// the links between resources. The constructor checks referential integrity;
// require_pipeline_links() checks that every link a plan may use exists.
class Topology {
 public:
  Topology(std::vector<Tier> tiers, std::map<Tier, std::vector<std::string>> resources,
           std::string source, std::vector<Link> links,
           bool charge_result_return = false);

  // Ascending.
  const std::vector<Tier>& tiers() const { return tiers_; }
  const std::vector<std::string>& resources_in(Tier tier) const;
  // Every resource, by tier then declaration order.
  const std::vector<std::string>& resources() const { return all_resources_; }
  bool has_resource(std::string_view id) const;
  Tier tier_of(std::string_view id) const;

  const std::string& source() const { return source_; }
  const std::vector<Link>& links() const { return links_; }
  // nullptr when the pair has no link.
  const Link* find_link(std::string_view from, std::string_view to) const;
  // Throws DataError("missing link a -> b").
  const Link& link(std::string_view from, std::string_view to) const;

  // When set, the final result is charged on the way back to the source.
  bool charge_result_return() const { return charge_result_return_; }

  // Links needed for source -> every resource and for every ordered pair of
  // resources in ascending distinct tiers.
  void require_pipeline_links() const;

 private:
  std::vector<Tier> tiers_;
  std::map<Tier, std::vector<std::string>> resources_;
  std::vector<std::string> all_resources_;
  std::map<std::string, Tier, std::less<>> tier_by_resource_;
  std::string source_;
  std::vector<Link> links_;
  std::map<std::pair<std::string, std::string>, std::size_t, std::less<>> link_index_;
  bool charge_result_return_;
};

// Parses the topology JSON document. Each link gives either a `preset` name
// or `latency_ms` and `bandwidth_mbps`.
Topology parse_topology(std::string_view document);
std::string serialize_topology(const Topology& topology);

}  // namespace scission
