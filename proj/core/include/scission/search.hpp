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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scission/graph.hpp"
#include "scission/network.hpp"
#include "scission/profile.hpp"

namespace scission {

enum class Objective { kLatency, kTransfer };

std::string_view to_string(Objective objective);

// A contiguous range of units placed on one resource. Inclusive bounds.
struct Segment {
  std::string resource;
  std::size_t first_unit = 0;
  std::size_t last_unit = 0;

  friend auto operator<=>(const Segment&, const Segment&) = default;
};

struct Hop {
  std::string from;
  std::string to;
  std::uint64_t bytes = 0;
  double seconds = 0.0;

  friend bool operator==(const Hop&, const Hop&) = default;
};

struct ConfigMetrics {
  double end_to_end_s = 0.0;
  std::map<std::string, double, std::less<>> per_resource_compute_s;
  // In pipeline order, starting with the input hop when the first resource is
  // not the source.
  std::vector<Hop> per_hop_transfer;
  std::uint64_t total_transfer_bytes = 0;

  double compute_s() const;
  double communication_s() const;
};

// One segment is a native configuration; more are distributed.
struct Configuration {
  std::vector<Segment> segments;
  ConfigMetrics metrics;

  bool is_native() const { return segments.size() == 1; }
};

// Ordered resources, one per tier, in ascending tier order.
using Pipeline = std::vector<std::string>;

// Every non-empty ascending tier subsequence with every choice of one
// resource per chosen tier. Shorter pipelines first, then tier order, then
// resource declaration order.
std::vector<Pipeline> enumerate_pipelines(const Topology& topology);

// Closed form: sum over pipelines of C(P, k - 1), P = number of cut points.
std::uint64_t configuration_count(std::size_t cut_count, const Topology& topology);

// Streams every configuration with empty metrics.
void enumerate_configurations(const PartitionSchema& schema, const Topology& topology,
                              const std::function<void(const Configuration&)>& visit);

// Direct evaluation: sums each segment's unit times and charges each hop
// with transfer_time(). Throws DataError on a missing profile or link.
ConfigMetrics evaluate(const Configuration& config, const PartitionSchema& schema,
                       const ProfileSet& profiles, const Topology& topology);

// Prefix-sum evaluator used by the search. Profiles are checked against the
// schema and links against the topology once, at construction.
class Evaluator {
 public:
  Evaluator(const PartitionSchema& schema, const ProfileSet& profiles,
            const Topology& topology);

  ConfigMetrics operator()(std::span<const Segment> segments) const;

 private:
  std::size_t index_of(std::string_view resource) const;
  double compute(std::size_t resource, std::size_t first, std::size_t last) const;
  const LinkParams& link(std::size_t from, std::size_t to) const;

  const PartitionSchema* schema_;
  const Topology* topology_;
  std::vector<std::string> resources_;
  std::size_t source_ = 0;
  // prefix_[r][u] = time of units [0, u) on resource r.
  std::vector<std::vector<double>> prefix_;
  std::vector<std::vector<LinkParams>> links_;
  std::vector<std::vector<bool>> has_link_;
};

// Strict total order used by rank(): objective ascending, then fewer
// segments, then fewer bytes moved, then segments compared element-wise by
// (resource, first_unit, last_unit).
bool ranks_before(const Configuration& a, const Configuration& b, Objective objective);

// Sorts and truncates to the best `n`.
std::vector<Configuration> rank(std::vector<Configuration> configs, Objective objective,
                                std::size_t n);

// Bounded best-n accumulator. Merging partial accumulators in any order gives
// the same result because ranks_before() is a total order.
class TopN {
 public:
  static constexpr std::size_t kAll = std::numeric_limits<std::size_t>::max();

  TopN(Objective objective, std::size_t n);

  void push(Configuration config);
  void merge(TopN&& other);
  std::size_t size() const { return heap_.size(); }
  // Best first.
  std::vector<Configuration> take() &&;

 private:
  Objective objective_;
  std::size_t n_;
  std::vector<Configuration> heap_;
};

struct SearchOptions {
  Objective objective = Objective::kLatency;
  std::size_t top_n = 3;
  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 1;
  // Configurations for which this returns false are not ranked.
  std::function<bool(const Configuration&)> filter;
};

struct SearchResult {
  std::vector<Configuration> ranked;
  std::uint64_t evaluated = 0;
  std::uint64_t accepted = 0;
};

// Exhaustive enumerate, evaluate, filter and rank. The output does not
// depend on the thread count.
SearchResult search(const PartitionSchema& schema, const ProfileSet& profiles,
                    const Topology& topology, const SearchOptions& options = {});

// Reads SCISSION_THREADS (0 or unset means hardware concurrency).
unsigned threads_from_environment();

}  // namespace scission
