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

#include "scission/search.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <optional>
#include <thread>
#include <utility>

#include "scission/error.hpp"

namespace scission {
namespace {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
  }
  return result;
}

const ResourceProfile& profile_for(const ProfileSet& profiles, std::string_view resource,
                                   const PartitionSchema& schema,
                                   const Topology& topology) {
  auto it = profiles.find(resource);
  if (it == profiles.end()) {
    throw DataError("missing profile for resource '" + std::string(resource) + "'");
  }
  const ResourceProfile& profile = it->second;
  check_alignment(profile, schema);
  if (profile.tier != topology.tier_of(resource)) {
    throw DataError("profile '" + profile.resource_id + "' declares tier " +
                    std::string(to_string(profile.tier)) + " but the topology places it in " +
                    std::string(to_string(topology.tier_of(resource))));
  }
  return profile;
}

void check_segments(std::span<const Segment> segments, const PartitionSchema& schema) {
  if (segments.empty()) throw DataError("configuration has no segments");
  std::size_t next = 0;
  for (const Segment& s : segments) {
    if (s.first_unit != next || s.last_unit < s.first_unit ||
        s.last_unit >= schema.unit_count()) {
      throw DataError("segments must cover units 0.." +
                      std::to_string(schema.unit_count() - 1) + " contiguously");
    }
    next = s.last_unit + 1;
  }
  if (next != schema.unit_count()) {
    throw DataError("segments must cover units 0.." +
                    std::to_string(schema.unit_count() - 1) + " contiguously");
  }
}

// Calls visit(indices) for every strictly increasing choice of `count`
// indices from [begin, end).
template <typename Visit>
void for_each_combination(std::size_t begin, std::size_t end, std::size_t count,
                          std::vector<std::size_t>& chosen, Visit&& visit) {
  if (count == 0) {
    visit(std::as_const(chosen));
    return;
  }
  if (end < begin + count) return;
  for (std::size_t i = begin; i + count <= end; ++i) {
    chosen.push_back(i);
    for_each_combination(i + 1, end, count - 1, chosen, visit);
    chosen.pop_back();
  }
}

void fill_segments(const Pipeline& pipeline, std::span<const std::size_t> cut_indices,
                   const PartitionSchema& schema, std::vector<Segment>& segments) {
  segments.resize(pipeline.size());
  std::size_t first = 0;
  for (std::size_t j = 0; j < pipeline.size(); ++j) {
    const std::size_t last = j + 1 < pipeline.size()
                                 ? schema.cut_points[cut_indices[j]]
                                 : schema.unit_count() - 1;
    segments[j].resource = pipeline[j];
    segments[j].first_unit = first;
    segments[j].last_unit = last;
    first = last + 1;
  }
}

}  // namespace

std::string_view to_string(Objective objective) {
  return objective == Objective::kLatency ? "latency" : "transfer";
}

double ConfigMetrics::compute_s() const {
  double total = 0.0;
  for (const auto& [resource, seconds] : per_resource_compute_s) total += seconds;
  return total;
}

double ConfigMetrics::communication_s() const {
  double total = 0.0;
  for (const Hop& hop : per_hop_transfer) total += hop.seconds;
  return total;
}

std::vector<Pipeline> enumerate_pipelines(const Topology& topology) {
  const std::vector<Tier>& tiers = topology.tiers();
  std::vector<Pipeline> pipelines;
  for (std::size_t k = 1; k <= tiers.size(); ++k) {
    std::vector<std::size_t> chosen;
    for_each_combination(0, tiers.size(), k, chosen, [&](const std::vector<std::size_t>& idx) {
      Pipeline current;
      auto expand = [&](auto&& self, std::size_t depth) -> void {
        if (depth == idx.size()) {
          pipelines.push_back(current);
          return;
        }
        for (const std::string& id : topology.resources_in(tiers[idx[depth]])) {
          current.push_back(id);
          self(self, depth + 1);
          current.pop_back();
        }
      };
      expand(expand, 0);
    });
  }
  return pipelines;
}

std::uint64_t configuration_count(std::size_t cut_count, const Topology& topology) {
  const std::vector<Tier>& tiers = topology.tiers();
  std::uint64_t total = 0;
  for (std::uint32_t mask = 1; mask < (1u << tiers.size()); ++mask) {
    std::uint64_t choices = 1;
    std::uint64_t k = 0;
    for (std::size_t t = 0; t < tiers.size(); ++t) {
      if (mask & (1u << t)) {
        choices *= topology.resources_in(tiers[t]).size();
        ++k;
      }
    }
    total += choices * binomial(cut_count, k - 1);
  }
  return total;
}

void enumerate_configurations(const PartitionSchema& schema, const Topology& topology,
                              const std::function<void(const Configuration&)>& visit) {
  Configuration config;
  std::vector<std::size_t> chosen;
  for (const Pipeline& pipeline : enumerate_pipelines(topology)) {
    for_each_combination(0, schema.cut_points.size(), pipeline.size() - 1, chosen,
                         [&](const std::vector<std::size_t>& cuts) {
                           fill_segments(pipeline, cuts, schema, config.segments);
                           visit(config);
                         });
  }
}

ConfigMetrics evaluate(const Configuration& config, const PartitionSchema& schema,
                       const ProfileSet& profiles, const Topology& topology) {
  check_segments(config.segments, schema);
  ConfigMetrics metrics;
  double compute_total = 0.0;
  for (const Segment& s : config.segments) {
    const ResourceProfile& profile = profile_for(profiles, s.resource, schema, topology);
    double seconds = 0.0;
    for (std::size_t u = s.first_unit; u <= s.last_unit; ++u) seconds += profile.unit_times[u];
    metrics.per_resource_compute_s[s.resource] += seconds;
    compute_total += seconds;
  }

  auto charge = [&](const std::string& from, const std::string& to, std::uint64_t bytes) {
    const Link& link = topology.link(from, to);
    metrics.per_hop_transfer.push_back({from, to, bytes, transfer_time(bytes, link)});
    metrics.total_transfer_bytes += bytes;
  };
  const auto& segments = config.segments;
  if (segments.front().resource != topology.source()) {
    charge(topology.source(), segments.front().resource, schema.reference_input_bytes);
  }
  for (std::size_t j = 0; j + 1 < segments.size(); ++j) {
    charge(segments[j].resource, segments[j + 1].resource,
           schema.units[segments[j].last_unit].boundary_output_bytes);
  }
  if (topology.charge_result_return() && segments.back().resource != topology.source()) {
    charge(segments.back().resource, topology.source(),
           schema.units.back().boundary_output_bytes);
  }

  double communication_total = 0.0;
  for (const Hop& hop : metrics.per_hop_transfer) communication_total += hop.seconds;
  metrics.end_to_end_s = compute_total + communication_total;
  return metrics;
}

Evaluator::Evaluator(const PartitionSchema& schema, const ProfileSet& profiles,
                     const Topology& topology)
    : schema_(&schema), topology_(&topology), resources_(topology.resources()) {
  if (schema.units.empty()) throw DataError("schema has no units");
  topology.require_pipeline_links();
  const std::size_t n = resources_.size();
  prefix_.resize(n);
  links_.assign(n, std::vector<LinkParams>(n));
  has_link_.assign(n, std::vector<bool>(n, false));
  for (std::size_t r = 0; r < n; ++r) {
    const ResourceProfile& profile = profile_for(profiles, resources_[r], schema, topology);
    prefix_[r].resize(schema.unit_count() + 1, 0.0);
    for (std::size_t u = 0; u < schema.unit_count(); ++u) {
      prefix_[r][u + 1] = prefix_[r][u] + profile.unit_times[u];
    }
    if (resources_[r] == topology.source()) source_ = r;
    for (std::size_t s = 0; s < n; ++s) {
      if (const Link* l = topology.find_link(resources_[r], resources_[s])) {
        links_[r][s] = l->params();
        has_link_[r][s] = true;
      }
    }
  }
}

std::size_t Evaluator::index_of(std::string_view resource) const {
  auto it = std::find(resources_.begin(), resources_.end(), resource);
  if (it == resources_.end()) {
    throw DataError("unknown resource '" + std::string(resource) + "'");
  }
  return static_cast<std::size_t>(it - resources_.begin());
}

double Evaluator::compute(std::size_t resource, std::size_t first, std::size_t last) const {
  return prefix_[resource][last + 1] - prefix_[resource][first];
}

const LinkParams& Evaluator::link(std::size_t from, std::size_t to) const {
  if (!has_link_[from][to]) {
    throw DataError("missing link " + resources_[from] + " -> " + resources_[to]);
  }
  return links_[from][to];
}

ConfigMetrics Evaluator::operator()(std::span<const Segment> segments) const {
  check_segments(segments, *schema_);
  ConfigMetrics metrics;
  std::size_t indices[8] = {};
  std::vector<std::size_t> overflow;
  std::size_t* index = indices;
  if (segments.size() > std::size(indices)) {
    overflow.resize(segments.size());
    index = overflow.data();
  }

  double compute_total = 0.0;
  for (std::size_t j = 0; j < segments.size(); ++j) {
    index[j] = index_of(segments[j].resource);
    const double seconds = compute(index[j], segments[j].first_unit, segments[j].last_unit);
    metrics.per_resource_compute_s[segments[j].resource] += seconds;
    compute_total += seconds;
  }

  auto charge = [&](std::size_t from, std::size_t to, std::uint64_t bytes) {
    metrics.per_hop_transfer.push_back(
        {resources_[from], resources_[to], bytes, transfer_time(bytes, link(from, to))});
    metrics.total_transfer_bytes += bytes;
  };
  const std::size_t last = segments.size() - 1;
  if (index[0] != source_) charge(source_, index[0], schema_->reference_input_bytes);
  for (std::size_t j = 0; j < last; ++j) {
    charge(index[j], index[j + 1], schema_->units[segments[j].last_unit].boundary_output_bytes);
  }
  if (topology_->charge_result_return() && index[last] != source_) {
    charge(index[last], source_, schema_->units.back().boundary_output_bytes);
  }

  double communication_total = 0.0;
  for (const Hop& hop : metrics.per_hop_transfer) communication_total += hop.seconds;
  metrics.end_to_end_s = compute_total + communication_total;
  return metrics;
}

bool ranks_before(const Configuration& a, const Configuration& b, Objective objective) {
  if (objective == Objective::kLatency) {
    if (a.metrics.end_to_end_s != b.metrics.end_to_end_s) {
      return a.metrics.end_to_end_s < b.metrics.end_to_end_s;
    }
  } else if (a.metrics.total_transfer_bytes != b.metrics.total_transfer_bytes) {
    return a.metrics.total_transfer_bytes < b.metrics.total_transfer_bytes;
  }
  if (a.segments.size() != b.segments.size()) return a.segments.size() < b.segments.size();
  if (a.metrics.total_transfer_bytes != b.metrics.total_transfer_bytes) {
    return a.metrics.total_transfer_bytes < b.metrics.total_transfer_bytes;
  }
  return a.segments < b.segments;
}

std::vector<Configuration> rank(std::vector<Configuration> configs, Objective objective,
                                std::size_t n) {
  TopN top(objective, n);
  for (Configuration& c : configs) top.push(std::move(c));
  return std::move(top).take();
}

TopN::TopN(Objective objective, std::size_t n) : objective_(objective), n_(n) {}

void TopN::push(Configuration config) {
  if (n_ == 0) return;
  auto worse = [this](const Configuration& a, const Configuration& b) {
    return ranks_before(a, b, objective_);
  };
  if (n_ == kAll) {
    heap_.push_back(std::move(config));
    return;
  }
  if (heap_.size() < n_) {
    heap_.push_back(std::move(config));
    std::push_heap(heap_.begin(), heap_.end(), worse);
  } else if (ranks_before(config, heap_.front(), objective_)) {
    std::pop_heap(heap_.begin(), heap_.end(), worse);
    heap_.back() = std::move(config);
    std::push_heap(heap_.begin(), heap_.end(), worse);
  }
}

void TopN::merge(TopN&& other) {
  for (Configuration& c : other.heap_) push(std::move(c));
  other.heap_.clear();
}

std::vector<Configuration> TopN::take() && {
  std::sort(heap_.begin(), heap_.end(), [this](const Configuration& a, const Configuration& b) {
    return ranks_before(a, b, objective_);
  });
  return std::move(heap_);
}

SearchResult search(const PartitionSchema& schema, const ProfileSet& profiles,
                    const Topology& topology, const SearchOptions& options) {
  const Evaluator evaluator(schema, profiles, topology);
  const std::vector<Pipeline> pipelines = enumerate_pipelines(topology);
  const std::size_t cut_count = schema.cut_points.size();

  // A work item fixes the pipeline and, for distributed pipelines, the index
  // of the first cut.
  struct WorkItem {
    std::size_t pipeline;
    std::optional<std::size_t> first_cut;
  };
  std::vector<WorkItem> work;
  for (std::size_t p = 0; p < pipelines.size(); ++p) {
    const std::size_t cuts_needed = pipelines[p].size() - 1;
    if (cuts_needed == 0) {
      work.push_back({p, std::nullopt});
      continue;
    }
    for (std::size_t i = 0; i + cuts_needed <= cut_count; ++i) work.push_back({p, i});
  }

  struct Partial {
    TopN top;
    std::uint64_t evaluated = 0;
    std::uint64_t accepted = 0;
    std::exception_ptr error;
  };

  unsigned threads = options.threads == 0 ? std::thread::hardware_concurrency()
                                          : options.threads;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(work.size())));

  std::vector<Partial> partials;
  partials.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    partials.push_back({TopN(options.objective, options.top_n), 0, 0, nullptr});
  }
  std::atomic<std::size_t> next_item{0};

  auto worker = [&](Partial& partial) {
    std::vector<Segment> segments;
    std::vector<std::size_t> chosen;
    auto consider = [&](const Pipeline& pipeline, std::span<const std::size_t> cuts) {
      fill_segments(pipeline, cuts, schema, segments);
      Configuration config{segments, evaluator(segments)};
      ++partial.evaluated;
      if (options.filter && !options.filter(config)) return;
      ++partial.accepted;
      partial.top.push(std::move(config));
    };
    try {
      for (std::size_t i = next_item++; i < work.size(); i = next_item++) {
        const WorkItem& item = work[i];
        const Pipeline& pipeline = pipelines[item.pipeline];
        if (!item.first_cut) {
          consider(pipeline, {});
          continue;
        }
        chosen.assign(1, *item.first_cut);
        for_each_combination(*item.first_cut + 1, cut_count, pipeline.size() - 2, chosen,
                             [&](const std::vector<std::size_t>& cuts) {
                               consider(pipeline, cuts);
                             });
      }
    } catch (...) {
      partial.error = std::current_exception();
      next_item = work.size();
    }
  };

  if (threads == 1) {
    worker(partials[0]);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, std::ref(partials[t]));
  }

  SearchResult result;
  TopN merged(options.objective, options.top_n);
  for (Partial& partial : partials) {
    if (partial.error) std::rethrow_exception(partial.error);
    result.evaluated += partial.evaluated;
    result.accepted += partial.accepted;
    merged.merge(std::move(partial.top));
  }
  result.ranked = std::move(merged).take();
  return result;
}

unsigned threads_from_environment() {
  const char* value = std::getenv("SCISSION_THREADS");
  if (value == nullptr || *value == '\0') return 0;
  unsigned threads = 0;
  const std::string_view text(value);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), threads);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError("SCISSION_THREADS must be a non-negative integer, got '" +
                    std::string(text) + "'");
  }
  return threads;
}

}  // namespace scission
