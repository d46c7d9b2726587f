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

#include "oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>

#include "scission/error.hpp"

namespace scission::testing {
namespace {

// Unit times are multiples of 2^-20 s so every partial sum is exact in
// double precision and ties between configurations are real ties.
double dyadic_time(std::mt19937_64& rng, std::uint64_t max_ticks) {
  std::uniform_int_distribution<std::uint64_t> ticks(0, max_ticks);
  return static_cast<double>(ticks(rng)) / static_cast<double>(1u << 20);
}

struct Skeleton {
  PartitionSchema schema;
  std::vector<Tier> tiers;
  std::map<Tier, std::vector<std::string>> resources;
  std::vector<std::string> all;
  std::string source;
  std::vector<Link> links;
  bool charge_return = false;
};

Skeleton random_skeleton(std::mt19937_64& rng, const InstanceShape& shape) {
  Skeleton s;
  std::uniform_int_distribution<std::size_t> unit_count(1, shape.max_units);
  const std::size_t units = unit_count(rng);
  std::bernoulli_distribution keep_cut(0.7);
  std::vector<std::size_t> cuts;
  for (std::size_t c = 1; c + 1 < units; ++c) {
    if (keep_cut(rng)) cuts.push_back(c);
  }
  std::uniform_int_distribution<std::uint64_t> bytes(1, 5'000'000);
  std::vector<std::uint64_t> boundary(units);
  for (auto& b : boundary) b = bytes(rng);
  s.schema = make_schema(units, cuts, boundary, std::uniform_int_distribution<std::uint64_t>(
                                                    1'000, 500'000)(rng));

  const unsigned mask = std::uniform_int_distribution<unsigned>(1, 7)(rng);
  std::uniform_int_distribution<std::size_t> per_tier(1, shape.max_resources_per_tier);
  for (Tier tier : kAllTiers) {
    if (!(mask & (1u << static_cast<unsigned>(tier)))) continue;
    s.tiers.push_back(tier);
    const std::size_t n = per_tier(rng);
    for (std::size_t i = 0; i < n; ++i) {
      std::string id = std::string(to_string(tier)) + std::to_string(i);
      s.resources[tier].push_back(id);
      s.all.push_back(id);
    }
  }
  s.source = s.all[std::uniform_int_distribution<std::size_t>(0, s.all.size() - 1)(rng)];
  std::uniform_real_distribution<double> latency(0.0, 0.1);
  std::uniform_real_distribution<double> log_bandwidth(5.7, 8.0);
  for (const std::string& a : s.all) {
    for (const std::string& b : s.all) {
      if (a == b) continue;
      s.links.push_back({a, b, latency(rng), std::pow(10.0, log_bandwidth(rng))});
    }
  }
  s.charge_return = shape.allow_result_return && std::bernoulli_distribution(0.25)(rng);
  return s;
}

Topology topology_of(const Skeleton& s) {
  return Topology(s.tiers, s.resources, s.source, s.links, s.charge_return);
}

ResourceProfile profile_of(const Skeleton& s, const std::string& id, Tier tier,
                           std::vector<double> times) {
  ResourceProfile p;
  p.resource_id = id;
  p.tier = tier;
  p.model_name = s.schema.model_name;
  p.runs = 5;
  p.unit_times = std::move(times);
  return p;
}

double link_seconds(const Instance& instance, const std::string& from, const std::string& to,
                    std::uint64_t bytes) {
  for (const Link& l : instance.topology.links()) {
    if (l.from == from && l.to == to) {
      return l.latency_s + static_cast<double>(bytes) * 8.0 / l.bandwidth_bps;
    }
  }
  throw DataError("oracle: no link " + from + " -> " + to);
}

bool ref_matches(const ResourceRef& ref, const std::string& resource, const Instance& instance) {
  if (ref.name == "device" || ref.name == "edge" || ref.name == "cloud") {
    return to_string(instance.topology.tier_of(resource)) == ref.name;
  }
  return ref.name == resource;
}

bool holds(double value, Comparison cmp, double bound) {
  if (cmp == Comparison::kAtMost) return value <= bound;
  return value >= bound;
}

ResourceRef random_ref(std::mt19937_64& rng, const Instance& instance) {
  std::vector<std::string> names;
  for (Tier tier : instance.topology.tiers()) names.emplace_back(to_string(tier));
  for (const std::string& id : instance.topology.resources()) names.push_back(id);
  return {names[std::uniform_int_distribution<std::size_t>(0, names.size() - 1)(rng)]};
}

}  // namespace

PartitionSchema make_schema(std::size_t units, const std::vector<std::size_t>& cuts,
                            const std::vector<std::uint64_t>& boundary_bytes,
                            std::uint64_t reference_input_bytes) {
  PartitionSchema schema;
  schema.model_name = "synthetic";
  schema.reference_input_bytes = reference_input_bytes;
  for (std::size_t u = 0; u < units; ++u) {
    ExecutionUnit unit;
    unit.unit_id = u;
    unit.layers = {static_cast<LayerId>(u)};
    unit.boundary_output_bytes = boundary_bytes.at(u);
    schema.units.push_back(unit);
    schema.unit_of_layer.push_back(u);
  }
  schema.cut_points = cuts;
  return schema;
}

Instance random_instance(std::mt19937_64& rng, const InstanceShape& shape) {
  Skeleton s = random_skeleton(rng, shape);
  ProfileSet profiles;
  std::bernoulli_distribution zero(0.1);
  for (const std::string& id : s.all) {
    std::vector<double> times(s.schema.unit_count());
    for (double& t : times) t = zero(rng) ? 0.0 : dyadic_time(rng, 50'000);
    Tier tier = Tier::kDevice;
    for (const auto& [t, ids] : s.resources) {
      if (std::find(ids.begin(), ids.end(), id) != ids.end()) tier = t;
    }
    profiles.emplace(id, profile_of(s, id, tier, std::move(times)));
  }
  return Instance{s.schema, std::move(profiles), topology_of(s)};
}

Instance random_proportional_instance(std::mt19937_64& rng, const InstanceShape& shape) {
  Skeleton s = random_skeleton(rng, shape);
  std::vector<double> base(s.schema.unit_count());
  for (double& b : base) b = 1e-4 + dyadic_time(rng, 50'000);
  // Distinct speed factors; resource k is (k + 1) times slower than the
  // fastest before shuffling.
  std::vector<double> speed(s.all.size());
  for (std::size_t k = 0; k < speed.size(); ++k) speed[k] = static_cast<double>(k + 1);
  std::shuffle(speed.begin(), speed.end(), rng);
  ProfileSet profiles;
  for (std::size_t r = 0; r < s.all.size(); ++r) {
    std::vector<double> times(base.size());
    for (std::size_t u = 0; u < base.size(); ++u) times[u] = base[u] * speed[r];
    Tier tier = Tier::kDevice;
    for (const auto& [t, ids] : s.resources) {
      if (std::find(ids.begin(), ids.end(), s.all[r]) != ids.end()) tier = t;
    }
    profiles.emplace(s.all[r], profile_of(s, s.all[r], tier, std::move(times)));
  }
  return Instance{s.schema, std::move(profiles), topology_of(s)};
}

std::vector<OracleConfig> brute_force_configurations(const Instance& instance) {
  const PartitionSchema& schema = instance.schema;
  const std::size_t units = schema.unit_count();
  const std::set<std::size_t> valid(schema.cut_points.begin(), schema.cut_points.end());
  const std::vector<std::string>& resources = instance.topology.resources();

  std::vector<OracleConfig> out;
  // Bit b of `splits` set means "split after unit b".
  for (std::uint64_t splits = 0; splits < (std::uint64_t{1} << (units - 1)); ++splits) {
    std::vector<std::size_t> boundaries;
    bool ok = true;
    for (std::size_t b = 0; b + 1 < units; ++b) {
      if (splits & (std::uint64_t{1} << b)) {
        boundaries.push_back(b);
        if (!valid.contains(b)) ok = false;
      }
    }
    if (!ok) continue;
    const std::size_t k = boundaries.size() + 1;
    if (k > 3) continue;

    std::vector<std::size_t> pick(k, 0);
    while (true) {
      bool ascending = true;
      for (std::size_t j = 1; j < k; ++j) {
        if (!(instance.topology.tier_of(resources[pick[j - 1]]) <
              instance.topology.tier_of(resources[pick[j]]))) {
          ascending = false;
        }
      }
      if (ascending) {
        OracleConfig config;
        std::size_t first = 0;
        for (std::size_t j = 0; j < k; ++j) {
          const std::size_t last = j + 1 < k ? boundaries[j] : units - 1;
          config.segments.push_back({resources[pick[j]], first, last});
          first = last + 1;
        }
        out.push_back(std::move(config));
      }
      std::size_t pos = 0;
      while (pos < k && ++pick[pos] == resources.size()) pick[pos++] = 0;
      if (pos == k) break;
    }
  }
  return out;
}

void oracle_evaluate(OracleConfig& config, const Instance& instance) {
  config.compute.clear();
  config.hops.clear();
  config.total_transfer_bytes = 0;
  double compute = 0.0;
  for (const Segment& s : config.segments) {
    const std::vector<double>& times = instance.profiles.at(s.resource).unit_times;
    double seconds = 0.0;
    for (std::size_t u = s.first_unit; u <= s.last_unit; ++u) seconds += times[u];
    config.compute.emplace_back(s.resource, seconds);
    compute += seconds;
  }
  auto hop = [&](const std::string& from, const std::string& to, std::uint64_t bytes) {
    config.hops.push_back({from, to, bytes, link_seconds(instance, from, to, bytes)});
    config.total_transfer_bytes += bytes;
  };
  const std::string& source = instance.topology.source();
  if (config.segments.front().resource != source) {
    hop(source, config.segments.front().resource, instance.schema.reference_input_bytes);
  }
  for (std::size_t j = 1; j < config.segments.size(); ++j) {
    hop(config.segments[j - 1].resource, config.segments[j].resource,
        instance.schema.units[config.segments[j - 1].last_unit].boundary_output_bytes);
  }
  if (instance.topology.charge_result_return() &&
      config.segments.back().resource != source) {
    hop(config.segments.back().resource, source,
        instance.schema.units.back().boundary_output_bytes);
  }
  double communication = 0.0;
  for (const Hop& h : config.hops) communication += h.seconds;
  config.end_to_end_s = compute + communication;
}

void oracle_sort(std::vector<OracleConfig>& configs, Objective objective) {
  auto key = [objective](const OracleConfig& c) {
    return objective == Objective::kLatency ? c.end_to_end_s
                                            : static_cast<double>(c.total_transfer_bytes);
  };
  std::sort(configs.begin(), configs.end(), [&](const OracleConfig& a, const OracleConfig& b) {
    if (key(a) != key(b)) return key(a) < key(b);
    if (a.segments.size() != b.segments.size()) return a.segments.size() < b.segments.size();
    if (a.total_transfer_bytes != b.total_transfer_bytes) {
      return a.total_transfer_bytes < b.total_transfer_bytes;
    }
    for (std::size_t j = 0; j < a.segments.size(); ++j) {
      const Segment& x = a.segments[j];
      const Segment& y = b.segments[j];
      if (x.resource != y.resource) return x.resource < y.resource;
      if (x.first_unit != y.first_unit) return x.first_unit < y.first_unit;
      if (x.last_unit != y.last_unit) return x.last_unit < y.last_unit;
    }
    return false;
  });
}

bool oracle_satisfies(const OracleConfig& config, const Query& query, const Instance& instance) {
  for (const Constraint& constraint : query.constraints) {
    if (const auto* c = std::get_if<UseResource>(&constraint)) {
      bool found = false;
      for (const Segment& s : config.segments) found |= ref_matches(c->resource, s.resource, instance);
      if (!found) return false;
    } else if (const auto* c = std::get_if<ExcludeResource>(&constraint)) {
      for (const Segment& s : config.segments) {
        if (ref_matches(c->resource, s.resource, instance)) return false;
      }
    } else if (const auto* c = std::get_if<NativeOn>(&constraint)) {
      if (config.segments.size() != 1) return false;
      if (!ref_matches(c->resource, config.segments[0].resource, instance)) return false;
    } else if (const auto* c = std::get_if<PlaceLayer>(&constraint)) {
      const std::size_t unit = instance.schema.unit_of_layer.at(c->layer);
      for (const Segment& s : config.segments) {
        if (s.first_unit <= unit && unit <= s.last_unit &&
            !ref_matches(c->resource, s.resource, instance)) {
          return false;
        }
      }
    } else if (const auto* c = std::get_if<TimeBound>(&constraint)) {
      double seconds = 0.0;
      for (const auto& [r, t] : config.compute) {
        if (ref_matches(c->resource, r, instance)) seconds += t;
      }
      if (!holds(seconds, c->cmp, c->seconds)) return false;
    } else if (const auto* c = std::get_if<TimeFraction>(&constraint)) {
      double mine = 0.0;
      double total = 0.0;
      for (const auto& [r, t] : config.compute) {
        total += t;
        if (ref_matches(c->resource, r, instance)) mine += t;
      }
      const double share = total == 0.0 ? 0.0 : mine / total;
      if (!holds(share, c->cmp, c->fraction)) return false;
    } else if (const auto* c = std::get_if<HopTransferBound>(&constraint)) {
      std::uint64_t bytes = 0;
      for (const Hop& h : config.hops) {
        if (ref_matches(c->from, h.from, instance) && ref_matches(c->to, h.to, instance)) {
          bytes += h.bytes;
        }
      }
      if (!holds(static_cast<double>(bytes), c->cmp, static_cast<double>(c->bytes))) return false;
    } else if (const auto* c = std::get_if<TotalTransferBound>(&constraint)) {
      if (!holds(static_cast<double>(config.total_transfer_bytes), c->cmp,
                 static_cast<double>(c->bytes))) {
        return false;
      }
    }
  }
  return true;
}

Query random_query(std::mt19937_64& rng, const Instance& instance) {
  while (true) {
    Query q;
    q.objective = std::bernoulli_distribution(0.7)(rng) ? Objective::kLatency : Objective::kTransfer;
    const std::size_t tops[] = {1, 2, 3, 5, TopN::kAll};
    q.top_n = tops[std::uniform_int_distribution<std::size_t>(0, 4)(rng)];
    const std::size_t count = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    std::uniform_int_distribution<int> kind(0, 7);
    std::uniform_int_distribution<int> cmp(0, 1);
    for (std::size_t i = 0; i < count; ++i) {
      const Comparison c = cmp(rng) ? Comparison::kAtLeast : Comparison::kAtMost;
      switch (kind(rng)) {
        case 0:
          q.constraints.push_back(UseResource{random_ref(rng, instance)});
          break;
        case 1:
          q.constraints.push_back(ExcludeResource{random_ref(rng, instance)});
          break;
        case 2:
          q.constraints.push_back(NativeOn{random_ref(rng, instance)});
          break;
        case 3: {
          const auto layer = static_cast<LayerId>(std::uniform_int_distribution<std::size_t>(
              0, instance.schema.layer_count() - 1)(rng));
          q.constraints.push_back(PlaceLayer{layer, random_ref(rng, instance)});
          break;
        }
        case 4:
          q.constraints.push_back(
              TimeBound{random_ref(rng, instance), c, dyadic_time(rng, 300'000)});
          break;
        case 5:
          q.constraints.push_back(TimeFraction{
              random_ref(rng, instance), c,
              std::uniform_int_distribution<int>(0, 20)(rng) / 20.0});
          break;
        case 6:
          q.constraints.push_back(HopTransferBound{
              random_ref(rng, instance), random_ref(rng, instance), c,
              std::uniform_int_distribution<std::uint64_t>(0, 6'000'000)(rng)});
          break;
        default:
          q.constraints.push_back(TotalTransferBound{
              c, std::uniform_int_distribution<std::uint64_t>(0, 12'000'000)(rng)});
          break;
      }
    }
    try {
      return parse_query(to_string(q));
    } catch (const QueryError&) {
      // Contradictory draw, e.g. use(x) with exclude(x).
    }
  }
}

std::size_t crossing_edges(const DnnGraph& graph, const std::vector<LayerId>& order,
                           std::size_t prefix) {
  std::vector<std::size_t> position(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
  std::size_t count = 0;
  for (const Edge& e : graph.edges()) {
    if (position[e.from] < prefix && position[e.to] >= prefix) ++count;
  }
  return count;
}

std::vector<LayerId> oracle_topological_order(const DnnGraph& graph) {
  const std::size_t n = graph.layer_count();
  std::vector<bool> placed(n, false);
  std::vector<LayerId> order;
  while (order.size() < n) {
    for (LayerId v = 0; v < n; ++v) {
      if (placed[v]) continue;
      bool ready = true;
      for (const Edge& e : graph.edges()) {
        if (e.to == v && !placed[e.from]) ready = false;
      }
      if (ready) {
        placed[v] = true;
        order.push_back(v);
        break;
      }
    }
  }
  return order;
}

DnnGraph random_branching_graph(std::mt19937_64& rng, std::size_t stages) {
  std::vector<Layer> layers;
  std::vector<Edge> edges;
  std::uniform_int_distribution<std::uint64_t> bytes(1, 1'000'000);
  auto add = [&](LayerKind kind) {
    const auto id = static_cast<LayerId>(layers.size());
    layers.push_back({id, "l" + std::to_string(id), kind, bytes(rng)});
    return id;
  };
  LayerId tail = add(LayerKind::kInput);
  std::bernoulli_distribution branch(0.4);
  std::uniform_int_distribution<int> branch_count(2, 3);
  std::uniform_int_distribution<int> branch_length(0, 3);
  for (std::size_t s = 0; s < stages; ++s) {
    if (!branch(rng)) {
      const LayerId next = add(LayerKind::kConvolution);
      edges.push_back({tail, next});
      tail = next;
      continue;
    }
    std::vector<LayerId> ends;
    bool has_skip = false;
    const int count = branch_count(rng);
    for (int b = 0; b < count; ++b) {
      int length = branch_length(rng);
      if (length == 0 && has_skip) length = 1;
      has_skip |= length == 0;
      LayerId prev = tail;
      for (int i = 0; i < length; ++i) {
        const LayerId next = add(LayerKind::kConvolution);
        edges.push_back({prev, next});
        prev = next;
      }
      ends.push_back(prev);
    }
    const LayerId merge = add(LayerKind::kAdd);
    for (LayerId e : ends) edges.push_back({e, merge});
    tail = merge;
  }
  const LayerId out = add(LayerKind::kSoftmax);
  edges.push_back({tail, out});
  return DnnGraph("random", 150'000, std::move(layers), std::move(edges));
}

}  // namespace scission::testing
