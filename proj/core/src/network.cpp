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

#include "scission/network.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "scission/error.hpp"

namespace scission {
namespace {

using nlohmann::json;

struct NamedPreset {
  std::string_view name;
  LinkParams params;
};

// Upload figures for mobile and home broadband; edge-cloud is a datacentre
// uplink assumed for every edge to cloud connection.
constexpr std::array<NamedPreset, 4> kPresets = {{
    {"3g", {0.067, 1.6e6}},
    {"4g", {0.055, 12.4e6}},
    {"wired", {0.020, 20e6}},
    {"edge-cloud", {0.025, 50e6}},
}};

[[noreturn]] void malformed(const std::string& what) {
  throw DataError("malformed topology document: " + what);
}

const json& field(const json& object, const char* name) {
  auto it = object.find(name);
  if (it == object.end()) malformed(std::string("missing field '") + name + "'");
  return *it;
}

std::string as_string(const json& value, const std::string& what) {
  if (!value.is_string()) malformed(what + " must be a string");
  return value.get<std::string>();
}

Tier as_tier(const std::string& name) {
  auto tier = parse_tier(name);
  if (!tier) malformed("unknown tier '" + name + "'");
  return *tier;
}

double as_number(const json& value, const std::string& what) {
  if (!value.is_number()) malformed(what + " must be a number");
  return value.get<double>();
}

}  // namespace

double transfer_time(std::uint64_t bytes, const LinkParams& link) {
  return link.latency_s + static_cast<double>(bytes) * 8.0 / link.bandwidth_bps;
}

LinkParams preset(std::string_view name) {
  for (const auto& p : kPresets) {
    if (p.name == name) return p.params;
  }
  throw DataError("unknown network preset '" + std::string(name) +
                  "' (expected 3g, 4g, wired or edge-cloud)");
}

Topology::Topology(std::vector<Tier> tiers,
                   std::map<Tier, std::vector<std::string>> resources,
                   std::string source, std::vector<Link> links,
                   bool charge_result_return)
    : tiers_(std::move(tiers)),
      resources_(std::move(resources)),
      source_(std::move(source)),
      links_(std::move(links)),
      charge_result_return_(charge_result_return) {
  if (tiers_.empty()) throw DataError("topology has no tiers");
  for (std::size_t i = 1; i < tiers_.size(); ++i) {
    if (tiers_[i - 1] >= tiers_[i]) {
      throw DataError("topology tiers must be ascending (device, edge, cloud)");
    }
  }
  for (const auto& [tier, ids] : resources_) {
    if (std::find(tiers_.begin(), tiers_.end(), tier) == tiers_.end()) {
      throw DataError("resources listed for undeclared tier '" +
                      std::string(to_string(tier)) + "'");
    }
  }
  for (Tier tier : tiers_) {
    auto it = resources_.find(tier);
    if (it == resources_.end() || it->second.empty()) {
      throw DataError("tier '" + std::string(to_string(tier)) + "' has no resources");
    }
    for (const std::string& id : it->second) {
      if (id.empty()) throw DataError("empty resource id");
      if (!tier_by_resource_.emplace(id, tier).second) {
        throw DataError("duplicate resource '" + id + "'");
      }
      all_resources_.push_back(id);
    }
  }
  if (!has_resource(source_)) {
    throw DataError("source resource '" + source_ + "' is not declared");
  }
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Link& l = links_[i];
    const std::string name = "link " + l.from + " -> " + l.to;
    if (!has_resource(l.from)) throw DataError(name + ": unknown resource '" + l.from + "'");
    if (!has_resource(l.to)) throw DataError(name + ": unknown resource '" + l.to + "'");
    if (l.from == l.to) throw DataError(name + ": a link needs two distinct resources");
    if (!(l.latency_s >= 0.0) || std::isinf(l.latency_s)) {
      throw DataError(name + ": latency must be finite and non-negative");
    }
    if (!(l.bandwidth_bps > 0.0)) throw DataError(name + ": bandwidth must be positive");
    if (!link_index_.emplace(std::make_pair(l.from, l.to), i).second) {
      throw DataError("duplicate " + name);
    }
  }
}

const std::vector<std::string>& Topology::resources_in(Tier tier) const {
  static const std::vector<std::string> kEmpty;
  auto it = resources_.find(tier);
  return it == resources_.end() ? kEmpty : it->second;
}

bool Topology::has_resource(std::string_view id) const {
  return tier_by_resource_.find(id) != tier_by_resource_.end();
}

Tier Topology::tier_of(std::string_view id) const {
  auto it = tier_by_resource_.find(id);
  if (it == tier_by_resource_.end()) {
    throw DataError("unknown resource '" + std::string(id) + "'");
  }
  return it->second;
}

const Link* Topology::find_link(std::string_view from, std::string_view to) const {
  auto it = link_index_.find(std::make_pair(std::string(from), std::string(to)));
  return it == link_index_.end() ? nullptr : &links_[it->second];
}

const Link& Topology::link(std::string_view from, std::string_view to) const {
  const Link* l = find_link(from, to);
  if (!l) {
    throw DataError("missing link " + std::string(from) + " -> " + std::string(to));
  }
  return *l;
}

void Topology::require_pipeline_links() const {
  for (const std::string& id : all_resources_) {
    if (id != source_) link(source_, id);
  }
  for (const std::string& a : all_resources_) {
    for (const std::string& b : all_resources_) {
      if (tier_of(a) < tier_of(b)) link(a, b);
    }
  }
  if (charge_result_return_) {
    for (const std::string& id : all_resources_) {
      if (id != source_) link(id, source_);
    }
  }
}

Topology parse_topology(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    malformed(e.what());
  }
  if (!doc.is_object()) malformed("top level must be an object");

  const json& tier_array = field(doc, "tiers");
  if (!tier_array.is_array()) malformed("'tiers' must be an array");
  std::vector<Tier> tiers;
  for (const json& t : tier_array) tiers.push_back(as_tier(as_string(t, "tier")));

  const json& resource_map = field(doc, "resources");
  if (!resource_map.is_object()) malformed("'resources' must be an object keyed by tier");
  std::map<Tier, std::vector<std::string>> resources;
  for (const auto& [tier_name, ids] : resource_map.items()) {
    if (!ids.is_array()) malformed("resources." + tier_name + " must be an array");
    auto& bucket = resources[as_tier(tier_name)];
    for (const json& id : ids) bucket.push_back(as_string(id, "resource id"));
  }

  std::string source = as_string(field(doc, "source"), "'source'");

  const json& link_array = field(doc, "links");
  if (!link_array.is_array()) malformed("'links' must be an array");
  std::vector<Link> links;
  for (std::size_t i = 0; i < link_array.size(); ++i) {
    const json& item = link_array[i];
    const std::string where = "links[" + std::to_string(i) + "]";
    if (!item.is_object()) malformed(where + " must be an object");
    Link link;
    link.from = as_string(field(item, "from"), where + ".from");
    link.to = as_string(field(item, "to"), where + ".to");
    const bool has_preset = item.contains("preset");
    const bool has_latency = item.contains("latency_ms");
    const bool has_bandwidth = item.contains("bandwidth_mbps");
    if (has_preset) {
      if (has_latency || has_bandwidth) {
        malformed(where + " gives both a preset and explicit latency/bandwidth");
      }
      LinkParams p = preset(as_string(item["preset"], where + ".preset"));
      link.latency_s = p.latency_s;
      link.bandwidth_bps = p.bandwidth_bps;
    } else {
      if (!has_latency || !has_bandwidth) {
        malformed(where + " needs a preset or both latency_ms and bandwidth_mbps");
      }
      link.latency_s = as_number(item["latency_ms"], where + ".latency_ms") / 1e3;
      link.bandwidth_bps = as_number(item["bandwidth_mbps"], where + ".bandwidth_mbps") * 1e6;
    }
    links.push_back(std::move(link));
  }

  bool charge_return = false;
  if (auto it = doc.find("charge_result_return"); it != doc.end()) {
    if (!it->is_boolean()) malformed("'charge_result_return' must be a boolean");
    charge_return = it->get<bool>();
  }

  return Topology(std::move(tiers), std::move(resources), std::move(source),
                  std::move(links), charge_return);
}

std::string serialize_topology(const Topology& topology) {
  json doc;
  json tiers = json::array();
  json resources = json::object();
  for (Tier tier : topology.tiers()) {
    tiers.push_back(std::string(to_string(tier)));
    resources[std::string(to_string(tier))] = topology.resources_in(tier);
  }
  doc["tiers"] = std::move(tiers);
  doc["resources"] = std::move(resources);
  doc["source"] = topology.source();
  json links = json::array();
  for (const Link& l : topology.links()) {
    links.push_back({{"from", l.from},
                     {"to", l.to},
                     {"latency_ms", l.latency_s * 1e3},
                     {"bandwidth_mbps", l.bandwidth_bps / 1e6}});
  }
  doc["links"] = std::move(links);
  if (topology.charge_result_return()) doc["charge_result_return"] = true;
  return doc.dump(1) + "\n";
}

}  // namespace scission
