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

#include "scission/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "json.hpp"
#include "scission/error.hpp"

namespace scission {
namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) {
  throw DataError("malformed profile document: " + what);
}

const json& field(const json& object, const char* name) {
  auto it = object.find(name);
  if (it == object.end()) malformed(std::string("missing field '") + name + "'");
  return *it;
}

double as_seconds(const json& value, const std::string& what) {
  if (!value.is_number()) malformed(what + " must be a number");
  double seconds = value.get<double>();
  if (!std::isfinite(seconds)) malformed(what + " must be finite");
  if (seconds < 0.0) {
    throw DataError("negative time " + std::to_string(seconds) + " s in " + what);
  }
  return seconds;
}

}  // namespace

double aggregate_runs(std::span<const double> samples) {
  if (samples.empty()) throw DataError("cannot aggregate an empty sample list");
  double sum = 0.0;
  for (double s : samples) {
    if (!(s >= 0.0)) throw DataError("negative time " + std::to_string(s) + " s in samples");
    sum += s;
  }
  return sum / static_cast<double>(samples.size());
}

ResourceProfile ingest_profile(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    malformed(e.what());
  }
  if (!doc.is_object()) malformed("top level must be an object");

  ResourceProfile profile;
  const json& resource = field(doc, "resource_id");
  if (!resource.is_string() || resource.get<std::string>().empty()) {
    malformed("'resource_id' must be a non-empty string");
  }
  profile.resource_id = resource.get<std::string>();

  const json& tier = field(doc, "tier");
  if (!tier.is_string()) malformed("'tier' must be a string");
  auto parsed_tier = parse_tier(tier.get<std::string>());
  if (!parsed_tier) malformed("unknown tier '" + tier.get<std::string>() + "'");
  profile.tier = *parsed_tier;

  const json& model = field(doc, "model_name");
  if (!model.is_string()) malformed("'model_name' must be a string");
  profile.model_name = model.get<std::string>();

  const json& runs = field(doc, "runs");
  if (!runs.is_number_integer() || runs.get<std::int64_t>() < 1) {
    throw DataError("profile '" + profile.resource_id + "': runs must be >= 1");
  }
  profile.runs = static_cast<int>(runs.get<std::int64_t>());

  const json& units = field(doc, "units");
  if (!units.is_array()) malformed("'units' must be an array");

  std::map<std::size_t, std::pair<double, std::optional<std::vector<double>>>> by_unit;
  for (std::size_t i = 0; i < units.size(); ++i) {
    const json& item = units[i];
    const std::string where = "units[" + std::to_string(i) + "]";
    if (!item.is_object()) malformed(where + " must be an object");
    const json& id = field(item, "unit_id");
    if (!id.is_number_integer() || id.get<std::int64_t>() < 0) {
      malformed(where + ".unit_id must be a non-negative integer");
    }
    const auto unit_id = static_cast<std::size_t>(id.get<std::int64_t>());
    if (by_unit.contains(unit_id)) {
      throw DataError("profile '" + profile.resource_id + "': duplicate unit " +
                      std::to_string(unit_id));
    }

    std::optional<std::vector<double>> samples;
    if (auto it = item.find("samples_s"); it != item.end() && !it->is_null()) {
      if (!it->is_array()) malformed(where + ".samples_s must be an array");
      samples.emplace();
      for (std::size_t k = 0; k < it->size(); ++k) {
        samples->push_back(
            as_seconds((*it)[k], where + ".samples_s[" + std::to_string(k) + "]"));
      }
    }
    double mean = 0.0;
    if (samples) {
      if (samples->empty()) malformed(where + ".samples_s is empty");
      mean = aggregate_runs(*samples);
    } else {
      mean = as_seconds(field(item, "mean_s"), where + ".mean_s");
    }
    by_unit.emplace(unit_id, std::make_pair(mean, std::move(samples)));
  }

  const bool any_samples = std::any_of(by_unit.begin(), by_unit.end(),
                                       [](const auto& kv) { return kv.second.second.has_value(); });
  if (any_samples) profile.raw_samples.emplace();
  std::size_t expected = 0;
  for (auto& [unit_id, entry] : by_unit) {
    if (unit_id != expected) {
      throw DataError("profile '" + profile.resource_id + "': missing unit " +
                      std::to_string(expected));
    }
    ++expected;
    profile.unit_times.push_back(entry.first);
    if (any_samples) {
      profile.raw_samples->push_back(entry.second.value_or(std::vector<double>{entry.first}));
    }
  }
  return profile;
}

ResourceProfile ingest_profile(std::string_view document, const PartitionSchema& schema) {
  ResourceProfile profile = ingest_profile(document);
  check_alignment(profile, schema);
  return profile;
}

void check_alignment(const ResourceProfile& profile, const PartitionSchema& schema) {
  if (profile.model_name != schema.model_name) {
    throw DataError("profile '" + profile.resource_id + "' is for model '" +
                    profile.model_name + "' but the graph is '" + schema.model_name +
                    "'");
  }
  if (profile.unit_count() < schema.unit_count()) {
    throw DataError("profile '" + profile.resource_id + "': missing unit " +
                    std::to_string(profile.unit_count()) + " (schema has " +
                    std::to_string(schema.unit_count()) + " units)");
  }
  if (profile.unit_count() > schema.unit_count()) {
    throw DataError("profile '" + profile.resource_id + "': unexpected unit " +
                    std::to_string(schema.unit_count()) + " (schema has " +
                    std::to_string(schema.unit_count()) + " units)");
  }
}

std::string serialize_profile(const ResourceProfile& profile) {
  json doc;
  doc["resource_id"] = profile.resource_id;
  doc["tier"] = std::string(to_string(profile.tier));
  doc["model_name"] = profile.model_name;
  doc["runs"] = profile.runs;
  json units = json::array();
  for (std::size_t u = 0; u < profile.unit_times.size(); ++u) {
    json entry = {{"unit_id", u}, {"mean_s", profile.unit_times[u]}};
    if (profile.raw_samples) entry["samples_s"] = (*profile.raw_samples)[u];
    units.push_back(std::move(entry));
  }
  doc["units"] = std::move(units);
  return doc.dump(1) + "\n";
}

double native_time(const ResourceProfile& profile) {
  double total = 0.0;
  for (double t : profile.unit_times) total += t;
  return total;
}

}  // namespace scission
