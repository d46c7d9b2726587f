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

#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <fstream>
#include <sstream>

#include "scission/error.hpp"

namespace scission::cli {
namespace {

std::string fixed(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
  return buffer;
}

// Round-trips through strtod.
std::string exact(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string pad(std::string text, std::size_t width) {
  if (text.size() < width) text.append(width - text.size(), ' ');
  return text;
}

std::string pad_left(std::string text, std::size_t width) {
  if (text.size() < width) text.insert(0, width - text.size(), ' ');
  return text;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string layer_range(const PartitionSchema& schema, std::size_t first_unit,
                        std::size_t last_unit) {
  const LayerId first = schema.units[first_unit].first_layer();
  const LayerId last = schema.units[last_unit].last_layer();
  if (first == last) return std::to_string(first);
  return std::to_string(first) + "-" + std::to_string(last);
}

std::string unit_range(std::size_t first, std::size_t last) {
  if (first == last) return std::to_string(first);
  return std::to_string(first) + "-" + std::to_string(last);
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  return text;
}

LayerId parse_layer(std::string_view text, std::string_view context) {
  if (text.empty()) throw DataError("missing layer id in '" + std::string(context) + "'");
  std::uint64_t value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') {
      throw DataError("bad layer id '" + std::string(text) + "' in '" + std::string(context) + "'");
    }
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
    if (value > std::numeric_limits<LayerId>::max()) {
      throw DataError("layer id out of range in '" + std::string(context) + "'");
    }
  }
  return static_cast<LayerId>(value);
}

}  // namespace

std::string describe(std::span<const Segment> segments, const PartitionSchema& schema) {
  std::string text;
  for (const Segment& s : segments) {
    if (!text.empty()) text += " | ";
    text += s.resource + ":" + layer_range(schema, s.first_unit, s.last_unit);
  }
  return text;
}

std::vector<Segment> parse_description(std::string_view text, const PartitionSchema& schema) {
  std::vector<Segment> segments;
  while (true) {
    const std::size_t bar = text.find('|');
    const std::string_view part = trim(text.substr(0, bar));
    const std::size_t colon = part.rfind(':');
    if (colon == std::string_view::npos || colon == 0) {
      throw DataError("expected resource:layers in '" + std::string(part) + "'");
    }
    const std::string_view range = part.substr(colon + 1);
    const std::size_t dash = range.find('-');
    const LayerId first = parse_layer(range.substr(0, dash), part);
    const LayerId last =
        dash == std::string_view::npos ? first : parse_layer(range.substr(dash + 1), part);

    Segment segment;
    segment.resource = std::string(part.substr(0, colon));
    segment.first_unit = schema.unit_containing(first);
    segment.last_unit = schema.unit_containing(last);
    if (schema.units[segment.first_unit].first_layer() != first ||
        schema.units[segment.last_unit].last_layer() != last ||
        segment.last_unit < segment.first_unit) {
      throw DataError("'" + std::string(part) + "' does not align with unit boundaries");
    }
    segments.push_back(std::move(segment));
    if (bar == std::string_view::npos) break;
    text.remove_prefix(bar + 1);
  }
  return segments;
}

std::string summarize(const Topology& topology) {
  std::string text;
  for (Tier tier : topology.tiers()) {
    if (!text.empty()) text += " -> ";
    text += std::string(to_string(tier)) + "[";
    const auto& ids = topology.resources_in(tier);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) text += ", ";
      text += ids[i];
    }
    text += "]";
  }
  return text + " (source " + topology.source() + ")";
}

PlanReport make_report(const PartitionSchema& schema, const Topology& topology,
                       const SearchResult& result, Objective objective, std::size_t top_n) {
  PlanReport report;
  report.model_name = schema.model_name;
  report.layer_count = schema.layer_count();
  report.unit_count = schema.unit_count();
  report.cut_count = schema.cut_points.size();
  report.topology = summarize(topology);
  report.objective = objective;
  report.top_n = top_n;
  report.evaluated = result.evaluated;
  report.accepted = result.accepted;
  for (std::size_t i = 0; i < result.ranked.size(); ++i) {
    const Configuration& config = result.ranked[i];
    report.rows.push_back({i + 1, describe(config.segments, schema), config});
  }
  return report;
}

void render_table(const PlanReport& report, std::ostream& out) {
  out << "model: " << report.model_name << "  layers: " << report.layer_count
      << "  units: " << report.unit_count << "  cuts: " << report.cut_count << "\n";
  out << "topology: " << report.topology << "\n";
  out << "objective: " << to_string(report.objective) << "  top: " << report.top_n << "\n";
  if (report.query) out << "query: " << *report.query << "\n";
  out << "configurations: " << report.evaluated << " evaluated";
  if (report.query) out << ", " << report.accepted << " satisfy constraints";
  out << "\n";
  for (const std::string& note : report.notes) out << "note: " << note << "\n";
  out << "\n";

  if (report.rows.empty()) {
    out << "no configuration satisfies constraints\n";
    return;
  }

  std::size_t width = std::string_view("configuration").size();
  for (const ReportRow& row : report.rows) width = std::max(width, row.description.size());
  out << pad("rank", 6) << pad("configuration", width) << pad_left("end-to-end (s)", 16)
      << pad_left("transfer (MB)", 15) << "\n";
  for (const ReportRow& row : report.rows) {
    const ConfigMetrics& m = row.config.metrics;
    out << pad(std::to_string(row.rank), 6) << pad(row.description, width)
        << pad_left(fixed(m.end_to_end_s, 6), 16)
        << pad_left(fixed(static_cast<double>(m.total_transfer_bytes) / 1e6, 6), 15) << "\n";
    for (const Segment& s : row.config.segments) {
      out << "      compute   " << pad(s.resource, 12) << pad("units " + unit_range(s.first_unit, s.last_unit), 16)
          << pad_left(fixed(m.per_resource_compute_s.at(s.resource), 6), 12) << " s\n";
    }
    for (const Hop& hop : m.per_hop_transfer) {
      out << "      transfer  " << pad(hop.from + " -> " + hop.to, 28)
          << pad_left(std::to_string(hop.bytes) + " B", 14) << pad_left(fixed(hop.seconds, 6), 12)
          << " s\n";
    }
  }
}

void write_csv(const PlanReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create csv directory '" + dir.string() + "': " + ec.message());

  auto open = [&](const char* name) {
    std::ofstream file(dir / name);
    if (!file) throw DataError("cannot write '" + (dir / name).string() + "'");
    return file;
  };

  std::ofstream configs = open("configurations.csv");
  configs << "rank,configuration,segments,end_to_end_s,compute_s,communication_s,"
             "total_transfer_bytes\n";
  std::ofstream breakdown = open("breakdown.csv");
  breakdown << "rank,kind,from,to,first_unit,last_unit,bytes,seconds\n";

  for (const ReportRow& row : report.rows) {
    const ConfigMetrics& m = row.config.metrics;
    configs << row.rank << "," << csv_field(row.description) << "," << row.config.segments.size()
            << "," << exact(m.end_to_end_s) << "," << exact(m.compute_s()) << ","
            << exact(m.communication_s()) << "," << m.total_transfer_bytes << "\n";
    for (const Segment& s : row.config.segments) {
      breakdown << row.rank << ",compute," << csv_field(s.resource) << ",," << s.first_unit << ","
                << s.last_unit << ",0," << exact(m.per_resource_compute_s.at(s.resource)) << "\n";
    }
    for (const Hop& hop : m.per_hop_transfer) {
      breakdown << row.rank << ",transfer," << csv_field(hop.from) << "," << csv_field(hop.to)
                << ",,," << hop.bytes << "," << exact(hop.seconds) << "\n";
    }
  }
}

void render_schema(const DnnGraph& graph, const PartitionSchema& schema, std::ostream& out) {
  out << "model=" << schema.model_name << " layers=" << graph.layer_count()
      << " cuts=" << schema.cut_points.size() << " units=" << schema.unit_count() << "\n";
  out << "cut points (after unit):";
  if (schema.cut_points.empty()) out << " none";
  for (std::size_t c : schema.cut_points) out << " " << c;
  out << "\n\n";
  out << pad("unit", 6) << pad("layers", 14) << pad_left("boundary bytes", 16) << "  kind\n";
  for (const ExecutionUnit& unit : schema.units) {
    std::string kind;
    if (unit.is_block()) {
      kind = "block of " + std::to_string(unit.layers.size()) + " layers";
    } else {
      const Layer& layer = graph.layer(unit.first_layer());
      kind = std::string(to_string(layer.kind)) + " " + layer.name;
    }
    out << pad(std::to_string(unit.unit_id), 6)
        << pad(layer_range(schema, unit.unit_id, unit.unit_id), 14)
        << pad_left(std::to_string(unit.boundary_output_bytes), 16) << "  " << kind << "\n";
  }
}

}  // namespace scission::cli
