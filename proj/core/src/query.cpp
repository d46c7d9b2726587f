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

#include "scission/query.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <cmath>
#include <optional>
#include <set>
#include <utility>

#include "scission/error.hpp"

namespace scission {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_resource_char(char c) {
  return is_word_char(c) || (c >= '0' && c <= '9') || c == '.' || c == '-';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Query parse(const Query& defaults) {
    Query query;
    query.objective = defaults.objective;
    query.top_n = defaults.top_n;
    std::optional<Objective> objective;
    std::optional<std::size_t> top_n;
    do {
      skip_space();
      const std::size_t clause_start = pos_;
      const std::string word = read_word("a clause");
      if (word == "minimize") {
        skip_space();
        const std::size_t at = pos_;
        const std::string what = read_word("'latency' or 'transfer'");
        Objective parsed;
        if (what == "latency") {
          parsed = Objective::kLatency;
        } else if (what == "transfer") {
          parsed = Objective::kTransfer;
        } else {
          throw QueryError("expected 'latency' or 'transfer', got '" + what + "'", at);
        }
        if (objective && *objective != parsed) {
          throw QueryError("contradictory objectives", clause_start);
        }
        objective = parsed;
      } else if (word == "topn") {
        skip_space();
        const std::size_t at = pos_;
        const std::size_t n = read_int();
        if (n == 0) throw QueryError("topn must be at least 1", at);
        if (top_n && *top_n != n) throw QueryError("contradictory topn values", clause_start);
        top_n = n;
      } else {
        query.constraints.push_back(parse_atom(word, clause_start));
      }
      skip_space();
    } while (consume(';'));
    if (pos_ != text_.size()) throw QueryError("expected ';' or end of query", pos_);

    if (objective) query.objective = *objective;
    if (top_n) query.top_n = *top_n;
    check_contradictions(query);
    return query;
  }

 private:
  Constraint parse_atom(const std::string& word, std::size_t start) {
    if (word == "use") return UseResource{parenthesised_resource()};
    if (word == "exclude") return ExcludeResource{parenthesised_resource()};
    if (word == "native") return NativeOn{parenthesised_resource()};
    if (word == "place") {
      expect('(');
      skip_space();
      const std::size_t at = pos_;
      const std::size_t layer = read_int();
      if (layer > std::numeric_limits<LayerId>::max()) {
        throw QueryError("layer id out of range", at);
      }
      expect(',');
      ResourceRef resource = read_resource();
      expect(')');
      return PlaceLayer{static_cast<LayerId>(layer), std::move(resource)};
    }
    if (word == "time") {
      ResourceRef resource = parenthesised_resource();
      const Comparison cmp = read_cmp();
      return TimeBound{std::move(resource), cmp, read_duration()};
    }
    if (word == "time_frac") {
      ResourceRef resource = parenthesised_resource();
      const Comparison cmp = read_cmp();
      skip_space();
      const std::size_t at = pos_;
      const double fraction = read_float();
      if (fraction > 1.0) throw QueryError("time_frac bound must be within [0, 1]", at);
      return TimeFraction{std::move(resource), cmp, fraction};
    }
    if (word == "transfer") {
      expect('(');
      ResourceRef from = read_resource();
      skip_space();
      if (text_.substr(pos_, 2) != "->") throw QueryError("expected '->'", pos_);
      pos_ += 2;
      ResourceRef to = read_resource();
      expect(')');
      const Comparison cmp = read_cmp();
      return HopTransferBound{std::move(from), std::move(to), cmp, read_size()};
    }
    if (word == "total_transfer") {
      const Comparison cmp = read_cmp();
      return TotalTransferBound{cmp, read_size()};
    }
    throw QueryError("unknown clause '" + word + "'", start);
  }

  static void check_contradictions(const Query& query) {
    std::set<std::string> excluded;
    for (const Constraint& c : query.constraints) {
      if (const auto* e = std::get_if<ExcludeResource>(&c)) excluded.insert(e->resource.name);
    }
    for (const Constraint& c : query.constraints) {
      const ResourceRef* required = std::visit(
          Overloaded{[](const UseResource& u) -> const ResourceRef* { return &u.resource; },
                     [](const NativeOn& n) -> const ResourceRef* { return &n.resource; },
                     [](const PlaceLayer& p) -> const ResourceRef* { return &p.resource; },
                     [](const auto&) -> const ResourceRef* { return nullptr; }},
          c);
      if (required && excluded.contains(required->name)) {
        throw QueryError("contradictory constraints: " + to_string(c) + " and exclude(" +
                         required->name + ")");
      }
    }
  }

  ResourceRef parenthesised_resource() {
    expect('(');
    ResourceRef resource = read_resource();
    expect(')');
    return resource;
  }

  ResourceRef read_resource() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_resource_char(text_[pos_])) {
      if (text_[pos_] == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') break;
      ++pos_;
    }
    if (pos_ == start) throw QueryError("expected a resource or tier name", start);
    return ResourceRef{std::string(text_.substr(start, pos_ - start))};
  }

  std::string read_word(const char* what) {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_word_char(text_[pos_])) ++pos_;
    if (pos_ == start) throw QueryError(std::string("expected ") + what, start);
    return std::string(text_.substr(start, pos_ - start));
  }

  std::size_t read_int() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (start == pos_ || ec != std::errc()) throw QueryError("expected an integer", start);
    return value;
  }

  double read_float() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    if (pos_ == start) throw QueryError("expected a number", start);
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      const std::size_t fraction_start = pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
      if (pos_ == fraction_start) throw QueryError("expected digits after '.'", pos_);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || !std::isfinite(value)) {
      throw QueryError("number out of range", start);
    }
    return value;
  }

  Comparison read_cmp() {
    skip_space();
    const std::string_view op = text_.substr(pos_, 2);
    if (op == "<=") {
      pos_ += 2;
      return Comparison::kAtMost;
    }
    if (op == ">=") {
      pos_ += 2;
      return Comparison::kAtLeast;
    }
    throw QueryError("expected '<=' or '>='", pos_);
  }

  double read_duration() {
    skip_space();
    const double value = read_float();
    skip_space();
    const std::size_t at = pos_;
    const std::string unit = read_word("a duration unit (s or ms)");
    if (unit == "s") return value;
    if (unit == "ms") return value / 1e3;
    throw QueryError("unknown duration unit '" + unit + "'", at);
  }

  std::uint64_t read_size() {
    skip_space();
    const double value = read_float();
    skip_space();
    const std::size_t at = pos_;
    const std::string unit = read_word("a size unit (B, KB or MB)");
    double multiplier = 0.0;
    if (unit == "B") {
      multiplier = 1.0;
    } else if (unit == "KB") {
      multiplier = 1e3;
    } else if (unit == "MB") {
      multiplier = 1e6;
    } else {
      throw QueryError("unknown size unit '" + unit + "'", at);
    }
    const double bytes = std::round(value * multiplier);
    if (bytes > 1.8e19) throw QueryError("size out of range", at);
    return static_cast<std::uint64_t>(bytes);
  }

  void expect(char c) {
    skip_space();
    if (!consume(c)) throw QueryError(std::string("expected '") + c + "'", pos_);
  }

  bool consume(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string format_number(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                 std::chars_format::fixed);
  return std::string(buffer, ptr);
}

std::string_view cmp_text(Comparison cmp) { return cmp == Comparison::kAtMost ? "<=" : ">="; }

bool compare(double value, Comparison cmp, double bound) {
  return cmp == Comparison::kAtMost ? value <= bound : value >= bound;
}

bool compare(std::uint64_t value, Comparison cmp, std::uint64_t bound) {
  return cmp == Comparison::kAtMost ? value <= bound : value >= bound;
}

bool matches(const ResourceRef& ref, std::string_view resource, const Topology& topology) {
  if (auto tier = parse_tier(ref.name)) return topology.tier_of(resource) == *tier;
  return ref.name == resource;
}

std::size_t unit_for_layer(const PartitionSchema& schema, LayerId layer) {
  if (layer >= schema.layer_count()) {
    throw QueryError("layer " + std::to_string(layer) + " not found in schema of '" +
                     schema.model_name + "' (" + std::to_string(schema.layer_count()) +
                     " layers)");
  }
  return schema.unit_of_layer[layer];
}

}  // namespace

Query parse_query(std::string_view text) { return Parser(text).parse(Query{}); }

Query parse_query(std::string_view text, const Query& defaults) {
  return Parser(text).parse(defaults);
}

std::string to_string(const Constraint& constraint) {
  return std::visit(
      Overloaded{
          [](const UseResource& c) { return "use(" + c.resource.name + ")"; },
          [](const ExcludeResource& c) { return "exclude(" + c.resource.name + ")"; },
          [](const NativeOn& c) { return "native(" + c.resource.name + ")"; },
          [](const PlaceLayer& c) {
            return "place(" + std::to_string(c.layer) + "," + c.resource.name + ")";
          },
          [](const TimeBound& c) {
            return "time(" + c.resource.name + ")" + std::string(cmp_text(c.cmp)) +
                   format_number(c.seconds) + "s";
          },
          [](const TimeFraction& c) {
            return "time_frac(" + c.resource.name + ")" + std::string(cmp_text(c.cmp)) +
                   format_number(c.fraction);
          },
          [](const HopTransferBound& c) {
            return "transfer(" + c.from.name + "->" + c.to.name + ")" +
                   std::string(cmp_text(c.cmp)) + std::to_string(c.bytes) + "B";
          },
          [](const TotalTransferBound& c) {
            return "total_transfer" + std::string(cmp_text(c.cmp)) + std::to_string(c.bytes) +
                   "B";
          },
      },
      constraint);
}

std::string to_string(const Query& query) {
  std::string text = "minimize " + std::string(to_string(query.objective)) + "; topn " +
                     std::to_string(query.top_n);
  for (const Constraint& c : query.constraints) text += "; " + to_string(c);
  return text;
}

void check_references(const Query& query, const PartitionSchema& schema,
                      const Topology& topology) {
  auto check = [&](const ResourceRef& ref) {
    if (auto tier = parse_tier(ref.name)) {
      if (topology.resources_in(*tier).empty()) {
        throw QueryError("tier '" + ref.name + "' has no resources in the topology");
      }
    } else if (!topology.has_resource(ref.name)) {
      throw QueryError("unknown resource or tier '" + ref.name + "'");
    }
  };
  for (const Constraint& c : query.constraints) {
    std::visit(Overloaded{
                   [&](const UseResource& x) { check(x.resource); },
                   [&](const ExcludeResource& x) { check(x.resource); },
                   [&](const NativeOn& x) { check(x.resource); },
                   [&](const PlaceLayer& x) {
                     unit_for_layer(schema, x.layer);
                     check(x.resource);
                   },
                   [&](const TimeBound& x) { check(x.resource); },
                   [&](const TimeFraction& x) { check(x.resource); },
                   [&](const HopTransferBound& x) {
                     check(x.from);
                     check(x.to);
                   },
                   [](const TotalTransferBound&) {},
               },
               c);
  }
}

bool satisfies(const Configuration& config, const Query& query,
               const PartitionSchema& schema, const Topology& topology) {
  const auto& segments = config.segments;
  const auto& metrics = config.metrics;
  auto uses = [&](const ResourceRef& ref) {
    return std::any_of(segments.begin(), segments.end(), [&](const Segment& s) {
      return matches(ref, s.resource, topology);
    });
  };
  auto compute_on = [&](const ResourceRef& ref) {
    double seconds = 0.0;
    for (const auto& [resource, t] : metrics.per_resource_compute_s) {
      if (matches(ref, resource, topology)) seconds += t;
    }
    return seconds;
  };

  for (const Constraint& constraint : query.constraints) {
    const bool ok = std::visit(
        Overloaded{
            [&](const UseResource& c) { return uses(c.resource); },
            [&](const ExcludeResource& c) { return !uses(c.resource); },
            [&](const NativeOn& c) {
              return segments.size() == 1 && matches(c.resource, segments[0].resource, topology);
            },
            [&](const PlaceLayer& c) {
              const std::size_t unit = unit_for_layer(schema, c.layer);
              for (const Segment& s : segments) {
                if (unit >= s.first_unit && unit <= s.last_unit) {
                  return matches(c.resource, s.resource, topology);
                }
              }
              return false;
            },
            [&](const TimeBound& c) { return compare(compute_on(c.resource), c.cmp, c.seconds); },
            [&](const TimeFraction& c) {
              const double total = metrics.compute_s();
              const double share = total > 0.0 ? compute_on(c.resource) / total : 0.0;
              return compare(share, c.cmp, c.fraction);
            },
            [&](const HopTransferBound& c) {
              std::uint64_t bytes = 0;
              for (const Hop& hop : metrics.per_hop_transfer) {
                if (matches(c.from, hop.from, topology) && matches(c.to, hop.to, topology)) {
                  bytes += hop.bytes;
                }
              }
              return compare(bytes, c.cmp, c.bytes);
            },
            [&](const TotalTransferBound& c) {
              return compare(metrics.total_transfer_bytes, c.cmp, c.bytes);
            },
        },
        constraint);
    if (!ok) return false;
  }
  return true;
}

QueryResult solve(const Query& query, const PartitionSchema& schema,
                  const ProfileSet& profiles, const Topology& topology, unsigned threads) {
  check_references(query, schema, topology);

  QueryResult result;
  for (const Constraint& c : query.constraints) {
    const auto* place = std::get_if<PlaceLayer>(&c);
    if (!place) continue;
    const ExecutionUnit& unit = schema.units[unit_for_layer(schema, place->layer)];
    std::string note = to_string(c) + ": layer " + std::to_string(place->layer) +
                       " runs in unit " + std::to_string(unit.unit_id);
    if (unit.is_block()) {
      note += ", a block of layers " + std::to_string(unit.first_layer()) + "-" +
              std::to_string(unit.last_layer()) + " that is pinned as a whole";
    }
    result.notes.push_back(std::move(note));
  }

  SearchOptions options;
  options.objective = query.objective;
  options.top_n = query.top_n;
  options.threads = threads;
  if (!query.constraints.empty()) {
    options.filter = [&](const Configuration& c) {
      return satisfies(c, query, schema, topology);
    };
  }
  result.search = search(schema, profiles, topology, options);
  return result;
}

}  // namespace scission
