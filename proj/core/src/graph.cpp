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

#include "scission/graph.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>
#include <string>
#include <utility>

#include "json.hpp"
#include "scission/error.hpp"

namespace scission {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<std::string_view, LayerKind>, 10> kKindNames = {{
    {"input", LayerKind::kInput},
    {"convolution", LayerKind::kConvolution},
    {"pooling", LayerKind::kPooling},
    {"dense", LayerKind::kDense},
    {"activation", LayerKind::kActivation},
    {"normalization", LayerKind::kNormalization},
    {"add", LayerKind::kAdd},
    {"merge", LayerKind::kAdd},
    {"softmax", LayerKind::kSoftmax},
    {"other", LayerKind::kOther},
}};

std::string edge_text(const Edge& e) {
  return "(" + std::to_string(e.from) + "," + std::to_string(e.to) + ")";
}

std::string join_ids(const std::vector<LayerId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(ids[i]);
  }
  return out;
}

[[noreturn]] void malformed(const std::string& what) {
  throw DataError("malformed graph document: " + what);
}

const json& field(const json& object, const char* name) {
  auto it = object.find(name);
  if (it == object.end()) malformed(std::string("missing field '") + name + "'");
  return *it;
}

std::uint64_t as_unsigned(const json& value, const std::string& what) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer() && value.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(value.get<std::int64_t>());
  }
  malformed(what + " must be a non-negative integer");
}

LayerId as_layer_id(const json& value, const std::string& what) {
  std::uint64_t id = as_unsigned(value, what);
  if (id > std::numeric_limits<LayerId>::max()) malformed(what + " is out of range");
  return static_cast<LayerId>(id);
}

}  // namespace

std::string_view to_string(LayerKind kind) {
  for (const auto& [name, k] : kKindNames) {
    if (k == kind) return name;
  }
  return "other";
}

LayerKind parse_layer_kind(std::string_view name) {
  for (const auto& [text, kind] : kKindNames) {
    if (text == name) return kind;
  }
  throw DataError("unknown layer kind '" + std::string(name) + "'");
}

DnnGraph::DnnGraph(std::string model_name, std::uint64_t reference_input_bytes,
                   std::vector<Layer> layers, std::vector<Edge> edges)
    : model_name_(std::move(model_name)),
      reference_input_bytes_(reference_input_bytes),
      layers_(std::move(layers)),
      edges_(std::move(edges)) {
  if (layers_.empty()) throw DataError("graph has no layers");

  std::sort(layers_.begin(), layers_.end(),
            [](const Layer& a, const Layer& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (i > 0 && layers_[i].id == layers_[i - 1].id) {
      throw DataError("duplicate layer id " + std::to_string(layers_[i].id));
    }
    if (layers_[i].id != i) {
      throw DataError("layer ids must be dense 0.." +
                      std::to_string(layers_.size() - 1) + ": missing id " +
                      std::to_string(i));
    }
  }

  const std::size_t n = layers_.size();
  std::sort(edges_.begin(), edges_.end());
  successors_.assign(n, {});
  predecessors_.assign(n, {});
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.from >= n || e.to >= n) {
      throw DataError("edge " + edge_text(e) + " references unknown layer " +
                      std::to_string(e.from >= n ? e.from : e.to));
    }
    if (e.from == e.to) throw DataError("cycle detected: edge " + edge_text(e));
    if (i > 0 && edges_[i - 1] == e) {
      throw DataError("duplicate edge " + edge_text(e));
    }
    successors_[e.from].push_back(e.to);
    predecessors_[e.to].push_back(e.from);
  }

  std::vector<LayerId> inputs;
  for (const Layer& layer : layers_) {
    if (layer.kind == LayerKind::kInput) inputs.push_back(layer.id);
  }
  if (inputs.size() != 1) {
    throw DataError("expected exactly one input layer, found " +
                    std::to_string(inputs.size()) +
                    (inputs.empty() ? "" : " (" + join_ids(inputs) + ")"));
  }
  input_id_ = inputs.front();
  if (!predecessors_[input_id_].empty()) {
    throw DataError("input layer " + std::to_string(input_id_) +
                    " has predecessors");
  }

  // Kahn's sweep; anything left unvisited sits on or behind a cycle.
  std::vector<std::size_t> remaining(n);
  std::vector<LayerId> ready;
  for (std::size_t v = 0; v < n; ++v) {
    remaining[v] = predecessors_[v].size();
    if (remaining[v] == 0) ready.push_back(static_cast<LayerId>(v));
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    LayerId v = ready.back();
    ready.pop_back();
    ++visited;
    for (LayerId w : successors_[v]) {
      if (--remaining[w] == 0) ready.push_back(w);
    }
  }
  if (visited != n) {
    for (std::size_t v = 0; v < n; ++v) {
      if (remaining[v] > 0) {
        throw DataError("cycle detected involving layer " + std::to_string(v));
      }
    }
  }

  for (std::size_t v = 0; v < n; ++v) {
    if (v != input_id_ && predecessors_[v].empty()) {
      throw DataError("unreachable node " + std::to_string(v) +
                      ": no path from input layer " + std::to_string(input_id_));
    }
  }

  std::vector<LayerId> sinks;
  for (std::size_t v = 0; v < n; ++v) {
    if (successors_[v].empty()) sinks.push_back(static_cast<LayerId>(v));
  }
  if (sinks.size() != 1) {
    throw DataError("multiple sinks: " + join_ids(sinks));
  }
  output_id_ = sinks.front();

  for (const Layer& layer : layers_) {
    if (layer.output_bytes == 0 && layer.id != output_id_) {
      throw DataError("layer " + std::to_string(layer.id) +
                      " has output_bytes = 0 but is not the output layer");
    }
  }
}

std::span<const LayerId> DnnGraph::successors(LayerId id) const {
  return successors_.at(id);
}

std::span<const LayerId> DnnGraph::predecessors(LayerId id) const {
  return predecessors_.at(id);
}

DnnGraph parse_graph(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    malformed(e.what());
  }
  if (!doc.is_object()) malformed("top level must be an object");

  const json& name = field(doc, "model_name");
  if (!name.is_string()) malformed("'model_name' must be a string");
  std::uint64_t input_bytes =
      as_unsigned(field(doc, "reference_input_bytes"), "'reference_input_bytes'");

  const json& layer_array = field(doc, "layers");
  if (!layer_array.is_array()) malformed("'layers' must be an array");
  std::vector<Layer> layers;
  layers.reserve(layer_array.size());
  for (std::size_t i = 0; i < layer_array.size(); ++i) {
    const json& item = layer_array[i];
    const std::string where = "layers[" + std::to_string(i) + "]";
    if (!item.is_object()) malformed(where + " must be an object");
    Layer layer;
    layer.id = as_layer_id(field(item, "id"), where + ".id");
    const json& layer_name = field(item, "name");
    const json& kind = field(item, "kind");
    if (!layer_name.is_string()) malformed(where + ".name must be a string");
    if (!kind.is_string()) malformed(where + ".kind must be a string");
    layer.name = layer_name.get<std::string>();
    try {
      layer.kind = parse_layer_kind(kind.get<std::string>());
    } catch (const DataError& e) {
      malformed(std::string(e.what()) + " in " + where);
    }
    layer.output_bytes = as_unsigned(field(item, "output_bytes"), where + ".output_bytes");
    layers.push_back(std::move(layer));
  }

  const json& edge_array = field(doc, "edges");
  if (!edge_array.is_array()) malformed("'edges' must be an array");
  std::vector<Edge> edges;
  edges.reserve(edge_array.size());
  for (std::size_t i = 0; i < edge_array.size(); ++i) {
    const json& item = edge_array[i];
    const std::string where = "edges[" + std::to_string(i) + "]";
    if (!item.is_array() || item.size() != 2) malformed(where + " must be [from, to]");
    edges.push_back({as_layer_id(item[0], where), as_layer_id(item[1], where)});
  }

  return DnnGraph(name.get<std::string>(), input_bytes, std::move(layers),
                  std::move(edges));
}

std::string serialize_graph(const DnnGraph& graph) {
  json doc;
  doc["model_name"] = graph.model_name();
  doc["reference_input_bytes"] = graph.reference_input_bytes();
  json layers = json::array();
  for (const Layer& layer : graph.layers()) {
    layers.push_back({{"id", layer.id},
                      {"name", layer.name},
                      {"kind", std::string(to_string(layer.kind))},
                      {"output_bytes", layer.output_bytes}});
  }
  doc["layers"] = std::move(layers);
  json edges = json::array();
  for (const Edge& e : graph.edges()) edges.push_back({e.from, e.to});
  doc["edges"] = std::move(edges);
  return doc.dump(1) + "\n";
}

std::vector<LayerId> topological_order(const DnnGraph& graph) {
  const std::size_t n = graph.layer_count();
  std::vector<std::size_t> remaining(n);
  std::priority_queue<LayerId, std::vector<LayerId>, std::greater<>> ready;
  for (LayerId v = 0; v < n; ++v) {
    remaining[v] = graph.predecessors(v).size();
    if (remaining[v] == 0) ready.push(v);
  }
  std::vector<LayerId> order;
  order.reserve(n);
  while (!ready.empty()) {
    LayerId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (LayerId w : graph.successors(v)) {
      if (--remaining[w] == 0) ready.push(w);
    }
  }
  return order;
}

std::size_t PartitionSchema::unit_containing(LayerId layer) const {
  if (layer >= unit_of_layer.size()) {
    throw DataError("layer " + std::to_string(layer) + " not found in schema of '" +
                    model_name + "' (" + std::to_string(unit_of_layer.size()) +
                    " layers)");
  }
  return unit_of_layer[layer];
}

PartitionSchema find_cut_points(const DnnGraph& graph) {
  const std::vector<LayerId> order = topological_order(graph);
  const std::size_t n = order.size();

  PartitionSchema schema;
  schema.model_name = graph.model_name();
  schema.reference_input_bytes = graph.reference_input_bytes();
  schema.unit_of_layer.assign(n, 0);

  ExecutionUnit current;
  auto close_unit = [&](std::uint64_t boundary_bytes) {
    current.unit_id = schema.units.size();
    current.boundary_output_bytes = boundary_bytes;
    for (LayerId id : current.layers) schema.unit_of_layer[id] = current.unit_id;
    schema.units.push_back(std::move(current));
    current = ExecutionUnit{};
  };

  // Every in-edge of the layer at position i comes from the prefix, so the
  // crossing count changes by out-degree minus in-degree.
  std::size_t crossing = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const LayerId v = order[i];
    crossing += graph.successors(v).size();
    crossing -= graph.predecessors(v).size();
    current.layers.push_back(v);
    if (i + 1 == n) {
      close_unit(graph.layer(v).output_bytes);
    } else if (i == 0) {
      close_unit(graph.layer(v).output_bytes);
    } else if (crossing == 1) {
      schema.cut_points.push_back(schema.units.size());
      close_unit(graph.layer(v).output_bytes);
    }
  }
  return schema;
}

DnnGraph condense(const DnnGraph& graph, const PartitionSchema& schema) {
  std::vector<Layer> layers;
  layers.reserve(schema.units.size());
  for (const ExecutionUnit& unit : schema.units) {
    Layer layer;
    layer.id = static_cast<LayerId>(unit.unit_id);
    layer.name = "unit_" + std::to_string(unit.unit_id);
    layer.kind = unit.unit_id == 0 ? LayerKind::kInput : LayerKind::kOther;
    layer.output_bytes = unit.boundary_output_bytes;
    layers.push_back(std::move(layer));
  }
  std::vector<Edge> edges;
  for (const Edge& e : graph.edges()) {
    auto from = static_cast<LayerId>(schema.unit_of_layer.at(e.from));
    auto to = static_cast<LayerId>(schema.unit_of_layer.at(e.to));
    if (from != to) edges.push_back({from, to});
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return DnnGraph(graph.model_name(), graph.reference_input_bytes(),
                  std::move(layers), std::move(edges));
}

DnnGraph make_linear_graph(std::string model_name, std::size_t layer_count,
                           std::span<const std::uint64_t> output_bytes,
                           std::uint64_t reference_input_bytes) {
  if (layer_count == 0) throw DataError("linear graph needs at least one layer");
  if (output_bytes.size() != layer_count) {
    throw DataError("linear graph needs one output size per layer");
  }
  std::vector<Layer> layers(layer_count);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < layer_count; ++i) {
    layers[i].id = static_cast<LayerId>(i);
    layers[i].output_bytes = output_bytes[i];
    if (i == 0) {
      layers[i].kind = LayerKind::kInput;
      layers[i].name = "input";
    } else if (i + 1 == layer_count) {
      layers[i].kind = LayerKind::kSoftmax;
      layers[i].name = "predictions";
    } else {
      layers[i].kind = LayerKind::kDense;
      layers[i].name = "layer_" + std::to_string(i);
    }
    if (i > 0) edges.push_back({static_cast<LayerId>(i - 1), static_cast<LayerId>(i)});
  }
  return DnnGraph(std::move(model_name), reference_input_bytes, std::move(layers),
                  std::move(edges));
}

}  // namespace scission
