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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scission {

using LayerId = std::uint32_t;

enum class LayerKind {
  kInput,
  kConvolution,
  kPooling,
  kDense,
  kActivation,
  kNormalization,
  kAdd,
  kSoftmax,
  kOther,
};

std::string_view to_string(LayerKind kind);
// Accepts the interchange spellings; "merge" is an alias of "add".
LayerKind parse_layer_kind(std::string_view name);

struct Layer {
  LayerId id = 0;
  std::string name;
  LayerKind kind = LayerKind::kOther;
  // Serialized size of this layer's output tensor for the reference input.
  std::uint64_t output_bytes = 0;
};

struct Edge {
  LayerId from = 0;
  LayerId to = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// A single-input, single-output layer DAG. The constructor validates every
// structural invariant and throws DataError naming the offending element, so
// a DnnGraph that exists is always well formed.
class DnnGraph {
 public:
  DnnGraph(std::string model_name, std::uint64_t reference_input_bytes,
           std::vector<Layer> layers, std::vector<Edge> edges);

  const std::string& model_name() const { return model_name_; }
  // Bytes of the raw input (e.g. an encoded image) sent to the first resource.
  std::uint64_t reference_input_bytes() const { return reference_input_bytes_; }

  std::size_t layer_count() const { return layers_.size(); }
  // Indexed by layer id.
  const std::vector<Layer>& layers() const { return layers_; }
  const Layer& layer(LayerId id) const { return layers_.at(id); }
  // Sorted ascending by (from, to).
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const LayerId> successors(LayerId id) const;
  std::span<const LayerId> predecessors(LayerId id) const;

  LayerId input_id() const { return input_id_; }
  LayerId output_id() const { return output_id_; }

 private:
  std::string model_name_;
  std::uint64_t reference_input_bytes_;
  std::vector<Layer> layers_;
  std::vector<Edge> edges_;
  std::vector<std::vector<LayerId>> successors_;
  std::vector<std::vector<LayerId>> predecessors_;
  LayerId input_id_ = 0;
  LayerId output_id_ = 0;
};

// Parses the graph-interchange JSON document.
DnnGraph parse_graph(std::string_view document);
std::string serialize_graph(const DnnGraph& graph);

// Kahn's algorithm with ascending-id tie-break.
std::vector<LayerId> topological_order(const DnnGraph& graph);

// A layer, or a block of layers from a branching region, that is benchmarked
// and placed as a whole.
struct ExecutionUnit {
  std::size_t unit_id = 0;
  // In topological order.
  std::vector<LayerId> layers;
  // Bytes that cross the boundary after this unit. For the final unit this
  // is the output layer's size.
  std::uint64_t boundary_output_bytes = 0;

  bool is_block() const { return layers.size() > 1; }
  LayerId first_layer() const { return layers.front(); }
  LayerId last_layer() const { return layers.back(); }
};

struct PartitionSchema {
  std::string model_name;
  std::uint64_t reference_input_bytes = 0;
  std::vector<ExecutionUnit> units;
  // A cut at c splits the model after unit c. Ascending.
  std::vector<std::size_t> cut_points;
  // Indexed by layer id.
  std::vector<std::size_t> unit_of_layer;

  std::size_t unit_count() const { return units.size(); }
  std::size_t layer_count() const { return unit_of_layer.size(); }
  // Throws DataError for an unknown layer.
  std::size_t unit_containing(LayerId layer) const;
};

// Sweeps the topological order and keeps every boundary crossed by exactly
// one edge. The input layer always forms unit 0 and the boundary after it is
// never a cut; the layers between consecutive cuts become one unit.
PartitionSchema find_cut_points(const DnnGraph& graph);

// One node per execution unit, with an edge wherever a layer edge crosses
// between units. Node i carries unit i's boundary bytes.
DnnGraph condense(const DnnGraph& graph, const PartitionSchema& schema);

// Builds a chain of `layer_count` layers: input, then `layer_count - 2`
// hidden layers, then a softmax.
DnnGraph make_linear_graph(std::string model_name, std::size_t layer_count,
                           std::span<const std::uint64_t> output_bytes,
                           std::uint64_t reference_input_bytes);

}  // namespace scission
