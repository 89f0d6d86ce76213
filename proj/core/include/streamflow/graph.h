// Copyright 2026 The Streamflow Authors.
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

#ifndef STREAMFLOW_GRAPH_H_
#define STREAMFLOW_GRAPH_H_

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace streamflow {

// Sensor ids are opaque strings taken verbatim from input files.
using NodeId = std::string;

// Undirected edge stored with its endpoints in ascending order.
class Edge {
 public:
  Edge(NodeId u, NodeId v);

  const NodeId& first() const { return first_; }
  const NodeId& second() const { return second_; }
  bool Touches(const NodeId& v) const { return first_ == v || second_ == v; }

  friend auto operator<=>(const Edge&, const Edge&) = default;

 private:
  NodeId first_;
  NodeId second_;
};

// One period of the streaming sensor network. Immutable once built; every
// edge endpoint is a node, no self-loops, no duplicates.
class GraphSnapshot {
 public:
  GraphSnapshot() = default;
  // Throws DataError if an edge references a node outside `nodes`.
  GraphSnapshot(int period, std::set<NodeId> nodes, std::set<Edge> edges);

  int period() const { return period_; }
  const std::set<NodeId>& nodes() const { return nodes_; }
  const std::set<Edge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool Contains(const NodeId& v) const { return nodes_.count(v) > 0; }

  // Throws DataError naming v if v is not a node.
  const std::set<NodeId>& Neighbors(const NodeId& v) const;
  std::size_t Degree(const NodeId& v) const { return Neighbors(v).size(); }
  std::size_t MaxDegree() const { return max_degree_; }

  // Same topology under a different period label.
  GraphSnapshot WithPeriod(int period) const;

 private:
  int period_ = 0;
  std::set<NodeId> nodes_;
  std::set<Edge> edges_;
  std::map<NodeId, std::set<NodeId>> adjacency_;
  std::size_t max_degree_ = 0;
};

struct GraphDelta {
  std::set<NodeId> added_nodes;
  std::set<NodeId> removed_nodes;
  std::set<Edge> added_edges;
  std::set<Edge> removed_edges;

  bool empty() const {
    return added_nodes.empty() && removed_nodes.empty() &&
           added_edges.empty() && removed_edges.empty();
  }
};

// G_t = G_{t-1} + delta. Edge removals apply first, then node removals (which
// drop incident edges), node additions and edge additions. The result carries
// period g.period() + 1. Throws DataError naming the offending id when the
// delta removes something absent, adds something already present, or adds an
// edge whose endpoint does not exist after the node updates.
GraphSnapshot ApplyDelta(const GraphSnapshot& g, const GraphDelta& delta);

// The delta that undoes ApplyDelta(before, delta), including the edges that
// were dropped implicitly with removed nodes.
GraphDelta InvertDelta(const GraphSnapshot& before, const GraphDelta& delta);

struct NodeDiff {
  std::set<NodeId> added;
  std::set<NodeId> surviving;
  std::set<NodeId> removed;
};

NodeDiff DiffNodes(const GraphSnapshot& prev, const GraphSnapshot& curr);

// Adjacency CSV (header "from,to") plus an optional roster CSV (header
// "node_id") listing isolated nodes. Duplicate rows of the same undirected
// edge are tolerated; self-loops are rejected.
GraphSnapshot ReadGraph(const std::filesystem::path& adjacency_csv,
                        const std::optional<std::filesystem::path>& nodes_csv,
                        int period);

// Writes every edge to adjacency_csv and the full roster to nodes_csv.
void WriteGraph(const GraphSnapshot& g,
                const std::filesystem::path& adjacency_csv,
                const std::filesystem::path& nodes_csv);

}  // namespace streamflow

#endif  // STREAMFLOW_GRAPH_H_
