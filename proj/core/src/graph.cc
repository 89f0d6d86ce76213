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

#include "streamflow/graph.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "streamflow/errors.h"
#include "streamflow/format.h"

namespace streamflow {
namespace {

std::string Describe(const Edge& e) {
  return "(" + e.first() + ", " + e.second() + ")";
}

}  // namespace

Edge::Edge(NodeId u, NodeId v) {
  if (u == v) throw DataError("self-loop edge on node '" + u + "'");
  if (v < u) std::swap(u, v);
  first_ = std::move(u);
  second_ = std::move(v);
}

GraphSnapshot::GraphSnapshot(int period, std::set<NodeId> nodes,
                             std::set<Edge> edges)
    : period_(period), nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (const NodeId& v : nodes_) adjacency_[v];
  for (const Edge& e : edges_) {
    for (const NodeId* end : {&e.first(), &e.second()}) {
      if (!nodes_.count(*end)) {
        throw DataError("edge " + Describe(e) + " references unknown node '" +
                        *end + "'");
      }
    }
    adjacency_[e.first()].insert(e.second());
    adjacency_[e.second()].insert(e.first());
  }
  for (const auto& [v, nbrs] : adjacency_) {
    max_degree_ = std::max(max_degree_, nbrs.size());
  }
}

const std::set<NodeId>& GraphSnapshot::Neighbors(const NodeId& v) const {
  auto it = adjacency_.find(v);
  if (it == adjacency_.end()) {
    throw DataError("unknown node '" + v + "'");
  }
  return it->second;
}

GraphSnapshot GraphSnapshot::WithPeriod(int period) const {
  GraphSnapshot copy = *this;
  copy.period_ = period;
  return copy;
}

GraphSnapshot ApplyDelta(const GraphSnapshot& g, const GraphDelta& delta) {
  for (const NodeId& v : delta.added_nodes) {
    if (delta.removed_nodes.count(v)) {
      throw DataError("node '" + v + "' is both added and removed");
    }
  }
  for (const Edge& e : delta.added_edges) {
    if (delta.removed_edges.count(e)) {
      throw DataError("edge " + Describe(e) + " is both added and removed");
    }
  }

  std::set<Edge> edges = g.edges();
  for (const Edge& e : delta.removed_edges) {
    if (!edges.erase(e)) {
      throw DataError("cannot remove unknown edge " + Describe(e));
    }
  }

  std::set<NodeId> nodes = g.nodes();
  for (const NodeId& v : delta.removed_nodes) {
    if (!nodes.erase(v)) {
      throw DataError("cannot remove unknown node '" + v + "'");
    }
  }
  if (!delta.removed_nodes.empty()) {
    std::erase_if(edges, [&](const Edge& e) {
      return delta.removed_nodes.count(e.first()) ||
             delta.removed_nodes.count(e.second());
    });
  }

  for (const NodeId& v : delta.added_nodes) {
    if (!nodes.insert(v).second) {
      throw DataError("cannot add existing node '" + v + "'");
    }
  }
  for (const Edge& e : delta.added_edges) {
    for (const NodeId* end : {&e.first(), &e.second()}) {
      if (!nodes.count(*end)) {
        throw DataError("added edge " + Describe(e) +
                        " references unknown node '" + *end + "'");
      }
    }
    if (!edges.insert(e).second) {
      throw DataError("cannot add existing edge " + Describe(e));
    }
  }
  return GraphSnapshot(g.period() + 1, std::move(nodes), std::move(edges));
}

GraphDelta InvertDelta(const GraphSnapshot& before, const GraphDelta& delta) {
  GraphDelta inverse;
  inverse.added_nodes = delta.removed_nodes;
  inverse.removed_nodes = delta.added_nodes;
  inverse.removed_edges = delta.added_edges;
  inverse.added_edges = delta.removed_edges;
  for (const Edge& e : before.edges()) {
    if (delta.removed_nodes.count(e.first()) ||
        delta.removed_nodes.count(e.second())) {
      inverse.added_edges.insert(e);
    }
  }
  // Edges touching a node the inverse removes disappear with that node.
  std::erase_if(inverse.removed_edges, [&](const Edge& e) {
    return inverse.removed_nodes.count(e.first()) ||
           inverse.removed_nodes.count(e.second());
  });
  return inverse;
}

NodeDiff DiffNodes(const GraphSnapshot& prev, const GraphSnapshot& curr) {
  NodeDiff diff;
  for (const NodeId& v : curr.nodes()) {
    (prev.Contains(v) ? diff.surviving : diff.added).insert(v);
  }
  for (const NodeId& v : prev.nodes()) {
    if (!curr.Contains(v)) diff.removed.insert(v);
  }
  return diff;
}

GraphSnapshot ReadGraph(const std::filesystem::path& adjacency_csv,
                        const std::optional<std::filesystem::path>& nodes_csv,
                        int period) {
  std::set<NodeId> nodes;
  std::set<Edge> edges;

  std::ifstream in(adjacency_csv);
  if (!in) throw DataError("cannot open " + adjacency_csv.string());
  std::string line;
  std::size_t line_no = 0;
  const auto where = [&] {
    return adjacency_csv.string() + ":" + std::to_string(line_no) + ": ";
  };
  if (!std::getline(in, line)) throw DataError(adjacency_csv.string() + ": empty file");
  ++line_no;
  {
    auto header = SplitCsvLine(line);
    if (header.size() != 2 || header[0] != "from" || header[1] != "to") {
      throw DataError(where() + "expected header 'from,to'");
    }
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto fields = SplitCsvLine(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw DataError(where() + "expected two node ids");
    }
    NodeId u(fields[0]);
    NodeId v(fields[1]);
    if (u == v) throw DataError(where() + "self-loop on node '" + u + "'");
    nodes.insert(u);
    nodes.insert(v);
    edges.insert(Edge(std::move(u), std::move(v)));
  }

  if (nodes_csv && std::filesystem::exists(*nodes_csv)) {
    std::ifstream roster(*nodes_csv);
    if (!roster) throw DataError("cannot open " + nodes_csv->string());
    std::size_t roster_line = 0;
    if (!std::getline(roster, line) || Trim(line) != "node_id") {
      throw DataError(nodes_csv->string() + ":1: expected header 'node_id'");
    }
    ++roster_line;
    while (std::getline(roster, line)) {
      ++roster_line;
      auto id = Trim(line);
      if (id.empty()) continue;
      if (id.find(',') != std::string_view::npos) {
        throw DataError(nodes_csv->string() + ":" +
                        std::to_string(roster_line) + ": expected one node id");
      }
      nodes.emplace(id);
    }
  }
  return GraphSnapshot(period, std::move(nodes), std::move(edges));
}

void WriteGraph(const GraphSnapshot& g,
                const std::filesystem::path& adjacency_csv,
                const std::filesystem::path& nodes_csv) {
  std::ofstream adj(adjacency_csv, std::ios::binary);
  if (!adj) throw DataError("cannot write " + adjacency_csv.string());
  adj << "from,to\n";
  for (const Edge& e : g.edges()) adj << e.first() << ',' << e.second() << '\n';
  std::ofstream roster(nodes_csv, std::ios::binary);
  if (!roster) throw DataError("cannot write " + nodes_csv.string());
  roster << "node_id\n";
  for (const NodeId& v : g.nodes()) roster << v << '\n';
  if (!adj || !roster) throw DataError("write failed for " + adjacency_csv.string());
}

}  // namespace streamflow
