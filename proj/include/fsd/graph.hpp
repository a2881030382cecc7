#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fsd/util.hpp"

namespace fsd {

using NodeId = std::uint32_t;

struct LoadReport {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;

  std::string to_string() const {
    std::string s;
    s += "nodes: " + std::to_string(nodes) + "\n";
    s += "edges: " + std::to_string(edges) + "\n";
    s += "self_loops_dropped: " + std::to_string(self_loops_dropped) + "\n";
    s += "duplicates_dropped: " + std::to_string(duplicates_dropped) + "\n";
    return s;
  }
};

// Immutable simple digraph over dense node ids [0, node_count). Adjacency
// lists are sorted, which makes edge queries O(log d) and iteration order
// deterministic.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  // Builds a graph from an edge list. Self-loops are dropped and duplicate
  // edges collapsed; both are tallied into `report` when given.
  static DirectedGraph from_edges(std::size_t node_count,
                                  std::vector<std::pair<NodeId, NodeId>> edges,
                                  LoadReport* report = nullptr) {
    DirectedGraph g;
    g.out_.assign(node_count, {});
    g.in_.assign(node_count, {});
    std::size_t loops = 0;
    for (auto [a, b] : edges) {
      if (a >= node_count || b >= node_count)
        throw std::invalid_argument("edge endpoint out of range: " + std::to_string(a) + " -> " +
                                    std::to_string(b));
      if (a == b) {
        ++loops;
        continue;
      }
      g.out_[a].push_back(b);
    }
    std::size_t dups = 0;
    for (auto& adj : g.out_) {
      std::sort(adj.begin(), adj.end());
      auto last = std::unique(adj.begin(), adj.end());
      dups += static_cast<std::size_t>(adj.end() - last);
      adj.erase(last, adj.end());
      adj.shrink_to_fit();
    }
    for (NodeId a = 0; a < node_count; ++a)
      for (NodeId b : g.out_[a]) g.in_[b].push_back(a);
    for (auto& adj : g.in_) adj.shrink_to_fit();  // already sorted: sources visited in order
    g.edges_ = 0;
    for (const auto& adj : g.out_) g.edges_ += adj.size();
    if (report) {
      report->nodes = node_count;
      report->edges = g.edges_;
      report->self_loops_dropped += loops;
      report->duplicates_dropped += dups;
    }
    return g;
  }

  std::size_t node_count() const noexcept { return out_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }
  bool has_node(NodeId u) const noexcept { return u < out_.size(); }

  void require_node(NodeId u) const {
    if (!has_node(u)) throw std::out_of_range("unknown node: " + std::to_string(u));
  }

  std::span<const NodeId> out_neighbors(NodeId u) const { return {out_[u].data(), out_[u].size()}; }
  std::span<const NodeId> in_neighbors(NodeId u) const { return {in_[u].data(), in_[u].size()}; }

  std::size_t outdegree(NodeId u) const { return out_[u].size(); }
  std::size_t indegree(NodeId u) const { return in_[u].size(); }

  bool has_edge(NodeId a, NodeId b) const {
    if (!has_node(a) || !has_node(b)) return false;
    return std::binary_search(out_[a].begin(), out_[a].end(), b);
  }

 private:
  std::vector<std::vector<NodeId>> out_;
  std::vector<std::vector<NodeId>> in_;
  std::size_t edges_ = 0;
};

struct LoadedGraph {
  DirectedGraph graph;
  std::vector<std::uint64_t> ids;  // dense id -> original id, ascending
  LoadReport report;
};

// Reads a "follower followee" edge list. Lines starting with '#' and blank
// lines are skipped; any other malformed line aborts with its line number.
// Original ids are remapped to dense ids in ascending original order, so the
// mapping does not depend on line order.
inline LoadedGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  std::size_t loops = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    std::uint64_t a, b;
    const char* p = sv.data();
    const char* end = sv.data() + sv.size();
    auto r1 = std::from_chars(p, end, a);
    if (r1.ec != std::errc()) goto malformed;
    p = r1.ptr;
    if (p == end || (*p != ' ' && *p != '\t')) goto malformed;
    while (p != end && (*p == ' ' || *p == '\t')) ++p;
    {
      auto r2 = std::from_chars(p, end, b);
      if (r2.ec != std::errc()) goto malformed;
      p = r2.ptr;
    }
    while (p != end && (*p == ' ' || *p == '\t')) ++p;
    if (p != end) goto malformed;
    if (a == b) {
      ++loops;
      continue;
    }
    raw.emplace_back(a, b);
    continue;
  malformed:
    throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed edge line: '" +
                             std::string(sv) + "'");
  }
  LoadedGraph result;
  result.ids.reserve(raw.size() * 2);
  for (auto [a, b] : raw) {
    result.ids.push_back(a);
    result.ids.push_back(b);
  }
  std::sort(result.ids.begin(), result.ids.end());
  result.ids.erase(std::unique(result.ids.begin(), result.ids.end()), result.ids.end());
  auto dense = [&](std::uint64_t v) {
    return static_cast<NodeId>(std::lower_bound(result.ids.begin(), result.ids.end(), v) -
                               result.ids.begin());
  };
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(raw.size());
  for (auto [a, b] : raw) edges.emplace_back(dense(a), dense(b));
  result.report.self_loops_dropped = loops;
  result.graph = DirectedGraph::from_edges(result.ids.size(), std::move(edges), &result.report);
  return result;
}

// Writes the graph in the edge-list format, one "follower followee" line per
// edge, ordered by (source, target). When `ids` is given, dense ids are
// translated back to the original ids.
inline void save_edge_list(const DirectedGraph& g, const std::string& path,
                           const std::vector<std::uint64_t>* ids = nullptr) {
  auto out = open_output(path);
  for (NodeId a = 0; a < g.node_count(); ++a) {
    std::uint64_t ia = ids ? (*ids)[a] : a;
    for (NodeId b : g.out_neighbors(a)) {
      std::uint64_t ib = ids ? (*ids)[b] : b;
      out << ia << ' ' << ib << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

struct DegreePair {
  std::size_t indegree = 0;
  std::size_t outdegree = 0;
};

inline DegreePair degrees(const DirectedGraph& g, NodeId u) {
  g.require_node(u);
  return {g.indegree(u), g.outdegree(u)};
}

struct DegreeTable {
  std::vector<std::int64_t> indegree;
  std::vector<std::int64_t> outdegree;
};

inline DegreeTable build_degree_table(const DirectedGraph& g) {
  DegreeTable t;
  t.indegree.resize(g.node_count());
  t.outdegree.resize(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    t.indegree[u] = static_cast<std::int64_t>(g.indegree(u));
    t.outdegree[u] = static_cast<std::int64_t>(g.outdegree(u));
  }
  return t;
}

// Induced subgraph on a center node plus its in- and out-neighbors.
// `members` maps local ids back to parent ids and is sorted ascending.
struct EgoNetwork {
  DirectedGraph graph;
  std::vector<NodeId> members;
  NodeId center = 0;  // local id of the center node
  bool capped = false;
};

// Extracts the ego network of u. When `cap` is set and u has more neighbors
// than the cap, the neighbor set is sampled uniformly without replacement
// using `seed`, and the result is flagged as capped.
inline EgoNetwork ego_network(const DirectedGraph& g, NodeId u,
                              std::optional<std::size_t> cap = std::nullopt,
                              std::uint64_t seed = 0) {
  g.require_node(u);
  auto outn = g.out_neighbors(u);
  auto inn = g.in_neighbors(u);
  std::vector<NodeId> nbrs;
  nbrs.reserve(outn.size() + inn.size());
  std::set_union(outn.begin(), outn.end(), inn.begin(), inn.end(), std::back_inserter(nbrs));

  EgoNetwork ego;
  if (cap && nbrs.size() > *cap) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < *cap; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, nbrs.size() - 1);
      std::swap(nbrs[i], nbrs[pick(rng)]);
    }
    nbrs.resize(*cap);
    std::sort(nbrs.begin(), nbrs.end());
    ego.capped = true;
  }

  auto& members = ego.members;
  members = std::move(nbrs);
  members.insert(std::lower_bound(members.begin(), members.end(), u), u);

  std::vector<std::int32_t> local(g.node_count(), -1);
  for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = static_cast<std::int32_t>(i);

  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (NodeId b : g.out_neighbors(members[i])) {
      std::int32_t j = local[b];
      if (j >= 0) edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    }
  }
  ego.graph = DirectedGraph::from_edges(members.size(), std::move(edges));
  ego.center = static_cast<NodeId>(std::lower_bound(members.begin(), members.end(), u) -
                                   members.begin());
  return ego;
}

}  // namespace fsd
