#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "fsd/graph.hpp"

namespace fsd {

// Canonical order of the 16 isomorphism classes of a directed triad, in
// mutual/asymmetric/null (MAN) notation. The first three classes contain an
// unconnected dyad pair around a lone arc or less; the remaining 13 are the
// connected classes used as features.
inline constexpr std::array<std::string_view, 16> kTriadNames = {
    "003", "012", "102", "021D", "021U", "021C", "111D", "111U",
    "030T", "030C", "201", "120D", "120U", "120C", "210", "300"};

inline constexpr std::size_t kTriadClassCount = 16;
inline constexpr std::size_t kFeatureClassCount = 13;
inline constexpr std::size_t kFeatureClassOffset = 3;

inline int triad_class_index(std::string_view name) {
  for (std::size_t i = 0; i < kTriadNames.size(); ++i)
    if (kTriadNames[i] == name) return static_cast<int>(i);
  return -1;
}

struct TriadCensus {
  std::array<std::int64_t, kTriadClassCount> counts{};
  std::size_t node_count = 0;

  // Number of node triples, n(n-1)(n-2)/6.
  std::int64_t triple_count() const {
    auto n = static_cast<std::int64_t>(node_count);
    return n * (n - 1) * (n - 2) / 6;
  }

  std::int64_t sum() const {
    std::int64_t s = 0;
    for (auto c : counts) s += c;
    return s;
  }

  // Counts of the 13 connected classes, as reals for downstream statistics.
  std::array<double, kFeatureClassCount> feature_counts() const {
    std::array<double, kFeatureClassCount> f{};
    for (std::size_t i = 0; i < kFeatureClassCount; ++i)
      f[i] = static_cast<double>(counts[i + kFeatureClassOffset]);
    return f;
  }
};

// 64-entry lookup from the tricode of an ordered node triple to its triad
// class. Arc bit order for a triple (a,b,c):
//   bit0 a->b, bit1 b->a, bit2 a->c, bit3 c->a, bit4 b->c, bit5 c->b.
// The table is generated from one hand-encoded exemplar per class by
// enumerating all 6 node permutations, and self-verifies that the 16 orbits
// are disjoint and cover all 64 codes.
class TricodeTable {
 public:
  static const TricodeTable& instance() {
    static const TricodeTable table;
    return table;
  }

  std::uint8_t class_of(unsigned code) const { return map_[code & 63u]; }

 private:
  TricodeTable() {
    struct Exemplar {
      std::string_view name;
      std::initializer_list<std::pair<int, int>> arcs;
    };
    // One representative per class; nodes are 0,1,2.
    static const Exemplar exemplars[16] = {
        {"003", {}},
        {"012", {{0, 1}}},
        {"102", {{0, 1}, {1, 0}}},
        {"021D", {{1, 0}, {1, 2}}},                          // out-star at 1
        {"021U", {{0, 1}, {2, 1}}},                          // in-star at 1
        {"021C", {{0, 1}, {1, 2}}},                          // directed path
        {"111D", {{0, 1}, {1, 0}, {2, 1}}},
        {"111U", {{0, 1}, {1, 0}, {1, 2}}},
        {"030T", {{0, 1}, {2, 1}, {0, 2}}},                  // transitive
        {"030C", {{1, 0}, {2, 1}, {0, 2}}},                  // cyclic
        {"201", {{0, 1}, {1, 0}, {1, 2}, {2, 1}}},
        {"120D", {{1, 0}, {1, 2}, {0, 2}, {2, 0}}},
        {"120U", {{0, 1}, {2, 1}, {0, 2}, {2, 0}}},
        {"120C", {{0, 1}, {1, 2}, {0, 2}, {2, 0}}},
        {"210", {{0, 1}, {1, 2}, {2, 1}, {0, 2}, {2, 0}}},
        {"300", {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}}},
    };
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                    {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    auto code_of = [](const bool adj[3][3], const int* p) {
      unsigned c = 0;
      if (adj[p[0]][p[1]]) c |= 1u;
      if (adj[p[1]][p[0]]) c |= 2u;
      if (adj[p[0]][p[2]]) c |= 4u;
      if (adj[p[2]][p[0]]) c |= 8u;
      if (adj[p[1]][p[2]]) c |= 16u;
      if (adj[p[2]][p[1]]) c |= 32u;
      return c;
    };
    map_.fill(0xFF);
    for (std::size_t k = 0; k < 16; ++k) {
      if (triad_class_index(exemplars[k].name) != static_cast<int>(k))
        throw std::logic_error("tricode exemplar order mismatch");
      bool adj[3][3] = {};
      for (auto [a, b] : exemplars[k].arcs) adj[a][b] = true;
      for (const auto& p : perms) {
        unsigned c = code_of(adj, p);
        if (map_[c] != 0xFF && map_[c] != k)
          throw std::logic_error("tricode orbit overlap at code " + std::to_string(c));
        map_[c] = static_cast<std::uint8_t>(k);
      }
    }
    for (unsigned c = 0; c < 64; ++c) {
      if (map_[c] == 0xFF) throw std::logic_error("tricode table incomplete at " + std::to_string(c));
      bool adj[3][3] = {};
      if (c & 1u) adj[0][1] = true;
      if (c & 2u) adj[1][0] = true;
      if (c & 4u) adj[0][2] = true;
      if (c & 8u) adj[2][0] = true;
      if (c & 16u) adj[1][2] = true;
      if (c & 32u) adj[2][1] = true;
      for (const auto& p : perms)
        if (map_[code_of(adj, p)] != map_[c])
          throw std::logic_error("tricode table not permutation-consistent at " + std::to_string(c));
    }
  }

  std::array<std::uint8_t, 64> map_{};
};

// 6-bit encoding of the arcs among an ordered node triple, in the bit order
// documented on TricodeTable.
inline unsigned tricode(const DirectedGraph& g, NodeId a, NodeId b, NodeId c) {
  if (a == b || a == c || b == c)
    throw std::invalid_argument("tricode requires three distinct nodes");
  g.require_node(a);
  g.require_node(b);
  g.require_node(c);
  unsigned code = 0;
  if (g.has_edge(a, b)) code |= 1u;
  if (g.has_edge(b, a)) code |= 2u;
  if (g.has_edge(a, c)) code |= 4u;
  if (g.has_edge(c, a)) code |= 8u;
  if (g.has_edge(b, c)) code |= 16u;
  if (g.has_edge(c, b)) code |= 32u;
  return code;
}

// Exhaustive census over all C(n,3) triples. Testing oracle for census();
// guarded to small graphs.
inline TriadCensus census_bruteforce(const DirectedGraph& g) {
  if (g.node_count() > 200)
    throw std::invalid_argument("census_bruteforce: graph too large (n > 200)");
  const auto& table = TricodeTable::instance();
  TriadCensus out;
  out.node_count = g.node_count();
  const NodeId n = static_cast<NodeId>(g.node_count());
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      for (NodeId k = j + 1; k < n; ++k) ++out.counts[table.class_of(tricode(g, i, j, k))];
  return out;
}

// Triad census in O(sum over linked pairs of deg(u)+deg(v)). For every pair
// of adjacent nodes v < u, triples whose third node touches neither v nor u
// are tallied in bulk as 012/102, connected triples are classified via the
// tricode table under a guard that counts each triple exactly once, and the
// empty class 003 is recovered from the triple total.
inline TriadCensus census(const DirectedGraph& g) {
  const std::size_t n = g.node_count();
  TriadCensus out;
  out.node_count = n;
  if (n < 3) {
    out.counts[0] = out.triple_count();  // zero
    return out;
  }
  const auto& table = TricodeTable::instance();

  std::vector<std::vector<NodeId>> nbr(n);
  for (NodeId v = 0; v < n; ++v) {
    auto o = g.out_neighbors(v);
    auto i = g.in_neighbors(v);
    nbr[v].reserve(o.size() + i.size());
    std::set_union(o.begin(), o.end(), i.begin(), i.end(), std::back_inserter(nbr[v]));
  }

  std::vector<std::uint8_t> rel(n, 0);
  std::vector<NodeId> third;
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : nbr[v]) {
      if (u <= v) continue;
      third.clear();
      auto mark = [&](std::span<const NodeId> list, std::uint8_t bit) {
        for (NodeId w : list) {
          if (w == u || w == v) continue;
          if (rel[w] == 0) third.push_back(w);
          rel[w] |= bit;
        }
      };
      mark(g.out_neighbors(v), 1);  // v->w
      mark(g.in_neighbors(v), 2);   // w->v
      mark(g.out_neighbors(u), 4);  // u->w
      mark(g.in_neighbors(u), 8);   // w->u
      const bool vu = g.has_edge(v, u);
      const bool uv = g.has_edge(u, v);
      out.counts[(vu && uv) ? 2 : 1] +=
          static_cast<std::int64_t>(n) - static_cast<std::int64_t>(third.size()) - 2;
      const unsigned base = (vu ? 1u : 0u) | (uv ? 2u : 0u);
      for (NodeId w : third) {
        const std::uint8_t r = rel[w];
        // Count {v,u,w} only from its canonical linked pair.
        if (u < w || (v < w && w < u && (r & 3u) == 0)) {
          const unsigned code = base | ((r & 1u) ? 4u : 0u) | ((r & 2u) ? 8u : 0u) |
                                ((r & 4u) ? 16u : 0u) | ((r & 8u) ? 32u : 0u);
          ++out.counts[table.class_of(code)];
        }
      }
      for (NodeId w : third) rel[w] = 0;
    }
  }
  std::int64_t connected = 0;
  for (std::size_t i = 1; i < kTriadClassCount; ++i) connected += out.counts[i];
  out.counts[0] = out.triple_count() - connected;
  return out;
}

}  // namespace fsd
