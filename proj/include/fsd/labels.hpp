#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fsd/graph.hpp"
#include "fsd/util.hpp"

namespace fsd {

enum class Label : std::uint8_t { legit = 0, spam = 1 };

inline std::string_view label_name(Label l) { return l == Label::spam ? "spam" : "legit"; }

inline std::optional<Label> parse_label(std::string_view s) {
  if (s == "spam") return Label::spam;
  if (s == "legit") return Label::legit;
  return std::nullopt;
}

// One "nodeid label" line per node.
inline void save_labels(const std::string& path, const std::vector<Label>& labels,
                        const std::vector<std::uint64_t>* ids = nullptr) {
  auto out = open_output(path);
  for (std::size_t u = 0; u < labels.size(); ++u)
    out << (ids ? (*ids)[u] : u) << ' ' << label_name(labels[u]) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<std::pair<std::uint64_t, Label>> read_label_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open label file: " + path);
  std::vector<std::pair<std::uint64_t, Label>> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    auto sp = sv.find_first_of(" \t");
    if (sp == std::string_view::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed label line");
    std::uint64_t id = require_u64(sv.substr(0, sp), "node id");
    auto label = parse_label(trim(sv.substr(sp)));
    if (!label)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown label '" +
                               std::string(trim(sv.substr(sp))) + "'");
    pairs.emplace_back(id, *label);
  }
  return pairs;
}

// Aligns raw-id labels to a graph's dense ids. The label set and the graph's
// node set must coincide exactly.
inline std::vector<Label> align_labels(const std::vector<std::pair<std::uint64_t, Label>>& pairs,
                                       const DirectedGraph& g,
                                       const std::vector<std::uint64_t>* ids = nullptr) {
  std::vector<Label> labels(g.node_count());
  std::vector<bool> seen(g.node_count(), false);
  for (auto [raw, label] : pairs) {
    NodeId dense;
    if (ids) {
      auto it = std::lower_bound(ids->begin(), ids->end(), raw);
      if (it == ids->end() || *it != raw)
        throw std::runtime_error("label for unknown node id " + std::to_string(raw));
      dense = static_cast<NodeId>(it - ids->begin());
    } else {
      if (raw >= g.node_count())
        throw std::runtime_error("label for unknown node id " + std::to_string(raw));
      dense = static_cast<NodeId>(raw);
    }
    if (seen[dense]) throw std::runtime_error("duplicate label for node id " + std::to_string(raw));
    seen[dense] = true;
    labels[dense] = label;
  }
  for (std::size_t u = 0; u < seen.size(); ++u)
    if (!seen[u])
      throw std::runtime_error("node " + std::to_string(ids ? (*ids)[u] : u) + " has no label");
  return labels;
}

}  // namespace fsd
