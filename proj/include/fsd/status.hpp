#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "fsd/graph.hpp"

namespace fsd {

// Social status of every user: indegree/outdegree, with a zero outdegree
// treated as 1 so the value stays finite and monotone in indegree.
struct StatusTable {
  std::vector<double> status;
};

inline StatusTable build_status_table(const DegreeTable& degrees) {
  StatusTable t;
  t.status.resize(degrees.indegree.size());
  for (std::size_t u = 0; u < t.status.size(); ++u) {
    const double in = static_cast<double>(degrees.indegree[u]);
    const double out = static_cast<double>(degrees.outdegree[u]);
    t.status[u] = out > 0 ? in / out : in;
  }
  return t;
}

struct PlpResult {
  double value = 0;
  bool no_followees = false;
};

// Positive link probability: the fraction of u's followees whose status is
// strictly higher than u's. Ties count as negative links.
inline PlpResult plp(const DirectedGraph& g, const StatusTable& st, NodeId u) {
  g.require_node(u);
  auto followees = g.out_neighbors(u);
  if (followees.empty()) return {0.0, true};
  std::size_t pos = 0;
  for (NodeId v : followees)
    if (st.status[v] > st.status[u]) ++pos;
  return {static_cast<double>(pos) / static_cast<double>(followees.size()), false};
}

struct FolloweeStatus {
  double value = 0;
  bool no_followees = false;
};

inline FolloweeStatus avg_followee_status(const DirectedGraph& g, const StatusTable& st, NodeId u) {
  g.require_node(u);
  auto followees = g.out_neighbors(u);
  if (followees.empty()) return {0.0, true};
  double sum = 0;
  for (NodeId v : followees) sum += st.status[v];
  return {sum / static_cast<double>(followees.size()), false};
}

// Min-max normalization over one extraction batch. A batch of identical
// values maps to all zeros.
inline std::vector<double> normalize_batch(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("normalize_batch: empty batch");
  double lo = values[0], hi = values[0];
  for (double v : values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  std::vector<double> out(values.size(), 0.0);
  if (hi == lo) return out;
  const double span = hi - lo;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) / span;
  return out;
}

struct SsFeatures {
  double status = 0;
  double followee_status_raw = 0;
  double followee_status_norm = 0;
  double plp = 0;
  bool no_followees = false;
};

// Status features for a batch of users. The followee-status column is
// min-max normalized across the batch; callers persist the batch (min,max)
// so single users can be scored on the same scale later.
inline std::vector<SsFeatures> ss_feature_batch(const DirectedGraph& g, const StatusTable& st,
                                                std::span<const NodeId> users) {
  std::vector<SsFeatures> out(users.size());
  std::vector<double> raw(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    const NodeId u = users[i];
    g.require_node(u);
    auto f = avg_followee_status(g, st, u);
    auto p = plp(g, st, u);
    out[i].status = st.status[u];
    out[i].followee_status_raw = f.value;
    out[i].plp = p.value;
    out[i].no_followees = f.no_followees;
    raw[i] = f.value;
  }
  auto norm = normalize_batch(raw);
  for (std::size_t i = 0; i < users.size(); ++i) out[i].followee_status_norm = norm[i];
  return out;
}

}  // namespace fsd
