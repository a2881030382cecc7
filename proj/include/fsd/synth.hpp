#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "fsd/graph.hpp"
#include "fsd/labels.hpp"
#include "fsd/util.hpp"

namespace fsd {

// Generator parameters. Degree means reflect the measured population the
// detector targets; `scale` shrinks them so desk-size graphs stay realistic
// in shape (the in/out ratios the features exploit are preserved).
struct SynthConfig {
  std::size_t n_legit = 1000;
  std::size_t n_spam = 1000;
  double legit_mean_out = 462.0;
  double legit_mean_in = 401.5;  // descriptive; emerges from growth rather than being enforced
  double spam_mean_out = 866.5;
  double follow_back_prob = 0.82;
  double triadic_closure_prob = 0.15;
  std::uint64_t seed = 42;
  double scale = 0.1;
};

struct SynthResult {
  DirectedGraph graph;
  std::vector<Label> labels;
};

// Reciprocation probability for ordinary legit-legit follows.
inline constexpr double kOrganicReciprocity = 0.15;

namespace detail {

inline void validate(const SynthConfig& c) {
  auto prob_ok = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (c.n_legit < 3) throw std::invalid_argument("synth: n_legit must be >= 3");
  if (c.n_spam < 1) throw std::invalid_argument("synth: n_spam must be >= 1");
  if (!prob_ok(c.follow_back_prob) || !prob_ok(c.triadic_closure_prob))
    throw std::invalid_argument("synth: probabilities must lie in [0,1]");
  if (c.scale <= 0) throw std::invalid_argument("synth: scale must be positive");
  if (c.legit_mean_out <= 0 || c.spam_mean_out <= 0)
    throw std::invalid_argument("synth: degree targets must be positive");
  if (c.legit_mean_out * c.scale >= static_cast<double>(c.n_legit) ||
      c.spam_mean_out * c.scale > static_cast<double>(c.n_legit))
    throw std::invalid_argument("synth: scaled degree targets exceed the legitimate population");
}

}  // namespace detail

// Generates a labeled follow network. The legitimate subnetwork grows by
// preferential attachment with reciprocation plus triadic closure (a new
// follow closes a triangle through a random followee-of-followee with
// probability triadic_closure_prob). Spammers then each emit
// Poisson(spam_mean_out*scale) follows, clamped to at least one, to distinct
// uniformly random legitimate targets; each targeted user follows back with
// probability follow_back_prob. Deterministic for a fixed seed.
inline SynthResult generate(const SynthConfig& cfg) {
  detail::validate(cfg);
  std::mt19937_64 rng(cfg.seed);
  const std::size_t n_total = cfg.n_legit + cfg.n_spam;

  std::vector<std::vector<NodeId>> out_vec(n_total);       // insertion order, for random picks
  std::vector<std::unordered_set<NodeId>> out_set(n_total);
  std::vector<std::uint32_t> indeg(n_total, 0);
  std::vector<std::pair<NodeId, NodeId>> edges;
  auto follows = [&](NodeId a, NodeId b) { return out_set[a].count(b) > 0; };

  // New in-links feed the attachment pool, so targets are drawn with
  // probability proportional to indegree+1.
  std::vector<NodeId> pool;
  auto add_edge = [&](NodeId a, NodeId b) {
    out_vec[a].push_back(b);
    out_set[a].insert(b);
    ++indeg[b];
    edges.emplace_back(a, b);
    pool.push_back(b);
  };

  std::bernoulli_distribution closure(cfg.triadic_closure_prob);
  std::bernoulli_distribution follow_back(cfg.follow_back_prob);
  // Organic reciprocity between legitimate users. Much lower than
  // follow_back_prob: that rate describes users reacting to a targeted
  // follow, while ordinary follows (often aimed at celebrity accounts) are
  // mostly one-way. High organic reciprocity would also flatten every hub's
  // status toward 1, erasing the status signal the detector relies on.
  std::bernoulli_distribution legit_recip(kOrganicReciprocity);
  const double mean_out = cfg.legit_mean_out * cfg.scale;
  const double sigma = 0.9;  // log-space spread: heavy-tailed degree targets
  std::lognormal_distribution<double> degree_target(std::log(mean_out) - sigma * sigma / 2, sigma);

  for (NodeId i = 0; i < cfg.n_legit; ++i) {
    pool.push_back(i);
    if (i == 0) continue;
    auto want = static_cast<std::size_t>(std::llround(degree_target(rng)));
    const std::size_t k = std::min<std::size_t>(std::max<std::size_t>(want, 1), i);
    for (std::size_t t = 0; t < k; ++t) {
      NodeId target = i;
      if (closure(rng) && !out_vec[i].empty()) {
        std::uniform_int_distribution<std::size_t> pick1(0, out_vec[i].size() - 1);
        NodeId f = out_vec[i][pick1(rng)];
        if (!out_vec[f].empty()) {
          std::uniform_int_distribution<std::size_t> pick2(0, out_vec[f].size() - 1);
          NodeId c = out_vec[f][pick2(rng)];
          if (c != i && !follows(i, c)) target = c;
        }
      }
      if (target == i) {
        for (int tries = 0; tries < 12; ++tries) {
          std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
          NodeId c = pool[pick(rng)];
          if (c != i && !follows(i, c)) {
            target = c;
            break;
          }
        }
      }
      if (target == i) continue;  // saturated neighborhood; skip this follow
      add_edge(i, target);
      if (legit_recip(rng) && !follows(target, i)) add_edge(target, i);
    }
  }

  // Growth can leave an early node with no links at all; give such nodes one
  // follow so every node appears in the edge list.
  for (NodeId i = 0; i < cfg.n_legit; ++i) {
    if (!out_vec[i].empty() || indeg[i] > 0) continue;
    for (int tries = 0; tries < 32; ++tries) {
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      NodeId c = pool[pick(rng)];
      if (c == i) continue;
      add_edge(i, c);
      if (legit_recip(rng)) add_edge(c, i);
      break;
    }
  }

  // Spam attack phase. Targets are sampled without replacement via a partial
  // Fisher-Yates pass over the legitimate ids.
  std::poisson_distribution<long> spam_out(cfg.spam_mean_out * cfg.scale);
  std::vector<NodeId> scratch(cfg.n_legit);
  for (NodeId s = static_cast<NodeId>(cfg.n_legit); s < n_total; ++s) {
    long f = spam_out(rng);
    auto want = static_cast<std::size_t>(std::max<long>(f, 1));
    const std::size_t k = std::min(want, cfg.n_legit);
    for (NodeId i = 0; i < cfg.n_legit; ++i) scratch[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, cfg.n_legit - 1);
      std::swap(scratch[i], scratch[pick(rng)]);
      const NodeId t = scratch[i];
      add_edge(s, t);
      if (follow_back(rng)) add_edge(t, s);
    }
  }

  SynthResult result;
  result.graph = DirectedGraph::from_edges(n_total, std::move(edges));
  result.labels.assign(n_total, Label::legit);
  for (std::size_t s = cfg.n_legit; s < n_total; ++s) result.labels[s] = Label::spam;
  return result;
}

// Fraction of a spammer's follows that were reciprocated. The follow count
// is exactly the node's outdegree.
inline double attack_strength(const DirectedGraph& g, const std::vector<Label>& labels, NodeId s) {
  g.require_node(s);
  if (g.outdegree(s) == 0)
    throw std::invalid_argument("attack_strength: node " + std::to_string(s) + " has no follows");
  (void)labels;  // callers may warn on non-spammer nodes; value is defined regardless
  std::size_t reciprocated = 0;
  for (NodeId t : g.out_neighbors(s))
    if (g.has_edge(t, s)) ++reciprocated;
  return static_cast<double>(reciprocated) / static_cast<double>(g.outdegree(s));
}

// Sidecar metadata describing how a dataset was generated.
inline void save_synth_meta(const std::string& path, const SynthConfig& cfg) {
  auto out = open_output(path);
  out << "# synthetic dataset parameters\n";
  out << "n_legit: " << cfg.n_legit << "\n";
  out << "n_spam: " << cfg.n_spam << "\n";
  out << "legit_mean_out: " << fmt_double(cfg.legit_mean_out) << "\n";
  out << "legit_mean_in: " << fmt_double(cfg.legit_mean_in) << "\n";
  out << "spam_mean_out: " << fmt_double(cfg.spam_mean_out) << "\n";
  out << "follow_back_prob: " << fmt_double(cfg.follow_back_prob) << "\n";
  out << "triadic_closure_prob: " << fmt_double(cfg.triadic_closure_prob) << "\n";
  out << "scale: " << fmt_double(cfg.scale) << "\n";
  out << "seed: " << cfg.seed << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace fsd
