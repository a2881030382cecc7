#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsd/features.hpp"
#include "fsd/metrics.hpp"
#include "fsd/parallel.hpp"
#include "fsd/util.hpp"

namespace fsd {

// Binary entropy of a (spam, legit) count pair, in bits.
inline double entropy_bits(std::int64_t spam, std::int64_t legit) {
  const std::int64_t n = spam + legit;
  if (n == 0 || spam == 0 || legit == 0) return 0.0;
  const double ps = static_cast<double>(spam) / static_cast<double>(n);
  const double pl = static_cast<double>(legit) / static_cast<double>(n);
  return -(ps * std::log2(ps) + pl * std::log2(pl));
}

// Information gain of splitting `column` at `threshold` (value <= threshold
// goes left): class entropy minus the size-weighted entropy of the sides.
inline double info_gain(std::span<const double> column, std::span<const Label> labels,
                        double threshold) {
  if (column.size() != labels.size())
    throw std::invalid_argument("info_gain: column/label length mismatch");
  std::int64_t ls = 0, ll = 0, rs = 0, rl = 0;
  for (std::size_t i = 0; i < column.size(); ++i) {
    const bool left = column[i] <= threshold;
    if (labels[i] == Label::spam)
      (left ? ls : rs) += 1;
    else
      (left ? ll : rl) += 1;
  }
  const double n = static_cast<double>(column.size());
  const double cond = (static_cast<double>(ls + ll) / n) * entropy_bits(ls, ll) +
                      (static_cast<double>(rs + rl) / n) * entropy_bits(rs, rl);
  return entropy_bits(ls + rs, ll + rl) - cond;
}

struct SplitResult {
  double threshold = std::numeric_limits<double>::quiet_NaN();  // NaN: no usable split
  double gain = 0.0;
};

namespace detail {

// Scans midpoints between consecutive distinct sorted values and returns the
// max-gain threshold, requiring at least `min_leaf` rows on each side. Ties
// keep the smaller threshold.
inline SplitResult best_split_sorted(std::span<const std::pair<double, Label>> sorted,
                                     std::size_t min_leaf) {
  const std::size_t n = sorted.size();
  std::int64_t spam_total = 0;
  for (const auto& [v, l] : sorted) spam_total += (l == Label::spam);
  const std::int64_t legit_total = static_cast<std::int64_t>(n) - spam_total;
  const double total_entropy = entropy_bits(spam_total, legit_total);

  SplitResult best;
  std::int64_t ls = 0, ll = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (sorted[i].second == Label::spam)
      ++ls;
    else
      ++ll;
    if (sorted[i].first == sorted[i + 1].first) continue;
    const std::size_t left_n = i + 1;
    if (left_n < min_leaf || n - left_n < min_leaf) continue;
    const std::int64_t rs = spam_total - ls;
    const std::int64_t rl = legit_total - ll;
    const double cond =
        (static_cast<double>(left_n) / static_cast<double>(n)) * entropy_bits(ls, ll) +
        (static_cast<double>(n - left_n) / static_cast<double>(n)) * entropy_bits(rs, rl);
    const double gain = total_entropy - cond;
    // Strict comparison during an ascending scan keeps the smallest
    // threshold among equal-gain splits.
    if (std::isnan(best.threshold) || gain > best.gain) {
      best.gain = gain;
      best.threshold = sorted[i].first + (sorted[i + 1].first - sorted[i].first) / 2;
    }
  }
  return best;
}

}  // namespace detail

inline SplitResult best_split(std::span<const double> column, std::span<const Label> labels) {
  if (column.size() != labels.size())
    throw std::invalid_argument("best_split: column/label length mismatch");
  if (column.size() < 2) throw std::invalid_argument("best_split: need at least 2 rows");
  std::vector<std::pair<double, Label>> sorted(column.size());
  for (std::size_t i = 0; i < column.size(); ++i) sorted[i] = {column[i], labels[i]};
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return detail::best_split_sorted(sorted, 1);
}

struct RankedFeature {
  std::size_t column = 0;
  std::string name;
  double gain = 0;
};

// Per-column information gain at its best single split, sorted descending
// (ties by column index).
inline std::vector<RankedFeature> rank_features(const FeatureTable& table) {
  if (table.rows.size() < 2) throw std::invalid_argument("rank_features: need at least 2 rows");
  std::vector<RankedFeature> ranked;
  std::vector<double> column(table.rows.size());
  std::vector<Label> labels(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) labels[r] = table.rows[r].label;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    for (std::size_t r = 0; r < table.rows.size(); ++r) column[r] = table.rows[r].values[c];
    ranked.push_back({c, table.columns[c], best_split(column, labels).gain});
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.gain > b.gain;
  });
  return ranked;
}

struct TreeParams {
  std::size_t min_leaf = 2;
  int max_depth = -1;  // -1: unlimited
};

class DecisionTree {
 public:
  struct Node {
    std::int32_t column = -1;  // -1 marks a leaf
    double threshold = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int64_t spam = 0;   // training rows that reached this node
    std::int64_t legit = 0;
    bool is_leaf() const { return column < 0; }
  };

  std::vector<Node> nodes;

  double predict_proba(std::span<const double> row) const {
    if (nodes.empty()) throw std::logic_error("predict on empty tree");
    std::size_t at = 0;
    while (!nodes[at].is_leaf()) {
      const Node& nd = nodes[at];
      if (static_cast<std::size_t>(nd.column) >= row.size())
        throw std::invalid_argument("predict: row does not match tree schema");
      at = static_cast<std::size_t>(row[nd.column] <= nd.threshold ? nd.left : nd.right);
    }
    const Node& leaf = nodes[at];
    const std::int64_t total = leaf.spam + leaf.legit;
    return total == 0 ? 0.5 : static_cast<double>(leaf.spam) / static_cast<double>(total);
  }

  // Longest root-to-leaf path in split levels; a lone leaf has depth 0.
  int depth() const {
    if (nodes.empty()) return 0;
    std::vector<std::pair<std::size_t, int>> stack{{0, 0}};
    int best = 0;
    while (!stack.empty()) {
      auto [at, d] = stack.back();
      stack.pop_back();
      best = std::max(best, d);
      if (!nodes[at].is_leaf()) {
        stack.push_back({static_cast<std::size_t>(nodes[at].left), d + 1});
        stack.push_back({static_cast<std::size_t>(nodes[at].right), d + 1});
      }
    }
    return best;
  }
};

namespace detail {

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<FeatureRow>& rows, TreeParams params, std::size_t n_columns,
              std::size_t features_per_split, std::mt19937_64* rng)
      : rows_(rows),
        params_(params),
        n_columns_(n_columns),
        features_per_split_(std::min(features_per_split, n_columns)),
        rng_(rng) {
    all_columns_.resize(n_columns_);
    for (std::size_t c = 0; c < n_columns_; ++c) all_columns_[c] = c;
  }

  DecisionTree build(std::vector<std::uint32_t> idx) {
    DecisionTree tree;
    grow(tree, std::move(idx), 0);
    return tree;
  }

 private:
  // Appends the subtree over `idx`, returning its root index.
  std::int32_t grow(DecisionTree& tree, std::vector<std::uint32_t> idx, int depth) {
    std::int64_t spam = 0;
    for (auto i : idx) spam += (rows_[i].label == Label::spam);
    const std::int64_t legit = static_cast<std::int64_t>(idx.size()) - spam;

    const auto node_at = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.push_back({});
    tree.nodes[node_at].spam = spam;
    tree.nodes[node_at].legit = legit;

    const bool pure = spam == 0 || legit == 0;
    const bool depth_stop = params_.max_depth >= 0 && depth >= params_.max_depth;
    if (pure || depth_stop || idx.size() < 2 * params_.min_leaf) return node_at;

    std::size_t best_col = 0;
    SplitResult best;
    const auto& candidates = pick_columns();
    std::vector<std::pair<double, Label>> sorted;
    sorted.reserve(idx.size());
    for (std::size_t c : candidates) {
      sorted.clear();
      for (auto i : idx) sorted.emplace_back(rows_[i].values[c], rows_[i].label);
      std::sort(sorted.begin(), sorted.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      SplitResult s = detail::best_split_sorted(sorted, params_.min_leaf);
      if (!std::isnan(s.threshold) && (std::isnan(best.threshold) || s.gain > best.gain)) {
        best = s;
        best_col = c;
      }
    }
    // No usable boundary at all (constant node) ends the branch. A zero-gain
    // boundary on an impure node is still taken: gain can appear one level
    // deeper (the XOR pattern), and both sides shrink so growth terminates.
    if (std::isnan(best.threshold)) return node_at;

    std::vector<std::uint32_t> left_idx, right_idx;
    left_idx.reserve(idx.size());
    for (auto i : idx)
      (rows_[i].values[best_col] <= best.threshold ? left_idx : right_idx).push_back(i);
    idx.clear();
    idx.shrink_to_fit();

    tree.nodes[node_at].column = static_cast<std::int32_t>(best_col);
    tree.nodes[node_at].threshold = best.threshold;
    const std::int32_t left = grow(tree, std::move(left_idx), depth + 1);
    tree.nodes[node_at].left = left;
    const std::int32_t right = grow(tree, std::move(right_idx), depth + 1);
    tree.nodes[node_at].right = right;
    return node_at;
  }

  // Candidate columns for one split: all of them, or a random subset when
  // training forest trees. The subset is sorted so ties resolve by column
  // index no matter the sampling order.
  const std::vector<std::size_t>& pick_columns() {
    if (!rng_ || features_per_split_ >= n_columns_) return all_columns_;
    scratch_ = all_columns_;
    for (std::size_t i = 0; i < features_per_split_; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, scratch_.size() - 1);
      std::swap(scratch_[i], scratch_[pick(*rng_)]);
    }
    scratch_.resize(features_per_split_);
    std::sort(scratch_.begin(), scratch_.end());
    return scratch_;
  }

  const std::vector<FeatureRow>& rows_;
  TreeParams params_;
  std::size_t n_columns_;
  std::size_t features_per_split_;
  std::mt19937_64* rng_;
  std::vector<std::size_t> all_columns_;
  std::vector<std::size_t> scratch_;
};

}  // namespace detail

inline DecisionTree train_tree(const std::vector<FeatureRow>& rows, TreeParams params = {}) {
  if (rows.empty()) throw std::invalid_argument("train_tree: no rows");
  const std::size_t n_columns = rows.front().values.size();
  detail::TreeBuilder builder(rows, params, n_columns, n_columns, nullptr);
  std::vector<std::uint32_t> idx(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) idx[i] = static_cast<std::uint32_t>(i);
  return builder.build(std::move(idx));
}

struct ForestParams {
  std::size_t n_trees = 100;
  std::size_t features_per_split = 0;  // 0: ceil(sqrt(F))
  bool bootstrap = true;
  std::uint64_t seed = 0;
  TreeParams tree;
};

struct RandomForest {
  std::vector<DecisionTree> trees;
  ForestParams params;

  double predict_proba(std::span<const double> row) const {
    if (trees.empty()) throw std::logic_error("predict on empty forest");
    double sum = 0;
    for (const auto& t : trees) sum += t.predict_proba(row);
    return sum / static_cast<double>(trees.size());
  }
};

// Trains n_trees trees, each on a bootstrap resample (when enabled) with a
// fresh feature subset per split. Per-tree seeds are drawn up front, so the
// result is identical whether trees are trained in parallel or not.
inline RandomForest train_forest(const std::vector<FeatureRow>& rows, ForestParams params = {}) {
  if (rows.size() < 2) throw std::invalid_argument("train_forest: need at least 2 rows");
  if (params.n_trees == 0) throw std::invalid_argument("train_forest: need at least 1 tree");
  const std::size_t n_columns = rows.front().values.size();
  if (params.features_per_split == 0)
    params.features_per_split =
        static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n_columns))));

  std::mt19937_64 master(params.seed);
  std::vector<std::uint64_t> tree_seeds(params.n_trees);
  for (auto& s : tree_seeds) s = master();

  RandomForest forest;
  forest.params = params;
  forest.trees.resize(params.n_trees);
  parallel_for(params.n_trees, [&](std::size_t t) {
    std::mt19937_64 rng(tree_seeds[t]);
    std::vector<std::uint32_t> idx(rows.size());
    if (params.bootstrap) {
      std::uniform_int_distribution<std::uint32_t> pick(0,
                                                        static_cast<std::uint32_t>(rows.size() - 1));
      for (auto& i : idx) i = pick(rng);
    } else {
      for (std::size_t i = 0; i < rows.size(); ++i) idx[i] = static_cast<std::uint32_t>(i);
    }
    detail::TreeBuilder builder(rows, params.tree, n_columns, params.features_per_split, &rng);
    forest.trees[t] = builder.build(std::move(idx));
  });
  return forest;
}

enum class Algo { tree, forest };

inline std::string_view algo_name(Algo a) { return a == Algo::tree ? "tree" : "forest"; }

inline std::optional<Algo> parse_algo(std::string_view s) {
  if (s == "tree") return Algo::tree;
  if (s == "forest") return Algo::forest;
  return std::nullopt;
}

// A trained model plus everything needed to score raw users later: feature
// schema, the followee-status normalization scale, and the training seed.
struct TrainedModel {
  Algo algo = Algo::forest;
  FeatureMode mode = FeatureMode::cascaded;
  std::vector<std::string> columns;
  NormMeta norm;
  std::uint64_t seed = 0;
  std::vector<DecisionTree> trees;  // exactly one for Algo::tree

  double predict_proba(std::span<const double> row) const {
    if (trees.empty()) throw std::logic_error("predict on empty model");
    double sum = 0;
    for (const auto& t : trees) sum += t.predict_proba(row);
    return sum / static_cast<double>(trees.size());
  }
};

inline TrainedModel train_model(const FeatureTable& table, Algo algo, std::uint64_t seed,
                                ForestParams forest_params = {}, TreeParams tree_params = {}) {
  TrainedModel model;
  model.algo = algo;
  model.mode = table.mode;
  model.columns = table.columns;
  model.norm = table.norm;
  model.seed = seed;
  if (algo == Algo::tree) {
    model.trees.push_back(train_tree(table.rows, tree_params));
  } else {
    forest_params.seed = seed;
    forest_params.tree = tree_params;
    model.trees = train_forest(table.rows, forest_params).trees;
  }
  return model;
}

inline void save_model(const std::string& path, const TrainedModel& model) {
  auto out = open_output(path);
  out << "# trained model\n";
  out << "algo: " << algo_name(model.algo) << "\n";
  out << "mode: " << mode_name(model.mode) << "\n";
  out << "columns:";
  for (const auto& c : model.columns) out << ' ' << c;
  out << "\n";
  out << "seed: " << model.seed << "\n";
  if (model.norm.present) {
    out << "followee_status_min: " << fmt_double(model.norm.followee_min) << "\n";
    out << "followee_status_max: " << fmt_double(model.norm.followee_max) << "\n";
  }
  out << "trees: " << model.trees.size() << "\n";
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    const auto& tree = model.trees[t];
    out << "tree " << t << " nodes " << tree.nodes.size() << "\n";
    for (const auto& nd : tree.nodes) {
      if (nd.is_leaf())
        out << "leaf " << nd.spam << ' ' << nd.legit << "\n";
      else
        out << "split " << nd.column << ' ' << fmt_double(nd.threshold) << ' ' << nd.left << ' '
            << nd.right << ' ' << nd.spam << ' ' << nd.legit << "\n";
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline TrainedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model: " + path);
  TrainedModel model;
  std::string line;
  auto next_line = [&](std::string_view what) {
    while (std::getline(in, line)) {
      std::string_view sv = trim(line);
      if (sv.empty() || sv.front() == '#') continue;
      return std::string(sv);
    }
    throw std::runtime_error(path + ": unexpected end of file, wanted " + std::string(what));
  };

  std::size_t n_trees = 0;
  while (true) {
    std::string s = next_line("header");
    std::string_view sv = s;
    if (sv.starts_with("algo:")) {
      auto a = parse_algo(trim(sv.substr(5)));
      if (!a) throw std::runtime_error(path + ": unknown algo");
      model.algo = *a;
    } else if (sv.starts_with("mode:")) {
      auto m = parse_mode(trim(sv.substr(5)));
      if (!m) throw std::runtime_error(path + ": unknown mode");
      model.mode = *m;
    } else if (sv.starts_with("columns:")) {
      for (auto c : split(trim(sv.substr(8)), ' '))
        if (!trim(c).empty()) model.columns.emplace_back(trim(c));
    } else if (sv.starts_with("seed:")) {
      model.seed = require_u64(sv.substr(5), "seed");
    } else if (sv.starts_with("followee_status_min:")) {
      model.norm.followee_min = require_double(sv.substr(20), "followee_status_min");
      model.norm.present = true;
    } else if (sv.starts_with("followee_status_max:")) {
      model.norm.followee_max = require_double(sv.substr(20), "followee_status_max");
      model.norm.present = true;
    } else if (sv.starts_with("trees:")) {
      n_trees = require_u64(sv.substr(6), "tree count");
      break;
    } else {
      throw std::runtime_error(path + ": unexpected line '" + s + "'");
    }
  }

  model.trees.resize(n_trees);
  for (std::size_t t = 0; t < n_trees; ++t) {
    std::string s = next_line("tree header");
    auto tok = split(s, ' ');
    if (tok.size() != 4 || tok[0] != "tree" || tok[2] != "nodes")
      throw std::runtime_error(path + ": bad tree header '" + s + "'");
    if (require_u64(tok[1], "tree index") != t)
      throw std::runtime_error(path + ": tree index out of order");
    const std::size_t n_nodes = require_u64(tok[3], "node count");
    auto& tree = model.trees[t];
    tree.nodes.resize(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
      std::string nd = next_line("node");
      auto f = split(nd, ' ');
      DecisionTree::Node& node = tree.nodes[i];
      if (f[0] == "leaf" && f.size() == 3) {
        node.spam = static_cast<std::int64_t>(require_u64(f[1], "leaf spam count"));
        node.legit = static_cast<std::int64_t>(require_u64(f[2], "leaf legit count"));
      } else if (f[0] == "split" && f.size() == 7) {
        node.column = static_cast<std::int32_t>(require_u64(f[1], "split column"));
        node.threshold = require_double(f[2], "split threshold");
        node.left = static_cast<std::int32_t>(require_u64(f[3], "left child"));
        node.right = static_cast<std::int32_t>(require_u64(f[4], "right child"));
        node.spam = static_cast<std::int64_t>(require_u64(f[5], "spam count"));
        node.legit = static_cast<std::int64_t>(require_u64(f[6], "legit count"));
        if (node.left < 0 || node.right < 0 ||
            static_cast<std::size_t>(node.left) >= n_nodes ||
            static_cast<std::size_t>(node.right) >= n_nodes)
          throw std::runtime_error(path + ": node child out of range");
      } else {
        throw std::runtime_error(path + ": bad node line '" + nd + "'");
      }
    }
  }
  if (model.columns != feature_columns(model.mode))
    throw std::runtime_error(path + ": columns do not match mode");
  return model;
}

struct CvParams {
  std::size_t folds = 10;
  Algo algo = Algo::forest;
  ForestParams forest;
  TreeParams tree;
  std::uint64_t seed = 0;
};

struct CvResult {
  std::vector<ConfusionMatrix> fold_cms;
  ConfusionMatrix pooled;
  std::vector<double> scores;       // held-out score per row, in row order
  std::vector<Label> truth;         // row labels, in row order
  std::vector<std::uint32_t> fold_of_row;
};

// Stratified k-fold cross-validation: per class, rows are shuffled by the
// seed and dealt round-robin, so class proportions hold per fold with the
// remainder spread deterministically. Spam probability >= 0.5 predicts spam;
// the aggregate is the confusion matrix pooled over all folds.
inline CvResult cross_validate(const FeatureTable& table, CvParams params) {
  const std::size_t n = table.rows.size();
  if (params.folds < 2) throw std::invalid_argument("cross_validate: need at least 2 folds");
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < n; ++i)
    by_class[table.rows[i].label == Label::spam ? 1 : 0].push_back(i);
  for (const auto& cls : by_class)
    if (cls.size() < params.folds)
      throw std::invalid_argument("cross_validate: a class has fewer rows than folds");

  std::mt19937_64 rng(params.seed);
  CvResult result;
  result.fold_of_row.assign(n, 0);
  for (auto& cls : by_class) {
    std::shuffle(cls.begin(), cls.end(), rng);
    for (std::size_t i = 0; i < cls.size(); ++i)
      result.fold_of_row[cls[i]] = static_cast<std::uint32_t>(i % params.folds);
  }
  std::vector<std::uint64_t> fold_seeds(params.folds);
  for (auto& s : fold_seeds) s = rng();

  result.scores.assign(n, 0.0);
  result.truth.resize(n);
  for (std::size_t i = 0; i < n; ++i) result.truth[i] = table.rows[i].label;
  result.fold_cms.resize(params.folds);

  for (std::size_t f = 0; f < params.folds; ++f) {
    std::vector<FeatureRow> train;
    std::vector<std::size_t> held;
    train.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (result.fold_of_row[i] == f)
        held.push_back(i);
      else
        train.push_back(table.rows[i]);
    }
    std::vector<DecisionTree> trees;
    if (params.algo == Algo::tree) {
      trees.push_back(train_tree(train, params.tree));
    } else {
      ForestParams fp = params.forest;
      fp.tree = params.tree;
      fp.seed = fold_seeds[f];
      trees = train_forest(train, fp).trees;
    }
    auto proba = [&](const FeatureRow& row) {
      double sum = 0;
      for (const auto& t : trees) sum += t.predict_proba(row.values);
      return sum / static_cast<double>(trees.size());
    };
    ConfusionMatrix& cm = result.fold_cms[f];
    for (std::size_t i : held) {
      const double p = proba(table.rows[i]);
      result.scores[i] = p;
      const bool pred_spam = p >= 0.5;
      if (table.rows[i].label == Label::spam)
        (pred_spam ? cm.tp : cm.fn) += 1;
      else
        (pred_spam ? cm.fp : cm.tn) += 1;
    }
    result.pooled += cm;
  }
  return result;
}

}  // namespace fsd
