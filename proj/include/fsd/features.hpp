#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsd/graph.hpp"
#include "fsd/labels.hpp"
#include "fsd/parallel.hpp"
#include "fsd/status.hpp"
#include "fsd/triads.hpp"
#include "fsd/tsp.hpp"
#include "fsd/util.hpp"

namespace fsd {

enum class FeatureMode { degree_only, tsp, tsp_deg, ss, ss_deg, cascaded };

inline std::string_view mode_name(FeatureMode m) {
  switch (m) {
    case FeatureMode::degree_only: return "degree-only";
    case FeatureMode::tsp: return "tsp";
    case FeatureMode::tsp_deg: return "tsp+deg";
    case FeatureMode::ss: return "ss";
    case FeatureMode::ss_deg: return "ss+deg";
    case FeatureMode::cascaded: return "cascaded";
  }
  return "?";
}

inline std::optional<FeatureMode> parse_mode(std::string_view s) {
  for (FeatureMode m : {FeatureMode::degree_only, FeatureMode::tsp, FeatureMode::tsp_deg,
                        FeatureMode::ss, FeatureMode::ss_deg, FeatureMode::cascaded})
    if (mode_name(m) == s) return m;
  return std::nullopt;
}

inline bool mode_has_tsp(FeatureMode m) {
  return m == FeatureMode::tsp || m == FeatureMode::tsp_deg || m == FeatureMode::cascaded;
}
inline bool mode_has_ss(FeatureMode m) {
  return m == FeatureMode::ss || m == FeatureMode::ss_deg || m == FeatureMode::cascaded;
}
inline bool mode_has_degrees(FeatureMode m) {
  return m == FeatureMode::degree_only || m == FeatureMode::tsp_deg || m == FeatureMode::ss_deg ||
         m == FeatureMode::cascaded;
}

inline std::vector<std::string> feature_columns(FeatureMode m) {
  std::vector<std::string> cols;
  if (mode_has_tsp(m))
    for (std::size_t i = 0; i < kFeatureClassCount; ++i)
      cols.emplace_back(kTriadNames[i + kFeatureClassOffset]);
  if (mode_has_ss(m)) {
    cols.emplace_back("status");
    cols.emplace_back("followee_status");
    cols.emplace_back("plp");
  }
  if (mode_has_degrees(m)) {
    cols.emplace_back("indegree");
    cols.emplace_back("outdegree");
  }
  return cols;
}

// Batch normalization scale for the followee-status column, persisted with
// models so later single-user scoring reuses the training batch's scale.
struct NormMeta {
  bool present = false;
  double followee_min = 0;
  double followee_max = 0;

  double apply(double raw) const {
    if (!present) return raw;
    const double span = followee_max - followee_min;
    return span > 0 ? (raw - followee_min) / span : 0.0;
  }
};

struct FeatureRow {
  std::uint64_t user = 0;
  std::vector<double> values;
  Label label = Label::legit;
};

struct FeatureTable {
  FeatureMode mode = FeatureMode::cascaded;
  std::vector<std::string> columns;
  std::vector<FeatureRow> rows;
  NormMeta norm;
};

struct ExtractOptions {
  std::optional<std::size_t> cap;  // ego network size cap
  std::uint64_t cap_seed = 0;
};

// Extracts one feature row per node, in node order. TSP columns come from
// the ego-network census against `baseline`; status columns are computed
// from the whole graph's degree table and batch-normalized here.
inline FeatureTable extract_features(const DirectedGraph& g, const std::vector<Label>& labels,
                                     const TriadBaseline* baseline, FeatureMode mode,
                                     const std::vector<std::uint64_t>* ids = nullptr,
                                     ExtractOptions opt = {}) {
  if (labels.size() != g.node_count())
    throw std::invalid_argument("extract_features: label count does not match graph");
  if (mode_has_tsp(mode) && baseline == nullptr)
    throw std::invalid_argument("extract_features: mode needs a triad baseline");

  FeatureTable table;
  table.mode = mode;
  table.columns = feature_columns(mode);
  table.rows.resize(g.node_count());

  const std::size_t n = g.node_count();
  std::vector<std::array<double, kFeatureClassCount>> tsp(mode_has_tsp(mode) ? n : 0);
  if (mode_has_tsp(mode)) {
    parallel_for(n, [&](std::size_t u) {
      EgoNetwork ego = ego_network(g, static_cast<NodeId>(u), opt.cap, opt.cap_seed);
      tsp[u] = tsp_vector(census(ego.graph), *baseline).tsp;
    });
  }

  std::vector<SsFeatures> ss;
  if (mode_has_ss(mode)) {
    DegreeTable dt = build_degree_table(g);
    StatusTable st = build_status_table(dt);
    std::vector<NodeId> users(n);
    for (std::size_t u = 0; u < n; ++u) users[u] = static_cast<NodeId>(u);
    ss = ss_feature_batch(g, st, users);
    double lo = ss[0].followee_status_raw, hi = ss[0].followee_status_raw;
    for (const auto& s : ss) {
      lo = std::min(lo, s.followee_status_raw);
      hi = std::max(hi, s.followee_status_raw);
    }
    table.norm = {true, lo, hi};
  }

  for (std::size_t u = 0; u < n; ++u) {
    FeatureRow& row = table.rows[u];
    row.user = ids ? (*ids)[u] : u;
    row.label = labels[u];
    row.values.reserve(table.columns.size());
    if (mode_has_tsp(mode)) row.values.insert(row.values.end(), tsp[u].begin(), tsp[u].end());
    if (mode_has_ss(mode)) {
      row.values.push_back(ss[u].status);
      row.values.push_back(ss[u].followee_status_norm);
      row.values.push_back(ss[u].plp);
    }
    if (mode_has_degrees(mode)) {
      row.values.push_back(static_cast<double>(g.indegree(static_cast<NodeId>(u))));
      row.values.push_back(static_cast<double>(g.outdegree(static_cast<NodeId>(u))));
    }
  }
  return table;
}

// Projects a cascaded table onto a narrower mode by selecting columns.
// Equivalent to extracting in that mode directly, since every column is
// computed the same way in both.
inline FeatureTable project_mode(const FeatureTable& cascaded, FeatureMode mode) {
  if (cascaded.mode != FeatureMode::cascaded)
    throw std::invalid_argument("project_mode: source table must be cascaded");
  FeatureTable out;
  out.mode = mode;
  out.columns = feature_columns(mode);
  if (mode_has_ss(mode)) out.norm = cascaded.norm;
  std::vector<std::size_t> pick;
  for (const auto& name : out.columns) {
    auto it = std::find(cascaded.columns.begin(), cascaded.columns.end(), name);
    if (it == cascaded.columns.end())
      throw std::logic_error("project_mode: missing column " + name);
    pick.push_back(static_cast<std::size_t>(it - cascaded.columns.begin()));
  }
  out.rows.reserve(cascaded.rows.size());
  for (const auto& row : cascaded.rows) {
    FeatureRow r;
    r.user = row.user;
    r.label = row.label;
    r.values.reserve(pick.size());
    for (std::size_t i : pick) r.values.push_back(row.values[i]);
    out.rows.push_back(std::move(r));
  }
  return out;
}

inline void write_feature_file(const std::string& path, const FeatureTable& table) {
  auto out = open_output(path);
  out << "# mode: " << mode_name(table.mode) << "\n";
  if (table.norm.present) {
    out << "# followee_status_min: " << fmt_double(table.norm.followee_min) << "\n";
    out << "# followee_status_max: " << fmt_double(table.norm.followee_max) << "\n";
  }
  out << "user";
  for (const auto& c : table.columns) out << ',' << c;
  out << ",label\n";
  for (const auto& row : table.rows) {
    out << row.user;
    for (double v : row.values) out << ',' << fmt_double(v);
    out << ',' << label_name(row.label) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline FeatureTable read_feature_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open feature file: " + path);
  FeatureTable table;
  std::string line;
  bool have_mode = false, have_header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = trim(line);
    if (sv.empty()) continue;
    if (sv.front() == '#') {
      std::string_view body = trim(sv.substr(1));
      if (body.starts_with("mode:")) {
        auto m = parse_mode(trim(body.substr(5)));
        if (!m) throw std::runtime_error(path + ": unknown mode in header");
        table.mode = *m;
        have_mode = true;
      } else if (body.starts_with("followee_status_min:")) {
        table.norm.followee_min = require_double(body.substr(20), "followee_status_min");
        table.norm.present = true;
      } else if (body.starts_with("followee_status_max:")) {
        table.norm.followee_max = require_double(body.substr(20), "followee_status_max");
        table.norm.present = true;
      }
      continue;
    }
    auto fields = split(sv, ',');
    if (!have_header) {
      if (fields.size() < 2 || fields.front() != "user" || fields.back() != "label")
        throw std::runtime_error(path + ": bad feature header");
      for (std::size_t i = 1; i + 1 < fields.size(); ++i)
        table.columns.emplace_back(fields[i]);
      have_header = true;
      continue;
    }
    if (fields.size() != table.columns.size() + 2)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": wrong field count");
    FeatureRow row;
    row.user = require_u64(fields.front(), "user id");
    row.values.reserve(table.columns.size());
    for (std::size_t i = 1; i + 1 < fields.size(); ++i)
      row.values.push_back(require_double(fields[i], "feature value"));
    auto label = parse_label(trim(fields.back()));
    if (!label) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad label");
    row.label = *label;
    table.rows.push_back(std::move(row));
  }
  if (!have_mode || !have_header) throw std::runtime_error(path + ": missing header");
  if (table.columns != feature_columns(table.mode))
    throw std::runtime_error(path + ": columns do not match mode " +
                             std::string(mode_name(table.mode)));
  return table;
}

}  // namespace fsd
