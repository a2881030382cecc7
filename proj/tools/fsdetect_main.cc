// Command-line front end: dataset synthesis, graph ingestion, triad census,
// baseline computation, feature extraction, training, evaluation, feature
// ranking, and single-user scoring.

#include <cstdlib>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsd/classifier.hpp"
#include "fsd/features.hpp"
#include "fsd/graph.hpp"
#include "fsd/labels.hpp"
#include "fsd/metrics.hpp"
#include "fsd/parallel.hpp"
#include "fsd/report.hpp"
#include "fsd/status.hpp"
#include "fsd/synth.hpp"
#include "fsd/triads.hpp"
#include "fsd/tsp.hpp"

namespace {

// Default seed for every subcommand; FSD_SEED overrides it, an explicit
// --seed flag wins over both.
std::uint64_t default_seed() {
  if (const char* env = std::getenv("FSD_SEED")) {
    std::uint64_t v;
    if (fsd::parse_u64(env, v)) return v;
  }
  return 42;
}

fsd::NodeId resolve_user(const fsd::LoadedGraph& lg, std::uint64_t raw) {
  auto it = std::lower_bound(lg.ids.begin(), lg.ids.end(), raw);
  if (it == lg.ids.end() || *it != raw)
    throw std::runtime_error("unknown user id " + std::to_string(raw));
  return static_cast<fsd::NodeId>(it - lg.ids.begin());
}

std::vector<fsd::Label> load_aligned_labels(const std::string& path, const fsd::LoadedGraph& lg) {
  return fsd::align_labels(fsd::read_label_pairs(path), lg.graph, &lg.ids);
}

// Censuses the ego networks of the chosen users in parallel.
std::vector<fsd::TriadCensus> ego_censuses(const fsd::DirectedGraph& g,
                                           const std::vector<fsd::NodeId>& users,
                                           std::optional<std::size_t> cap, std::uint64_t seed) {
  std::vector<fsd::TriadCensus> out(users.size());
  fsd::parallel_for(users.size(), [&](std::size_t i) {
    out[i] = fsd::census(fsd::ego_network(g, users[i], cap, seed).graph);
  });
  return out;
}

std::vector<double> score_row(const fsd::DirectedGraph& g, fsd::NodeId u,
                              const fsd::TrainedModel& model, const fsd::TriadBaseline* baseline) {
  std::vector<double> row;
  if (fsd::mode_has_tsp(model.mode)) {
    auto tsp = fsd::tsp_features(g, u, *baseline, /*include_degrees=*/false);
    row.insert(row.end(), tsp.begin(), tsp.end());
  }
  if (fsd::mode_has_ss(model.mode)) {
    fsd::DegreeTable dt = fsd::build_degree_table(g);
    fsd::StatusTable st = fsd::build_status_table(dt);
    row.push_back(st.status[u]);
    row.push_back(model.norm.apply(fsd::avg_followee_status(g, st, u).value));
    row.push_back(fsd::plp(g, st, u).value);
  }
  if (fsd::mode_has_degrees(model.mode)) {
    row.push_back(static_cast<double>(g.indegree(u)));
    row.push_back(static_cast<double>(g.outdegree(u)));
  }
  return row;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"follow-spam detection on directed follow graphs"};
  app.require_subcommand(1);

  // ingest
  std::string in_edges, in_out;
  auto* ingest = app.add_subcommand("ingest", "load an edge list, report, and persist it");
  ingest->add_option("--edges", in_edges, "input edge list")->required();
  ingest->add_option("--out", in_out, "output canonical edge list (plus .ids sidecar)")->required();

  // census
  std::string cs_graph;
  std::uint64_t cs_user = 0;
  std::size_t cs_cap = 0;
  std::uint64_t cs_seed = default_seed();
  auto* censuscmd = app.add_subcommand("census", "triad census of one user's ego network");
  censuscmd->add_option("--graph", cs_graph, "edge list")->required();
  censuscmd->add_option("--user", cs_user, "user id")->required();
  censuscmd->add_option("--cap", cs_cap, "ego neighbor cap (0 = none)");
  censuscmd->add_option("--seed", cs_seed, "seed for cap sampling");

  // baseline
  std::string bl_graph, bl_labels, bl_out;
  std::size_t bl_sample = 1000;
  std::uint64_t bl_seed = default_seed();
  auto* baselinecmd =
      app.add_subcommand("baseline", "triad count baseline over sampled legitimate users");
  baselinecmd->add_option("--graph", bl_graph, "edge list")->required();
  baselinecmd->add_option("--labels", bl_labels, "label file")->required();
  baselinecmd->add_option("--sample", bl_sample, "number of legitimate users to sample");
  baselinecmd->add_option("--seed", bl_seed, "sampling seed");
  baselinecmd->add_option("--out", bl_out, "output baseline file")->required();

  // features
  std::string ft_graph, ft_labels, ft_baseline, ft_mode = "cascaded", ft_out;
  std::size_t ft_cap = 0;
  std::uint64_t ft_seed = default_seed();
  auto* featurescmd = app.add_subcommand("features", "extract labeled feature rows");
  featurescmd->add_option("--graph", ft_graph, "edge list")->required();
  featurescmd->add_option("--labels", ft_labels, "label file")->required();
  featurescmd->add_option("--baseline", ft_baseline, "baseline file (required for tsp modes)");
  featurescmd->add_option("--mode", ft_mode,
                          "degree-only|tsp|tsp+deg|ss|ss+deg|cascaded");
  featurescmd->add_option("--out", ft_out, "output feature file")->required();
  featurescmd->add_option("--cap", ft_cap, "ego neighbor cap (0 = none)");
  featurescmd->add_option("--seed", ft_seed, "seed for cap sampling");

  // synth
  fsd::SynthConfig synth_cfg;
  synth_cfg.seed = default_seed();
  std::string sy_edges, sy_labels;
  auto* synthcmd = app.add_subcommand("synth", "generate a labeled synthetic follow network");
  synthcmd->add_option("--legit", synth_cfg.n_legit, "legitimate user count");
  synthcmd->add_option("--spam", synth_cfg.n_spam, "spammer count");
  synthcmd->add_option("--scale", synth_cfg.scale, "degree scale multiplier");
  synthcmd->add_option("--seed", synth_cfg.seed, "generator seed");
  synthcmd->add_option("--legit-mean-out", synth_cfg.legit_mean_out, "legit mean outdegree target");
  synthcmd->add_option("--legit-mean-in", synth_cfg.legit_mean_in, "legit mean indegree (descriptive)");
  synthcmd->add_option("--spam-mean-out", synth_cfg.spam_mean_out, "spam mean outdegree target");
  synthcmd->add_option("--follow-back", synth_cfg.follow_back_prob, "follow-back probability");
  synthcmd->add_option("--closure", synth_cfg.triadic_closure_prob, "triadic closure probability");
  synthcmd->add_option("--out-edges", sy_edges, "output edge list")->required();
  synthcmd->add_option("--out-labels", sy_labels, "output label file")->required();

  // train
  std::string tr_features, tr_algo = "forest", tr_out;
  std::uint64_t tr_seed = default_seed();
  fsd::ForestParams tr_forest;
  fsd::TreeParams tr_tree;
  auto* traincmd = app.add_subcommand("train", "train a model on a feature file");
  traincmd->add_option("--features", tr_features, "feature file")->required();
  traincmd->add_option("--algo", tr_algo, "tree|forest");
  traincmd->add_option("--seed", tr_seed, "training seed");
  traincmd->add_option("--out", tr_out, "output model file")->required();
  traincmd->add_option("--trees", tr_forest.n_trees, "forest size");
  traincmd->add_option("--min-leaf", tr_tree.min_leaf, "minimum rows per leaf");
  traincmd->add_option("--max-depth", tr_tree.max_depth, "depth limit (-1 = unlimited)");

  // evaluate
  std::string ev_features, ev_algo = "forest", ev_report;
  std::size_t ev_folds = 10;
  std::uint64_t ev_seed = default_seed();
  fsd::ForestParams ev_forest;
  fsd::TreeParams ev_tree;
  auto* evalcmd = app.add_subcommand("evaluate", "stratified cross-validation with a report");
  evalcmd->add_option("--features", ev_features, "feature file")->required();
  evalcmd->add_option("--algo", ev_algo, "tree|forest");
  evalcmd->add_option("--folds", ev_folds, "fold count");
  evalcmd->add_option("--seed", ev_seed, "fold/shuffle seed");
  evalcmd->add_option("--report", ev_report, "output report file (plus .roc.csv sidecar)")
      ->required();
  evalcmd->add_option("--trees", ev_forest.n_trees, "forest size");
  evalcmd->add_option("--min-leaf", ev_tree.min_leaf, "minimum rows per leaf");
  evalcmd->add_option("--max-depth", ev_tree.max_depth, "depth limit (-1 = unlimited)");

  // infogain
  std::string ig_features;
  auto* igcmd = app.add_subcommand("infogain", "rank feature columns by information gain");
  igcmd->add_option("--features", ig_features, "feature file")->required();

  // score
  std::string sc_model, sc_graph, sc_baseline;
  std::uint64_t sc_user = 0;
  auto* scorecmd = app.add_subcommand("score", "spam probability for one user");
  scorecmd->add_option("--model", sc_model, "model file")->required();
  scorecmd->add_option("--graph", sc_graph, "edge list")->required();
  scorecmd->add_option("--baseline", sc_baseline, "baseline file (required for tsp modes)");
  scorecmd->add_option("--user", sc_user, "user id")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(ingest)) {
      fsd::LoadedGraph lg = fsd::load_edge_list(in_edges);
      fsd::save_edge_list(lg.graph, in_out, &lg.ids);
      auto ids_out = fsd::open_output(in_out + ".ids");
      for (std::size_t d = 0; d < lg.ids.size(); ++d) ids_out << d << ' ' << lg.ids[d] << '\n';
      std::cout << lg.report.to_string();
    } else if (app.got_subcommand(censuscmd)) {
      fsd::LoadedGraph lg = fsd::load_edge_list(cs_graph);
      fsd::NodeId u = resolve_user(lg, cs_user);
      std::optional<std::size_t> cap;
      if (cs_cap > 0) cap = cs_cap;
      fsd::EgoNetwork ego = fsd::ego_network(lg.graph, u, cap, cs_seed);
      fsd::TriadCensus c = fsd::census(ego.graph);
      for (std::size_t i = 0; i < fsd::kTriadClassCount; ++i)
        std::cout << fsd::kTriadNames[i] << ' ' << c.counts[i] << '\n';
      std::cout << "sum " << c.sum() << " expected " << c.triple_count()
                << (c.sum() == c.triple_count() ? " ok" : " MISMATCH") << '\n';
      if (ego.capped) std::cout << "ego capped to " << cs_cap << " neighbors\n";
    } else if (app.got_subcommand(baselinecmd)) {
      fsd::LoadedGraph lg = fsd::load_edge_list(bl_graph);
      auto labels = load_aligned_labels(bl_labels, lg);
      std::vector<fsd::NodeId> legit;
      for (fsd::NodeId u = 0; u < labels.size(); ++u)
        if (labels[u] == fsd::Label::legit) legit.push_back(u);
      if (legit.size() < 2) throw std::runtime_error("need at least 2 legitimate users");
      std::size_t want = std::min(bl_sample, legit.size());
      std::mt19937_64 rng(bl_seed);
      for (std::size_t i = 0; i < want; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, legit.size() - 1);
        std::swap(legit[i], legit[pick(rng)]);
      }
      legit.resize(want);
      std::sort(legit.begin(), legit.end());
      auto censuses = ego_censuses(lg.graph, legit, std::nullopt, bl_seed);
      fsd::TriadBaseline b = fsd::compute_baseline(censuses);
      fsd::save_baseline(bl_out, b);
      std::cout << "baseline over " << want << " legitimate users -> " << bl_out << '\n';
    } else if (app.got_subcommand(featurescmd)) {
      fsd::LoadedGraph lg = fsd::load_edge_list(ft_graph);
      auto labels = load_aligned_labels(ft_labels, lg);
      auto mode = fsd::parse_mode(ft_mode);
      if (!mode) throw std::runtime_error("unknown mode: " + ft_mode);
      fsd::TriadBaseline baseline;
      if (fsd::mode_has_tsp(*mode)) {
        if (ft_baseline.empty())
          throw std::runtime_error("mode " + ft_mode + " requires --baseline");
        baseline = fsd::load_baseline(ft_baseline);
      }
      fsd::ExtractOptions opt;
      if (ft_cap > 0) opt.cap = ft_cap;
      opt.cap_seed = ft_seed;
      fsd::FeatureTable table = fsd::extract_features(
          lg.graph, labels, fsd::mode_has_tsp(*mode) ? &baseline : nullptr, *mode, &lg.ids, opt);
      fsd::write_feature_file(ft_out, table);
      std::cout << "wrote " << table.rows.size() << " rows, " << table.columns.size()
                << " feature columns -> " << ft_out << '\n';
    } else if (app.got_subcommand(synthcmd)) {
      fsd::SynthResult r = fsd::generate(synth_cfg);
      fsd::save_edge_list(r.graph, sy_edges);
      fsd::save_labels(sy_labels, r.labels);
      fsd::save_synth_meta(sy_edges + ".meta", synth_cfg);
      std::cout << "generated " << r.graph.node_count() << " nodes, " << r.graph.edge_count()
                << " edges -> " << sy_edges << '\n';
    } else if (app.got_subcommand(traincmd)) {
      fsd::FeatureTable table = fsd::read_feature_file(tr_features);
      auto algo = fsd::parse_algo(tr_algo);
      if (!algo) throw std::runtime_error("unknown algo: " + tr_algo);
      fsd::TrainedModel model = fsd::train_model(table, *algo, tr_seed, tr_forest, tr_tree);
      fsd::save_model(tr_out, model);
      std::cout << "trained " << fsd::algo_name(*algo) << " on " << table.rows.size()
                << " rows -> " << tr_out << '\n';
    } else if (app.got_subcommand(evalcmd)) {
      fsd::FeatureTable table = fsd::read_feature_file(ev_features);
      auto algo = fsd::parse_algo(ev_algo);
      if (!algo) throw std::runtime_error("unknown algo: " + ev_algo);
      fsd::CvParams params;
      params.folds = ev_folds;
      params.algo = *algo;
      params.forest = ev_forest;
      params.tree = ev_tree;
      params.seed = ev_seed;
      fsd::CvResult cv = fsd::cross_validate(table, params);
      fsd::RocCurve roc = fsd::roc_auc(cv.scores, cv.truth);
      auto report = fsd::open_output(ev_report);
      fsd::write_report(report, table, params, cv, roc);
      auto rocfile = fsd::open_output(ev_report + ".roc.csv");
      fsd::write_roc_points(rocfile, roc);
      fsd::PerClassRates rates = fsd::per_class_rates(cv.pooled);
      std::cout << "spammer tp " << fsd::format_percent(rates.spammer_tp_rate) << ", legit fp "
                << fsd::format_percent(rates.legit_fp_rate) << ", auc " << roc.auc << " -> "
                << ev_report << '\n';
    } else if (app.got_subcommand(igcmd)) {
      fsd::FeatureTable table = fsd::read_feature_file(ig_features);
      for (const auto& r : fsd::rank_features(table))
        std::cout << r.name << ' ' << fsd::fmt_double(r.gain) << '\n';
    } else if (app.got_subcommand(scorecmd)) {
      fsd::TrainedModel model = fsd::load_model(sc_model);
      fsd::LoadedGraph lg = fsd::load_edge_list(sc_graph);
      fsd::NodeId u = resolve_user(lg, sc_user);
      fsd::TriadBaseline baseline;
      if (fsd::mode_has_tsp(model.mode)) {
        if (sc_baseline.empty())
          throw std::runtime_error("model mode needs --baseline");
        baseline = fsd::load_baseline(sc_baseline);
      }
      std::vector<double> row = score_row(lg.graph, u, model,
                                          fsd::mode_has_tsp(model.mode) ? &baseline : nullptr);
      std::cout << "user " << sc_user << " spam_probability " << fsd::fmt_double(
                       model.predict_proba(row)) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
