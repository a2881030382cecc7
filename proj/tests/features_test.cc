#include "fsd/features.hpp"

#include <gtest/gtest.h>

#include "fsd/synth.hpp"
#include "fsd/tsp.hpp"
#include "test_helpers.hpp"

using namespace fsd;

namespace {

struct SmallDataset {
  SynthResult data;
  TriadBaseline baseline;
};

const SmallDataset& small_dataset() {
  static const SmallDataset ds = [] {
    SynthConfig cfg;
    cfg.n_legit = 150;
    cfg.n_spam = 150;
    cfg.scale = 0.05;
    cfg.seed = 21;
    SmallDataset out{generate(cfg), {}};
    std::vector<TriadCensus> censuses;
    for (NodeId u = 0; u < cfg.n_legit; ++u)
      censuses.push_back(census(ego_network(out.data.graph, u).graph));
    out.baseline = compute_baseline(censuses);
    return out;
  }();
  return ds;
}

}  // namespace

TEST(FeatureSchema, ColumnCounts) {
  EXPECT_EQ(feature_columns(FeatureMode::degree_only).size(), 2u);
  EXPECT_EQ(feature_columns(FeatureMode::tsp).size(), 13u);
  EXPECT_EQ(feature_columns(FeatureMode::tsp_deg).size(), 15u);
  EXPECT_EQ(feature_columns(FeatureMode::ss).size(), 3u);
  EXPECT_EQ(feature_columns(FeatureMode::ss_deg).size(), 5u);
  EXPECT_EQ(feature_columns(FeatureMode::cascaded).size(), 18u);

  auto cascaded = feature_columns(FeatureMode::cascaded);
  EXPECT_EQ(cascaded.front(), "021D");
  EXPECT_EQ(cascaded[13], "status");
  EXPECT_EQ(cascaded.back(), "outdegree");
}

TEST(FeatureSchema, ModeNamesRoundTrip) {
  for (FeatureMode m : {FeatureMode::degree_only, FeatureMode::tsp, FeatureMode::tsp_deg,
                        FeatureMode::ss, FeatureMode::ss_deg, FeatureMode::cascaded}) {
    auto parsed = parse_mode(mode_name(m));
    ASSERT_TRUE(parsed.has_value());
    EXPECT_EQ(*parsed, m);
  }
  EXPECT_FALSE(parse_mode("bogus").has_value());
}

TEST(ExtractFeatures, FileShapeForStatusMode) {
  const auto& ds = small_dataset();
  FeatureTable table =
      extract_features(ds.data.graph, ds.data.labels, nullptr, FeatureMode::ss_deg);
  EXPECT_EQ(table.rows.size(), 300u);
  EXPECT_EQ(table.columns.size(), 5u);
  for (const auto& row : table.rows) EXPECT_EQ(row.values.size(), 5u);

  std::string path = std::string(::testing::TempDir()) + "ss_deg.csv";
  write_feature_file(path, table);
  FeatureTable readback = read_feature_file(path);
  EXPECT_EQ(readback.rows.size(), 300u);
  EXPECT_EQ(readback.columns.size(), 5u);
  std::size_t spam_rows = 0;
  for (const auto& row : readback.rows) spam_rows += (row.label == Label::spam);
  EXPECT_EQ(spam_rows, 150u);
}

TEST(ExtractFeatures, CascadedShapeAndDeterminism) {
  const auto& ds = small_dataset();
  FeatureTable a =
      extract_features(ds.data.graph, ds.data.labels, &ds.baseline, FeatureMode::cascaded);
  FeatureTable b =
      extract_features(ds.data.graph, ds.data.labels, &ds.baseline, FeatureMode::cascaded);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].user, b.rows[i].user);
    EXPECT_EQ(a.rows[i].values, b.rows[i].values);
  }
  EXPECT_TRUE(a.norm.present);
  EXPECT_DOUBLE_EQ(a.norm.followee_min, b.norm.followee_min);
}

TEST(ExtractFeatures, TspModeRequiresBaseline) {
  const auto& ds = small_dataset();
  EXPECT_THROW(extract_features(ds.data.graph, ds.data.labels, nullptr, FeatureMode::tsp),
               std::invalid_argument);
}

TEST(ExtractFeatures, LabelSizeMustMatch) {
  const auto& ds = small_dataset();
  std::vector<Label> short_labels(10, Label::legit);
  EXPECT_THROW(extract_features(ds.data.graph, short_labels, nullptr, FeatureMode::degree_only),
               std::invalid_argument);
}

// Selecting columns out of a cascaded table must equal extracting in the
// narrower mode directly.
TEST(ProjectMode, EqualsDirectExtraction) {
  const auto& ds = small_dataset();
  FeatureTable cascaded =
      extract_features(ds.data.graph, ds.data.labels, &ds.baseline, FeatureMode::cascaded);
  for (FeatureMode m : {FeatureMode::degree_only, FeatureMode::tsp, FeatureMode::tsp_deg,
                        FeatureMode::ss, FeatureMode::ss_deg}) {
    FeatureTable projected = project_mode(cascaded, m);
    FeatureTable direct = extract_features(ds.data.graph, ds.data.labels,
                                           mode_has_tsp(m) ? &ds.baseline : nullptr, m);
    ASSERT_EQ(projected.rows.size(), direct.rows.size());
    EXPECT_EQ(projected.columns, direct.columns);
    for (std::size_t i = 0; i < direct.rows.size(); ++i)
      EXPECT_EQ(projected.rows[i].values, direct.rows[i].values) << mode_name(m);
  }
}

TEST(FeatureFile, RoundTripsValuesBitExact) {
  const auto& ds = small_dataset();
  FeatureTable table =
      extract_features(ds.data.graph, ds.data.labels, &ds.baseline, FeatureMode::cascaded);
  std::string path = std::string(::testing::TempDir()) + "cascaded.csv";
  write_feature_file(path, table);
  FeatureTable readback = read_feature_file(path);
  ASSERT_EQ(readback.rows.size(), table.rows.size());
  EXPECT_EQ(readback.mode, table.mode);
  EXPECT_EQ(readback.columns, table.columns);
  ASSERT_TRUE(readback.norm.present);
  EXPECT_EQ(readback.norm.followee_min, table.norm.followee_min);
  EXPECT_EQ(readback.norm.followee_max, table.norm.followee_max);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    EXPECT_EQ(readback.rows[i].user, table.rows[i].user);
    EXPECT_EQ(readback.rows[i].label, table.rows[i].label);
    ASSERT_EQ(readback.rows[i].values.size(), table.rows[i].values.size());
    for (std::size_t c = 0; c < table.rows[i].values.size(); ++c)
      EXPECT_EQ(readback.rows[i].values[c], table.rows[i].values[c]) << "row " << i << " col " << c;
  }
}

TEST(FeatureFile, RejectsColumnMismatch) {
  std::string path = std::string(::testing::TempDir()) + "bad_features.csv";
  {
    std::ofstream out(path);
    out << "# mode: degree-only\n";
    out << "user,indegree,label\n";  // missing outdegree column
    out << "0,1,legit\n";
  }
  EXPECT_THROW(read_feature_file(path), std::runtime_error);
}

TEST(NormMeta, AppliesTrainingScale) {
  NormMeta norm{true, 2.0, 6.0};
  EXPECT_DOUBLE_EQ(norm.apply(2.0), 0.0);
  EXPECT_DOUBLE_EQ(norm.apply(6.0), 1.0);
  EXPECT_DOUBLE_EQ(norm.apply(4.0), 0.5);
  NormMeta degenerate{true, 3.0, 3.0};
  EXPECT_DOUBLE_EQ(degenerate.apply(5.0), 0.0);
}
