#include "fsd/graph.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "test_helpers.hpp"

using namespace fsd;
using fsd_test::make_graph;
using fsd_test::random_digraph;
using fsd_test::write_temp_file;

TEST(LoadEdgeList, BasicConstruction) {
  auto path = write_temp_file("basic_edges.txt", "1 2\n1 3\n");
  LoadedGraph lg = load_edge_list(path);
  EXPECT_EQ(lg.graph.node_count(), 3u);
  EXPECT_EQ(lg.graph.edge_count(), 2u);
  EXPECT_EQ(lg.report.self_loops_dropped, 0u);
  EXPECT_EQ(lg.report.duplicates_dropped, 0u);
  // dense ids follow ascending original ids
  EXPECT_EQ(lg.ids, (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_TRUE(lg.graph.has_edge(0, 1));
  EXPECT_TRUE(lg.graph.has_edge(0, 2));
}

TEST(LoadEdgeList, DropsLoopsAndDuplicates) {
  auto path = write_temp_file("dedup_edges.txt", "1 1\n1 2\n1 2\n");
  LoadedGraph lg = load_edge_list(path);
  EXPECT_EQ(lg.graph.node_count(), 2u);
  EXPECT_EQ(lg.graph.edge_count(), 1u);
  EXPECT_EQ(lg.report.self_loops_dropped, 1u);
  EXPECT_EQ(lg.report.duplicates_dropped, 1u);
}

TEST(LoadEdgeList, CommentsBlanksAndTabs) {
  auto path = write_temp_file("comment_edges.txt", "# header\n\n10\t20\n20   30\n  # indented\n");
  LoadedGraph lg = load_edge_list(path);
  EXPECT_EQ(lg.graph.node_count(), 3u);
  EXPECT_EQ(lg.graph.edge_count(), 2u);
}

TEST(LoadEdgeList, MalformedLineReportsNumber) {
  auto path = write_temp_file("bad_edges.txt", "1 2\nnot an edge\n");
  try {
    load_edge_list(path);
    FAIL() << "expected malformed-line error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
}

TEST(LoadEdgeList, MissingThirdTokenRejected) {
  auto path = write_temp_file("bad_edges2.txt", "1 2 3\n");
  EXPECT_THROW(load_edge_list(path), std::runtime_error);
}

TEST(LoadEdgeList, MissingFile) {
  EXPECT_THROW(load_edge_list("/nonexistent/edges.txt"), std::runtime_error);
}

// Edge count must match an independent hash-set oracle over the same file.
TEST(LoadEdgeList, RandomFileMatchesSetOracle) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::uint64_t> node(0, 399);
  std::ostringstream content;
  std::set<std::pair<std::uint64_t, std::uint64_t>> oracle;
  std::set<std::uint64_t> oracle_nodes;
  for (int i = 0; i < 10000; ++i) {
    std::uint64_t a = node(rng), b = node(rng);
    content << a << ' ' << b << '\n';
    if (a != b) {
      oracle.emplace(a, b);
      oracle_nodes.insert(a);
      oracle_nodes.insert(b);
    }
  }
  auto path = write_temp_file("random_edges.txt", content.str());
  LoadedGraph lg = load_edge_list(path);
  EXPECT_EQ(lg.graph.edge_count(), oracle.size());
  EXPECT_EQ(lg.graph.node_count(), oracle_nodes.size());
}

TEST(SaveEdgeList, RoundTripIsIdentical) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> node(0, 60);
  std::ostringstream content;
  for (int i = 0; i < 500; ++i) content << node(rng) * 3 + 1 << ' ' << node(rng) * 3 + 1 << '\n';
  auto path = write_temp_file("roundtrip_in.txt", content.str());
  LoadedGraph first = load_edge_list(path);

  std::string out_path = std::string(::testing::TempDir()) + "roundtrip_out.txt";
  save_edge_list(first.graph, out_path, &first.ids);
  LoadedGraph second = load_edge_list(out_path);

  ASSERT_EQ(second.graph.node_count(), first.graph.node_count());
  ASSERT_EQ(second.graph.edge_count(), first.graph.edge_count());
  EXPECT_EQ(second.ids, first.ids);
  for (NodeId u = 0; u < first.graph.node_count(); ++u) {
    auto a = first.graph.out_neighbors(u);
    auto b = second.graph.out_neighbors(u);
    ASSERT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
  }
}

TEST(Degrees, HandCases) {
  auto g = make_graph(3, {{0, 1}, {0, 2}});  // 1->2, 1->3 relabeled densely
  auto d = degrees(g, 0);
  EXPECT_EQ(d.indegree, 0u);
  EXPECT_EQ(d.outdegree, 2u);

  auto g2 = make_graph(2, {{0, 1}, {1, 0}});
  auto d2 = degrees(g2, 1);
  EXPECT_EQ(d2.indegree, 1u);
  EXPECT_EQ(d2.outdegree, 1u);
}

TEST(Degrees, UnknownNodeThrows) {
  auto g = make_graph(2, {{0, 1}});
  EXPECT_THROW(degrees(g, 5), std::out_of_range);
}

TEST(Degrees, TableSumsMatchEdgeCount) {
  auto g = random_digraph(40, 0.1, 11);
  DegreeTable t = build_degree_table(g);
  std::int64_t in_sum = 0, out_sum = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    in_sum += t.indegree[u];
    out_sum += t.outdegree[u];
    EXPECT_EQ(static_cast<std::size_t>(t.indegree[u]), g.in_neighbors(u).size());
    EXPECT_EQ(static_cast<std::size_t>(t.outdegree[u]), g.out_neighbors(u).size());
  }
  EXPECT_EQ(static_cast<std::size_t>(in_sum), g.edge_count());
  EXPECT_EQ(static_cast<std::size_t>(out_sum), g.edge_count());
}

TEST(EgoNetwork, WorkedExampleHas7Nodes10Edges) {
  auto g = fsd_test::fig_ego_graph();
  EgoNetwork ego = ego_network(g, 0);
  EXPECT_EQ(ego.graph.node_count(), 7u);
  EXPECT_EQ(ego.graph.edge_count(), 10u);
  EXPECT_EQ(ego.members[ego.center], 0u);
  EXPECT_FALSE(ego.capped);
}

TEST(EgoNetwork, IsolatedNode) {
  auto g = make_graph(3, {{0, 1}});
  EgoNetwork ego = ego_network(g, 2);
  EXPECT_EQ(ego.graph.node_count(), 1u);
  EXPECT_EQ(ego.graph.edge_count(), 0u);
  EXPECT_EQ(ego.members, (std::vector<NodeId>{2}));
}

TEST(EgoNetwork, UnknownNodeThrows) {
  auto g = make_graph(2, {{0, 1}});
  EXPECT_THROW(ego_network(g, 9), std::out_of_range);
}

// Induced edges must equal a brute-force scan of all parent edges with both
// endpoints in the member set.
TEST(EgoNetwork, MatchesMembershipFilterOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto g = random_digraph(30, 0.15, 100 + seed);
    for (NodeId u : {NodeId(0), NodeId(7), NodeId(29)}) {
      EgoNetwork ego = ego_network(g, u);
      std::set<std::pair<NodeId, NodeId>> expected;
      std::set<NodeId> members(ego.members.begin(), ego.members.end());
      for (NodeId a = 0; a < g.node_count(); ++a) {
        if (!members.count(a)) continue;
        for (NodeId b : g.out_neighbors(a))
          if (members.count(b)) expected.emplace(a, b);
      }
      std::set<std::pair<NodeId, NodeId>> actual;
      for (NodeId a = 0; a < ego.graph.node_count(); ++a)
        for (NodeId b : ego.graph.out_neighbors(a))
          actual.emplace(ego.members[a], ego.members[b]);
      EXPECT_EQ(actual, expected);

      // membership is exactly {u} + in/out neighbors
      std::set<NodeId> want{u};
      for (NodeId v : g.out_neighbors(u)) want.insert(v);
      for (NodeId v : g.in_neighbors(u)) want.insert(v);
      EXPECT_EQ(members, want);
    }
  }
}

TEST(EgoNetwork, CapSamplesDeterministically) {
  auto g = random_digraph(50, 0.3, 5);
  EgoNetwork a = ego_network(g, 3, 10, 99);
  EgoNetwork b = ego_network(g, 3, 10, 99);
  EXPECT_TRUE(a.capped);
  EXPECT_EQ(a.members, b.members);
  EXPECT_EQ(a.graph.edge_count(), b.graph.edge_count());
  EXPECT_EQ(a.members.size(), 11u);  // cap + center
  // a different seed picks a different sample (overwhelmingly likely)
  EgoNetwork c = ego_network(g, 3, 10, 100);
  EXPECT_TRUE(c.capped);
  EXPECT_NE(a.members, c.members);
}

TEST(EgoNetwork, CapBelowNeighborCountOnlyFlags) {
  auto g = fsd_test::fig_ego_graph();
  EgoNetwork ego = ego_network(g, 0, 6, 1);
  EXPECT_FALSE(ego.capped);  // exactly 6 neighbors, cap not exceeded
  EXPECT_EQ(ego.graph.node_count(), 7u);
}
