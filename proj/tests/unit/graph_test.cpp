#include <gtest/gtest.h>

#include <random>

#include "cgvf/error.hpp"
#include "cgvf/graph.hpp"
#include "cgvf/oracles.hpp"
#include "test_support.hpp"

using namespace cgvf;

TEST(Graph, CycleEdges) {
  const auto g = CommGraph::cycle(4);
  ASSERT_EQ(g.n_edges(), 4);
  EXPECT_EQ(g.neighbors(0), (std::vector<int>{1, 3}));
  EXPECT_EQ(g.edge_index(3, 0), g.edge_index(0, 3));
  EXPECT_EQ(g.edge_index(0, 2), -1);
}

TEST(Graph, SmallCycleFallsBackToPath) {
  EXPECT_EQ(CommGraph::cycle(2), CommGraph::path(2));
  EXPECT_EQ(CommGraph::cycle(1).n_edges(), 0);
}

TEST(Graph, LaplacianIsIncidenceProduct) {
  for (const auto& g : {CommGraph::cycle(7), CommGraph::path(5), CommGraph::complete(6),
                        CommGraph(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}, {0, 4}})}) {
    const Eigen::MatrixXd D = oracle::incidence_from_edges(g.n_nodes(), g.edges());
    EXPECT_EQ(g.incidence(), D);
    EXPECT_EQ(g.laplacian(), D * D.transpose());
    EXPECT_LT((g.laplacian() * Eigen::VectorXd::Ones(g.n_nodes())).norm(), 1e-15);
  }
}

TEST(Graph, RejectsBadEdgeLists) {
  EXPECT_THROW(CommGraph(3, {{0, 1}}), Error);            // disconnected
  EXPECT_THROW(CommGraph(3, {{0, 0}, {0, 1}, {1, 2}}), Error);  // self-loop
  EXPECT_THROW(CommGraph(3, {{0, 1}, {1, 0}, {1, 2}}), Error);  // duplicate
  EXPECT_THROW(CommGraph(3, {{0, 1}, {1, 3}}), Error);    // out of range
}

TEST(Graph, OffsetsFromReference) {
  const auto g = CommGraph::cycle(4);
  const Eigen::Vector4d ws(0.0, 0.5, 1.0, 1.5);
  const auto off = OffsetSpec::from_reference(g, ws);
  EXPECT_LT(edge_errors(g, off, ws).norm(), 1e-15);
  EXPECT_DOUBLE_EQ(off.desired(g, 0, 1), -0.5);
  EXPECT_DOUBLE_EQ(off.desired(g, 1, 0), 0.5);
  // A uniform shift keeps every edge error at zero.
  EXPECT_LT(edge_errors(g, off, (ws.array() + 3.0).matrix()).norm(), 1e-15);
}

TEST(Graph, CoordinationMatchesStackedLaplacian) {
  std::mt19937_64 rng(5);
  for (const auto& g : {CommGraph::cycle(9), CommGraph::complete(5), CommGraph::path(6)}) {
    const Eigen::VectorXd ws = test::random_vector(rng, g.n_nodes(), -3, 3);
    const Eigen::VectorXd w = test::random_vector(rng, g.n_nodes(), -3, 3);
    const auto off = OffsetSpec::from_reference(g, ws);
    EXPECT_LT((coordination(g, off, w) - oracle::stacked_coordination(g, ws, w)).norm(), 1e-12);
  }
}

TEST(Graph, LocalCoordinationIsBitwiseEqualToStacked) {
  std::mt19937_64 rng(6);
  const auto g = CommGraph::complete(6);
  const auto off = OffsetSpec::from_reference(g, test::random_vector(rng, 6, -1, 1));
  const Eigen::VectorXd w = test::random_vector(rng, 6, -10, 10);
  const Eigen::VectorXd c = coordination(g, off, w);
  for (int i = 0; i < 6; ++i) {
    std::vector<NeighborValue> view;
    // Deliberately scrambled order: the sum order must not depend on it.
    for (auto it = g.neighbors(i).rbegin(); it != g.neighbors(i).rend(); ++it) view.push_back({*it, w[*it]});
    EXPECT_EQ(coordination_local(g, off, i, w[i], view), c[i]);
  }
}

TEST(Graph, MissingNeighborIsReported) {
  const auto g = CommGraph::cycle(4);
  const auto off = OffsetSpec::from_reference(g, Eigen::Vector4d::Zero());
  std::vector<NeighborValue> partial{{1, 0.0}};
  EXPECT_THROW(coordination_local(g, off, 0, 0.0, partial), MissingNeighbor);
  std::vector<NeighborValue> wrong{{1, 0.0}, {2, 0.0}};
  EXPECT_THROW(coordination_local(g, off, 0, 0.0, wrong), MissingNeighbor);
}
