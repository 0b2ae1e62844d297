#include "cgvf/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cgvf/error.hpp"

namespace cgvf {

namespace {

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

CommGraph::CommGraph(int n_nodes, std::vector<Edge> edges) : n_(n_nodes) {
  if (n_nodes < 1) throw Error("graph needs at least one node");
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n_ || b >= n_)
      throw Error("edge (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
    if (a == b) throw Error("self-loop at node " + std::to_string(a));
    edges_.emplace_back(std::min(a, b), std::max(a, b));
  }
  auto sorted = edges_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error("duplicate edge in graph");

  adjacency_.resize(n_);
  DisjointSet ds(n_);
  for (auto [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
    ds.unite(a, b);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
  adjacency_edges_.resize(n_);
  for (int i = 0; i < n_; ++i)
    for (int j : adjacency_[i]) adjacency_edges_[i].push_back(edge_index(i, j));
  for (int i = 1; i < n_; ++i)
    if (ds.find(i) != ds.find(0)) throw Error("communication graph is not connected");
}

CommGraph CommGraph::cycle(int n) {
  if (n < 3) return path(n);
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  e.emplace_back(0, n - 1);
  return CommGraph(n, std::move(e));
}

CommGraph CommGraph::path(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return CommGraph(n, std::move(e));
}

CommGraph CommGraph::complete(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return CommGraph(n, std::move(e));
}

int CommGraph::edge_index(int i, int j) const {
  const Edge key{std::min(i, j), std::max(i, j)};
  for (int k = 0; k < n_edges(); ++k)
    if (edges_[k] == key) return k;
  return -1;
}

Eigen::MatrixXd CommGraph::incidence() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_, n_edges());
  for (int k = 0; k < n_edges(); ++k) {
    d(edges_[k].first, k) = 1.0;
    d(edges_[k].second, k) = -1.0;
  }
  return d;
}

Eigen::MatrixXd CommGraph::laplacian() const {
  const Eigen::MatrixXd d = incidence();
  return d * d.transpose();
}

Eigen::MatrixXd laplacian(const CommGraph& g) { return g.laplacian(); }

OffsetSpec OffsetSpec::from_reference(const CommGraph& g, const Eigen::VectorXd& w_star) {
  if (w_star.size() != g.n_nodes()) throw Error("w_star length must equal the node count");
  OffsetSpec o;
  o.w_star = w_star;
  o.delta.resize(g.n_edges());
  for (int k = 0; k < g.n_edges(); ++k)
    o.delta[k] = w_star[g.edges()[k].first] - w_star[g.edges()[k].second];
  return o;
}

double OffsetSpec::desired(const CommGraph& g, int i, int j) const {
  const int k = g.edge_index(i, j);
  if (k < 0) throw Error("nodes are not adjacent");
  return i < j ? delta[k] : -delta[k];
}

double coordination_local(const CommGraph& g, const OffsetSpec& offsets, int i, double w_i,
                          std::span<const NeighborValue> neighbor_w) {
  const auto& nbrs = g.neighbors(i);
  if (neighbor_w.size() != nbrs.size())
    throw MissingNeighbor("node " + std::to_string(i) + " expected " +
                          std::to_string(nbrs.size()) + " neighbor values, got " +
                          std::to_string(neighbor_w.size()));
  const auto& nbr_edges = g.neighbor_edges(i);
  double c = 0.0;
  for (std::size_t m = 0; m < nbrs.size(); ++m) {
    const int j = nbrs[m];
    const auto it = std::find_if(neighbor_w.begin(), neighbor_w.end(),
                                 [j](const NeighborValue& v) { return v.node == j; });
    if (it == neighbor_w.end())
      throw MissingNeighbor("node " + std::to_string(i) + " has no value from neighbor " +
                            std::to_string(j));
    const double delta = i < j ? offsets.delta[nbr_edges[m]] : -offsets.delta[nbr_edges[m]];
    c -= w_i - it->w - delta;
  }
  return c;
}

Eigen::VectorXd coordination(const CommGraph& g, const OffsetSpec& offsets,
                             const Eigen::VectorXd& w) {
  Eigen::VectorXd c(g.n_nodes());
  std::vector<NeighborValue> view;
  for (int i = 0; i < g.n_nodes(); ++i) {
    view.clear();
    for (int j : g.neighbors(i)) view.push_back({j, w[j]});
    c[i] = coordination_local(g, offsets, i, w[i], view);
  }
  return c;
}

Eigen::VectorXd edge_errors(const CommGraph& g, const OffsetSpec& offsets,
                            const Eigen::VectorXd& w) {
  Eigen::VectorXd e(g.n_edges());
  for (int k = 0; k < g.n_edges(); ++k)
    e[k] = w[g.edges()[k].first] - w[g.edges()[k].second] - offsets.delta[k];
  return e;
}

}  // namespace cgvf
