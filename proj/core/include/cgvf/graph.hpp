#pragma once

#include <Eigen/Dense>

#include <span>
#include <utility>
#include <vector>

#include "cgvf/paths.hpp"

namespace cgvf {

using Edge = std::pair<int, int>;

/// Undirected, connected communication graph. Edges are stored oriented (i, j)
/// with i < j; column k of the incidence matrix is +1 at i and -1 at j, so
/// (D^T w)_k = w_i - w_j.
class CommGraph {
 public:
  /// Throws cgvf::Error on self-loops, duplicates, out-of-range nodes or a
  /// disconnected graph.
  CommGraph(int n_nodes, std::vector<Edge> edges);
  CommGraph() : CommGraph(1, {}) {}

  static CommGraph cycle(int n);
  static CommGraph path(int n);
  static CommGraph complete(int n);

  int n_nodes() const { return n_; }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Ascending neighbor indices of node i.
  const std::vector<int>& neighbors(int i) const { return adjacency_[i]; }
  /// Edge index for each entry of neighbors(i).
  const std::vector<int>& neighbor_edges(int i) const { return adjacency_edges_[i]; }

  /// Index into edges() of the edge joining i and j, or -1.
  int edge_index(int i, int j) const;

  Eigen::MatrixXd incidence() const;
  Eigen::MatrixXd laplacian() const;

  bool operator==(const CommGraph& o) const { return n_ == o.n_ && edges_ == o.edges_; }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::vector<int>> adjacency_edges_;
};

Eigen::MatrixXd laplacian(const CommGraph& g);

/// Desired per-edge offsets derived once from a reference configuration:
/// delta = D^T w_star.
struct OffsetSpec {
  Eigen::VectorXd w_star;
  Eigen::VectorXd delta;

  static OffsetSpec from_reference(const CommGraph& g, const Eigen::VectorXd& w_star);

  /// Desired w_i - w_j for any adjacent pair, in either orientation.
  double desired(const CommGraph& g, int i, int j) const;

  bool operator==(const OffsetSpec& o) const {
    return same_vector(w_star, o.w_star) && same_vector(delta, o.delta);
  }
};

/// A communicated scalar from neighbor `node`.
struct NeighborValue {
  int node;
  double w;
};

/// c_i = -sum_{j in N_i} (w_i - w_j - Delta_ij), summed in ascending neighbor
/// order. `neighbor_w` must cover exactly N_i (any order); a missing or
/// unexpected node throws MissingNeighbor.
double coordination_local(const CommGraph& g, const OffsetSpec& offsets, int i, double w_i,
                          std::span<const NeighborValue> neighbor_w);

/// Stacked coordination c(w); component i is bitwise identical to
/// coordination_local on the same inputs.
Eigen::VectorXd coordination(const CommGraph& g, const OffsetSpec& offsets,
                             const Eigen::VectorXd& w);

/// Per-edge coordination error w_i - w_j - Delta_ij.
Eigen::VectorXd edge_errors(const CommGraph& g, const OffsetSpec& offsets,
                            const Eigen::VectorXd& w);

}  // namespace cgvf
