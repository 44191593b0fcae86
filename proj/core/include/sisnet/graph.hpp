#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sisnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using NodeIndex = std::size_t;

/// Dense nonnegative weighted digraph. Entry (i, j) is the influence of node
/// j on node i, so row i collects the in-edges of i.
class WeightedDigraph {
 public:
  /// Throws ValidationError for a non-square, empty, negative or non-finite
  /// matrix, or when labels are given with the wrong count.
  explicit WeightedDigraph(Matrix weights, std::vector<std::string> labels = {});

  static WeightedDigraph identity(std::size_t n);

  std::size_t size() const { return static_cast<std::size_t>(weights_.rows()); }
  const Matrix& weights() const { return weights_; }
  double operator()(NodeIndex i, NodeIndex j) const {
    return weights_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const std::vector<std::string>& labels() const { return labels_; }

  bool is_symmetric() const { return weights_ == weights_.transpose(); }
  /// Largest number of strictly positive off-diagonal entries in a row.
  std::size_t max_degree() const;
  /// Row sums, optionally skipping the diagonal.
  Vector row_sums(bool include_diagonal = true) const;

  /// Induced subgraph on `nodes` (in the given order). Edges to nodes outside
  /// the set are dropped.
  WeightedDigraph induced_subgraph(std::span<const NodeIndex> nodes) const;

 private:
  Matrix weights_;
  std::vector<std::string> labels_;
};

/// One point per row, any dimension.
struct NodePositions {
  Matrix coords;
  std::vector<std::string> ids;

  std::size_t size() const { return static_cast<std::size_t>(coords.rows()); }
  std::size_t dimension() const { return static_cast<std::size_t>(coords.cols()); }
};

/// Gaussian-kernel radius graph: a_ij = exp(-|z_i - z_j|^2) when the distance
/// is strictly below `radius`, zero diagonal.
WeightedDigraph build_geometric(const NodePositions& positions, double radius);

/// Binary radius graph: a_ij = 1 when |z_i - z_j| < radius, with an optional
/// unit diagonal.
WeightedDigraph build_binary_radius(const NodePositions& positions, double radius,
                                    bool self_loops);

/// Copy of `g` whose column `source` is all ones, except for the entries named
/// in `weight_overrides`. Models a common source that reaches every node.
WeightedDigraph attach_broadcast_column(const WeightedDigraph& g, NodeIndex source,
                                        const std::map<NodeIndex, double>& weight_overrides = {});

struct Edge {
  NodeIndex i;  // receiving node (row)
  NodeIndex j;  // influencing node (column)
  double weight = 1.0;
};

/// Identical duplicates are idempotent; conflicting weights throw.
WeightedDigraph build_from_edge_list(std::span<const Edge> edges, std::size_t n,
                                     bool symmetric, bool self_loops);

/// Strongly connected components of the digraph with an edge j -> i for every
/// strictly positive off-diagonal entry m(i, j). Iterative Tarjan, O(n^2) on
/// dense storage. Components are returned in reverse topological order.
std::vector<std::vector<NodeIndex>> strongly_connected_components(const Matrix& m);

bool is_irreducible(const Matrix& m);
bool is_irreducible(const WeightedDigraph& g);

}  // namespace sisnet
