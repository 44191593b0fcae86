#include "sisnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "sisnet/errors.hpp"

namespace sisnet {
namespace {

Eigen::Index idx(NodeIndex i) { return static_cast<Eigen::Index>(i); }

void validate_positions(const NodePositions& positions, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ValidationError(fmt::format("radius must be positive and finite, got {}", radius));
  }
  if (positions.size() == 0) throw ValidationError("at least one node position is required");
  if (!positions.coords.allFinite()) {
    for (Eigen::Index r = 0; r < positions.coords.rows(); ++r) {
      if (!positions.coords.row(r).allFinite()) {
        throw ValidationError(fmt::format("non-finite coordinate for node {}", r));
      }
    }
  }
}

template <typename WeightFn>
Matrix radius_matrix(const NodePositions& positions, double radius, WeightFn weight) {
  const auto n = positions.coords.rows();
  Matrix w = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d2 = (positions.coords.row(i) - positions.coords.row(j)).squaredNorm();
      if (std::sqrt(d2) < radius) {
        w(i, j) = w(j, i) = weight(d2);
      }
    }
  }
  return w;
}

}  // namespace

WeightedDigraph::WeightedDigraph(Matrix weights, std::vector<std::string> labels)
    : weights_(std::move(weights)), labels_(std::move(labels)) {
  if (weights_.rows() == 0 || weights_.rows() != weights_.cols()) {
    throw DimensionError(fmt::format("adjacency must be a non-empty square matrix, got {}x{}",
                                     weights_.rows(), weights_.cols()));
  }
  for (Eigen::Index i = 0; i < weights_.rows(); ++i) {
    for (Eigen::Index j = 0; j < weights_.cols(); ++j) {
      const double w = weights_(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        throw ValidationError(fmt::format("weight ({}, {}) = {} must be finite and >= 0", i, j, w));
      }
    }
  }
  if (!labels_.empty() && labels_.size() != size()) {
    throw DimensionError(fmt::format("{} labels for {} nodes", labels_.size(), size()));
  }
}

WeightedDigraph WeightedDigraph::identity(std::size_t n) {
  return WeightedDigraph(Matrix::Identity(idx(n), idx(n)));
}

std::size_t WeightedDigraph::max_degree() const {
  std::size_t best = 0;
  for (Eigen::Index i = 0; i < weights_.rows(); ++i) {
    std::size_t degree = 0;
    for (Eigen::Index j = 0; j < weights_.cols(); ++j) {
      if (i != j && weights_(i, j) > 0.0) ++degree;
    }
    best = std::max(best, degree);
  }
  return best;
}

Vector WeightedDigraph::row_sums(bool include_diagonal) const {
  Vector sums = weights_.rowwise().sum();
  if (!include_diagonal) sums -= weights_.diagonal();
  return sums;
}

WeightedDigraph WeightedDigraph::induced_subgraph(std::span<const NodeIndex> nodes) const {
  const auto m = static_cast<Eigen::Index>(nodes.size());
  Matrix sub(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      const NodeIndex i = nodes[static_cast<std::size_t>(a)];
      const NodeIndex j = nodes[static_cast<std::size_t>(b)];
      if (i >= size() || j >= size()) {
        throw ValidationError(fmt::format("node index out of range for a graph of {} nodes", size()));
      }
      sub(a, b) = weights_(idx(i), idx(j));
    }
  }
  std::vector<std::string> sub_labels;
  if (!labels_.empty()) {
    for (NodeIndex i : nodes) sub_labels.push_back(labels_[i]);
  }
  return WeightedDigraph(std::move(sub), std::move(sub_labels));
}

WeightedDigraph build_geometric(const NodePositions& positions, double radius) {
  validate_positions(positions, radius);
  return WeightedDigraph(radius_matrix(positions, radius, [](double d2) { return std::exp(-d2); }),
                         positions.ids);
}

WeightedDigraph build_binary_radius(const NodePositions& positions, double radius,
                                    bool self_loops) {
  validate_positions(positions, radius);
  Matrix w = radius_matrix(positions, radius, [](double) { return 1.0; });
  if (self_loops) w.diagonal().setOnes();
  return WeightedDigraph(std::move(w), positions.ids);
}

WeightedDigraph attach_broadcast_column(const WeightedDigraph& g, NodeIndex source,
                                        const std::map<NodeIndex, double>& weight_overrides) {
  const std::size_t n = g.size();
  if (source >= n) {
    throw ValidationError(fmt::format("source index {} out of range for {} nodes", source, n));
  }
  Matrix w = g.weights();
  w.col(idx(source)).setOnes();
  for (const auto& [node, weight] : weight_overrides) {
    if (node >= n) {
      throw ValidationError(fmt::format("override index {} out of range for {} nodes", node, n));
    }
    if (!std::isfinite(weight) || weight < 0.0) {
      throw ValidationError(fmt::format("override weight for node {} must be >= 0, got {}", node, weight));
    }
    w(idx(node), idx(source)) = weight;
  }
  return WeightedDigraph(std::move(w), g.labels());
}

WeightedDigraph build_from_edge_list(std::span<const Edge> edges, std::size_t n, bool symmetric,
                                     bool self_loops) {
  if (n == 0) throw ValidationError("edge-list graph needs at least one node");
  Matrix w = Matrix::Zero(idx(n), idx(n));
  // Tracks which entries were set explicitly so conflicts can be detected.
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> assigned =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(idx(n), idx(n), false);
  if (self_loops) {
    w.diagonal().setOnes();
    assigned.diagonal().setConstant(true);
  }

  auto assign = [&](NodeIndex i, NodeIndex j, double weight) {
    if (assigned(idx(i), idx(j)) && w(idx(i), idx(j)) != weight) {
      throw ValidationError(fmt::format("conflicting weights for edge ({}, {}): {} vs {}", i, j,
                                        w(idx(i), idx(j)), weight));
    }
    w(idx(i), idx(j)) = weight;
    assigned(idx(i), idx(j)) = true;
  };

  for (const Edge& e : edges) {
    if (e.i >= n || e.j >= n) {
      throw ValidationError(fmt::format("edge ({}, {}) out of range for {} nodes", e.i, e.j, n));
    }
    if (!std::isfinite(e.weight) || e.weight < 0.0) {
      throw ValidationError(fmt::format("edge ({}, {}) has invalid weight {}", e.i, e.j, e.weight));
    }
    assign(e.i, e.j, e.weight);
    if (symmetric) assign(e.j, e.i, e.weight);
  }
  return WeightedDigraph(std::move(w));
}

std::vector<std::vector<NodeIndex>> strongly_connected_components(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("SCC requires a square matrix");
  const auto n = static_cast<std::size_t>(m.rows());

  // successors[j] lists every i with m(i, j) > 0: j influences i.
  std::vector<std::vector<NodeIndex>> successors(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i != j && m(idx(i), idx(j)) > 0.0) successors[j].push_back(i);
    }
  }

  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> number(n, kUnvisited);
  std::vector<std::size_t> lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<NodeIndex> stack;
  std::vector<std::vector<NodeIndex>> components;
  std::size_t counter = 0;

  // Explicit DFS frames (node, next successor position) instead of recursion,
  // so large county graphs cannot overflow the call stack.
  std::vector<std::pair<NodeIndex, std::size_t>> frames;
  for (NodeIndex root = 0; root < n; ++root) {
    if (number[root] != kUnvisited) continue;
    frames.emplace_back(root, 0);
    number[root] = lowlink[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < successors[v].size()) {
        const NodeIndex w = successors[v][next++];
        if (number[w] == kUnvisited) {
          number[w] = lowlink[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], number[w]);
        }
        continue;
      }
      const NodeIndex finished = v;
      frames.pop_back();
      if (!frames.empty()) {
        const NodeIndex parent = frames.back().first;
        lowlink[parent] = std::min(lowlink[parent], lowlink[finished]);
      }
      if (lowlink[finished] == number[finished]) {
        std::vector<NodeIndex> component;
        NodeIndex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != finished);
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
      }
    }
  }
  return components;
}

bool is_irreducible(const Matrix& m) {
  if (m.rows() <= 1) return true;
  return strongly_connected_components(m).size() == 1;
}

bool is_irreducible(const WeightedDigraph& g) { return is_irreducible(g.weights()); }

}  // namespace sisnet
