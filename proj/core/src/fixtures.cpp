#include "sisnet/fixtures.hpp"

#include <cmath>

#include <fmt/format.h>

#include "sisnet/errors.hpp"

namespace sisnet {

std::size_t SplitMix64::below(std::size_t n) {
  if (n == 0) throw ValidationError("below(0) has no valid result");
  const std::uint64_t bound = n;
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = next();
    if (r >= threshold) return static_cast<std::size_t>(r % bound);
  }
}

NodePositions random_positions(SplitMix64& rng, std::size_t n, std::size_t dim, double box_size) {
  NodePositions p;
  p.coords.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < p.coords.rows(); ++i) {
    for (Eigen::Index d = 0; d < p.coords.cols(); ++d) p.coords(i, d) = rng.uniform(0.0, box_size);
    p.ids.push_back(std::to_string(i));
  }
  return p;
}

GeometricFixture geometric_fixture(SplitMix64& rng, std::size_t n, double radius, double box_size,
                                   std::size_t max_attempts) {
  for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
    NodePositions positions = random_positions(rng, n, 2, box_size);
    WeightedDigraph g = build_geometric(positions, radius);
    if (is_irreducible(g)) return {std::move(positions), std::move(g), attempt};
  }
  throw PreconditionError(fmt::format("no strongly connected radius-{} graph on {} points in {} draws", radius,
                                      n, max_attempts));
}

StateVector random_binary_state(SplitMix64& rng, std::size_t n, double p) {
  StateVector x = StateVector::Zero(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.uniform() < p ? 1.0 : 0.0;
  if (n > 0 && x.sum() == 0.0) x(static_cast<Eigen::Index>(rng.below(n))) = 1.0;
  return x;
}

StateVector random_interior_state(SplitMix64& rng, std::size_t n) {
  StateVector x(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = 1.0 - rng.uniform();
  return x;
}

SnowSynthetic snow_synthetic(SplitMix64& rng, std::size_t households, double capacity, long long max_count,
                             double source_level) {
  const std::size_t n = households + 1;
  SnowSynthetic s;
  EndemicObservation& obs = s.observation;
  obs.counts.resize(static_cast<Eigen::Index>(n));
  obs.capacities = Vector::Constant(static_cast<Eigen::Index>(n), capacity);
  for (std::size_t i = 0; i < households; ++i) {
    obs.counts(static_cast<Eigen::Index>(i)) =
        static_cast<double>(1 + static_cast<long long>(rng.below(static_cast<std::size_t>(max_count))));
    obs.ids.push_back(fmt::format("h{}", i));
  }
  obs.counts(static_cast<Eigen::Index>(households)) = std::round(source_level * capacity);
  obs.ids.push_back("source");
  obs.source_index = households;
  obs.source_level = source_level;

  s.structure.kind = SnowStructureKind::kBroadcastOnly;
  s.structure.radius = 1.0;
  s.structure.positions = random_positions(rng, n, 2, 10.0);
  s.structure.positions->ids = obs.ids;
  s.structure.overrides = {{0, 0.1}};
  return s;
}

UsdaSynthetic usda_synthetic(SplitMix64& rng, std::size_t rows, std::size_t cols, std::size_t train_rows,
                             std::size_t train_cols, std::size_t steps) {
  if (train_rows > rows || train_cols > cols || train_rows * train_cols < 2) {
    throw ValidationError("training block must fit in the grid and hold at least two regions");
  }
  UsdaSynthetic u;
  const auto id = [cols](std::size_t r, std::size_t c) { return r * cols + c; };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) u.full_edges.push_back({id(r, c), id(r, c + 1), 1.0});
      if (r + 1 < rows) u.full_edges.push_back({id(r, c), id(r + 1, c), 1.0});
    }
  }
  const std::size_t n = rows * cols;
  u.full_graph = build_from_edge_list(u.full_edges, n, true, true);
  for (std::size_t r = 0; r < train_rows; ++r) {
    for (std::size_t c = 0; c < train_cols; ++c) u.train_nodes.push_back(id(r, c));
  }
  u.train_graph = u.full_graph.induced_subgraph(u.train_nodes);

  u.full_x0.resize(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < u.full_x0.size(); ++i) u.full_x0(i) = rng.uniform(0.0, 0.3);
  StateVector train_x0(static_cast<Eigen::Index>(u.train_nodes.size()));
  for (std::size_t k = 0; k < u.train_nodes.size(); ++k) {
    train_x0(static_cast<Eigen::Index>(k)) = u.full_x0(static_cast<Eigen::Index>(u.train_nodes[k]));
  }

  const SpreadParams train_params = SpreadParams::homogeneous(u.h, u.beta, u.delta, u.train_graph);
  const SpreadParams full_params = SpreadParams::homogeneous(u.h, u.beta, u.delta, u.full_graph);
  u.train_trajectory = simulate(train_params, train_x0, steps, Model::kEuler);
  u.reference = simulate(full_params, u.full_x0, steps, Model::kEuler);
  return u;
}

}  // namespace sisnet
