#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "sisnet/dynamics.hpp"
#include "sisnet/graph.hpp"
#include "sisnet/pipelines.hpp"

namespace sisnet {

/// SplitMix64: 64-bit state, golden-ratio increment, two xor-shift-multiply
/// rounds. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return std::numeric_limits<std::uint64_t>::max(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n), n > 0.
  std::size_t below(std::size_t n);

 private:
  std::uint64_t state_;
};

NodePositions random_positions(SplitMix64& rng, std::size_t n, std::size_t dim, double box_size);

struct GeometricFixture {
  NodePositions positions;
  WeightedDigraph graph;
  std::size_t attempts = 1;
};

/// Points uniform in [0, box_size]^2 with the Gaussian-kernel radius graph,
/// resampled until the graph is strongly connected. Throws PreconditionError
/// after max_attempts draws.
GeometricFixture geometric_fixture(SplitMix64& rng, std::size_t n = 40, double radius = 2.0,
                                   double box_size = 10.0, std::size_t max_attempts = 1000);

/// Each node infected with probability p, at least one infected.
StateVector random_binary_state(SplitMix64& rng, std::size_t n, double p = 0.25);
/// Entries uniform in (0, 1].
StateVector random_interior_state(SplitMix64& rng, std::size_t n);

struct SnowSynthetic {
  EndemicObservation observation;
  SnowStructure structure;
};

/// `households` nodes of the given capacity with counts uniform in
/// [1, max_count], plus a broadcast source appended as the last node. The
/// structure is broadcast-only with the source weight on node 0 set to 1/10.
/// Positions uniform in [0, 10]^2 are attached for the radius structures.
SnowSynthetic snow_synthetic(SplitMix64& rng, std::size_t households = 200, double capacity = 20.0,
                             long long max_count = 15, double source_level = 19.0 / 20.0);

struct UsdaSynthetic {
  std::vector<Edge> full_edges;  // undirected 4-neighbour grid, one entry per pair
  WeightedDigraph full_graph = WeightedDigraph::identity(1);
  std::vector<NodeIndex> train_nodes;
  WeightedDigraph train_graph = WeightedDigraph::identity(1);
  double beta = 0.0223745;
  double delta = 0.00909176;
  double h = 1.0;
  StateVector full_x0;
  Trajectory train_trajectory;
  Trajectory reference;
};

/// rows x cols grid of regions with unit self loops and border adjacency.
/// The training region is the top-left train_rows x train_cols block, simulated
/// on its own induced subgraph; the reference is the Euler run on the full
/// grid with the same parameters.
UsdaSynthetic usda_synthetic(SplitMix64& rng, std::size_t rows = 8, std::size_t cols = 10,
                             std::size_t train_rows = 4, std::size_t train_cols = 5, std::size_t steps = 30);

}  // namespace sisnet
