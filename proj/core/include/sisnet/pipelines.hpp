#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sisnet/dynamics.hpp"
#include "sisnet/identification.hpp"

namespace sisnet {

/// Terminal event counts per node (e.g. deaths per household) with node
/// sizes, plus a broadcast source whose equilibrium level is pinned.
struct EndemicObservation {
  Vector counts;
  Vector capacities;
  NodeIndex source_index = 0;
  double source_level = 0.95;
  std::vector<std::string> ids;

  std::size_t size() const { return static_cast<std::size_t>(counts.size()); }
  /// Throws ValidationError on shape or range problems.
  void validate() const;
  /// counts / capacities with the source entry replaced by source_level.
  StateVector endemic_state() const;
};

struct IncidenceSeries {
  std::vector<long long> new_events;  // one entry per period
  std::size_t period_steps = 1;
  long long total = 0;
};

struct FitReport {
  double scaled_frobenius_error = 0.0;
  Vector per_step_errors;       // 2-norm of each row difference
  double observed_norm = 0.0;   // |F|_F
  double simulated_norm = 0.0;  // |F_hat|_F
  double difference_norm = 0.0; // |F - F_hat|_F
};

/// |F - F_hat|_F / |F|_F over the stacked state matrices. Throws
/// DimensionError on shape mismatch and ValidationError when |F|_F = 0.
FitReport frobenius_fit(const Trajectory& observed, const Trajectory& simulated);
FitReport frobenius_fit(const Matrix& observed, const Matrix& simulated);

/// Incidence comparison: both series as column vectors, the shorter one
/// padded with zeros.
FitReport incidence_fit(const IncidenceSeries& observed, const IncidenceSeries& simulated);

/// Cumulative counts round(x_i^k * capacity_i) summed over the included
/// nodes, differenced per step and aggregated `steps_per_period` steps at a
/// time (the last period may be shorter). Rounding happens on cumulative
/// counts, so the periods sum exactly to the final cumulative count minus the
/// initial one.
IncidenceSeries incidence_from_trajectory(const Trajectory& traj, const Vector& capacities,
                                          std::size_t steps_per_period,
                                          std::optional<NodeIndex> excluded_node = std::nullopt);

/// max(1, round((3/175) / h)): 3 steps per period at h = 1/175 and one step
/// per period at h = 1/30.
std::size_t default_steps_per_period(double h);

enum class SnowStructureKind { kRadius, kRadiusWithBroadcast, kBroadcastOnly };

/// Network used to derive healing rates from an endemic observation:
///   kRadius              binary radius graph with self loops
///   kRadiusWithBroadcast the same with the source column set to ones
///   kBroadcastOnly       self loops plus source -> node edges, with
///                        per-node overrides of the source weight
struct SnowStructure {
  SnowStructureKind kind = SnowStructureKind::kBroadcastOnly;
  double radius = 0.0;
  std::optional<NodePositions> positions;
  std::map<NodeIndex, double> overrides;
};

std::string_view to_string(SnowStructureKind kind);
SnowStructureKind parse_snow_structure(std::string_view name);

WeightedDigraph build_snow_adjacency(const SnowStructure& structure, const EndemicObservation& obs);

struct SnowOptions {
  double h = 1.0 / 30.0;
  std::size_t steps = 3000;
  std::optional<std::size_t> steps_per_period;
  /// Keep the source at its initial value 1 for the whole run instead of
  /// letting it relax to its derived equilibrium.
  bool hold_source = false;
  std::optional<IncidenceSeries> reference;
};

struct SnowResult {
  SpreadParams params;
  StateVector x_star;
  Trajectory trajectory;
  IncidenceSeries incidence;
  std::optional<FitReport> fit;
  AssumptionReport assumptions;
  double equilibrium_defect = 0.0;  // |step_euler(p, x*) - x*|_inf
};

/// Builds the network, pins x* from the observation, derives delta_i with
/// beta = 1 from the endemic-ratio formula, simulates from the source-only
/// initial state and converts the run to an incidence series.
///
/// Throws PipelineError when a non-source node has a zero count or the
/// derived rates violate h delta_i <= 1 / h sum_{j != i} a_ij <= 1.
SnowResult snow_pipeline(const EndemicObservation& obs, const SnowStructure& structure,
                         const SnowOptions& options);

struct UsdaResult {
  SpreadParams params;
  EstimationResult estimate;
  Trajectory trajectory;
  std::optional<FitReport> fit;
};

/// Learns homogeneous (beta, delta) on a training region, simulates the
/// Euler model on the full network from full_x0 and optionally scores the
/// run against a reference trajectory. Throws IdentificationError when the
/// training data is not identifiable.
UsdaResult usda_pipeline(const Trajectory& train_traj, const WeightedDigraph& train_graph,
                         const WeightedDigraph& full_graph, const StateVector& full_x0,
                         std::size_t steps, double h,
                         const std::optional<Trajectory>& reference = std::nullopt);

}  // namespace sisnet
