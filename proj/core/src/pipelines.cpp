#include "sisnet/pipelines.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "sisnet/diagnostics.hpp"
#include "sisnet/errors.hpp"

namespace sisnet {

void EndemicObservation::validate() const {
  const auto n = counts.size();
  if (n == 0) throw ValidationError("observation has no nodes");
  if (capacities.size() != n) {
    throw DimensionError(fmt::format("{} counts but {} capacities", n, capacities.size()));
  }
  if (!ids.empty() && static_cast<Eigen::Index>(ids.size()) != n) {
    throw DimensionError(fmt::format("{} ids for {} nodes", ids.size(), n));
  }
  if (source_index >= static_cast<std::size_t>(n)) {
    throw ValidationError(fmt::format("source index {} out of range for {} nodes", source_index, n));
  }
  if (!(source_level > 0.0 && source_level < 1.0)) {
    throw ValidationError(fmt::format("source level must lie in (0, 1), got {}", source_level));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<std::size_t>(i) == source_index) continue;
    if (!(capacities(i) >= 1.0) || !std::isfinite(capacities(i))) {
      throw ValidationError(fmt::format("node {}: capacity {} must be >= 1", i, capacities(i)));
    }
    if (!(counts(i) >= 0.0 && counts(i) <= capacities(i))) {
      throw ValidationError(
          fmt::format("node {}: count {} must lie in [0, capacity = {}]", i, counts(i), capacities(i)));
    }
  }
}

StateVector EndemicObservation::endemic_state() const {
  StateVector x = counts.cwiseQuotient(capacities);
  x(static_cast<Eigen::Index>(source_index)) = source_level;
  return x;
}

FitReport frobenius_fit(const Matrix& observed, const Matrix& simulated) {
  if (observed.rows() != simulated.rows() || observed.cols() != simulated.cols()) {
    throw DimensionError(fmt::format("observed is {}x{} but simulated is {}x{}", observed.rows(),
                                     observed.cols(), simulated.rows(), simulated.cols()));
  }
  FitReport f;
  f.observed_norm = observed.norm();
  if (f.observed_norm == 0.0) {
    throw ValidationError("observed data has zero Frobenius norm; the scaled error is undefined");
  }
  const Matrix diff = observed - simulated;
  f.simulated_norm = simulated.norm();
  f.difference_norm = diff.norm();
  f.scaled_frobenius_error = f.difference_norm / f.observed_norm;
  f.per_step_errors = diff.rowwise().norm();
  return f;
}

FitReport frobenius_fit(const Trajectory& observed, const Trajectory& simulated) {
  return frobenius_fit(observed.states, simulated.states);
}

FitReport incidence_fit(const IncidenceSeries& observed, const IncidenceSeries& simulated) {
  const auto len = static_cast<Eigen::Index>(std::max(observed.new_events.size(), simulated.new_events.size()));
  Matrix obs = Matrix::Zero(len, 1);
  Matrix sim = Matrix::Zero(len, 1);
  for (std::size_t k = 0; k < observed.new_events.size(); ++k) {
    obs(static_cast<Eigen::Index>(k), 0) = static_cast<double>(observed.new_events[k]);
  }
  for (std::size_t k = 0; k < simulated.new_events.size(); ++k) {
    sim(static_cast<Eigen::Index>(k), 0) = static_cast<double>(simulated.new_events[k]);
  }
  return frobenius_fit(obs, sim);
}

IncidenceSeries incidence_from_trajectory(const Trajectory& traj, const Vector& capacities,
                                          std::size_t steps_per_period,
                                          std::optional<NodeIndex> excluded_node) {
  if (capacities.size() != traj.states.cols()) {
    throw DimensionError(fmt::format("{} capacities for a {}-node trajectory", capacities.size(),
                                     traj.states.cols()));
  }
  if (steps_per_period == 0) throw ValidationError("steps per period must be >= 1");

  std::vector<long long> cumulative;
  cumulative.reserve(static_cast<std::size_t>(traj.states.rows()));
  for (Eigen::Index k = 0; k < traj.states.rows(); ++k) {
    long long sum = 0;
    for (Eigen::Index i = 0; i < traj.states.cols(); ++i) {
      if (excluded_node && static_cast<Eigen::Index>(*excluded_node) == i) continue;
      sum += std::llround(traj.states(k, i) * capacities(i));
    }
    cumulative.push_back(sum);
  }

  IncidenceSeries series;
  series.period_steps = steps_per_period;
  for (std::size_t start = 1; start < cumulative.size(); start += steps_per_period) {
    const std::size_t end = std::min(start + steps_per_period, cumulative.size()) - 1;
    series.new_events.push_back(cumulative[end] - cumulative[start - 1]);
  }
  for (long long v : series.new_events) series.total += v;
  return series;
}

std::size_t default_steps_per_period(double h) {
  if (!(h > 0.0)) throw ValidationError("h must be positive");
  const double steps = std::round((3.0 / 175.0) / h);
  return steps < 1.0 ? 1 : static_cast<std::size_t>(steps);
}

std::string_view to_string(SnowStructureKind kind) {
  switch (kind) {
    case SnowStructureKind::kRadius: return "a1";
    case SnowStructureKind::kRadiusWithBroadcast: return "a2";
    case SnowStructureKind::kBroadcastOnly: return "a3";
  }
  return "unknown";
}

SnowStructureKind parse_snow_structure(std::string_view name) {
  if (name == "a1") return SnowStructureKind::kRadius;
  if (name == "a2") return SnowStructureKind::kRadiusWithBroadcast;
  if (name == "a3") return SnowStructureKind::kBroadcastOnly;
  throw ValidationError(fmt::format("unknown structure '{}' (expected a1, a2 or a3)", name));
}

WeightedDigraph build_snow_adjacency(const SnowStructure& structure, const EndemicObservation& obs) {
  const std::size_t n = obs.size();
  switch (structure.kind) {
    case SnowStructureKind::kRadius:
    case SnowStructureKind::kRadiusWithBroadcast: {
      if (!structure.positions) throw PipelineError("radius structures need node positions");
      if (structure.positions->size() != n) {
        throw DimensionError(fmt::format("{} positions for {} nodes", structure.positions->size(), n));
      }
      WeightedDigraph a = build_binary_radius(*structure.positions, structure.radius, true);
      if (structure.kind == SnowStructureKind::kRadius) return a;
      return attach_broadcast_column(a, obs.source_index, structure.overrides);
    }
    case SnowStructureKind::kBroadcastOnly:
      return attach_broadcast_column(WeightedDigraph::identity(n), obs.source_index, structure.overrides);
  }
  throw PipelineError("unknown structure");
}

SnowResult snow_pipeline(const EndemicObservation& obs, const SnowStructure& structure,
                         const SnowOptions& options) {
  obs.validate();
  const auto n = static_cast<Eigen::Index>(obs.size());
  const auto src = static_cast<Eigen::Index>(obs.source_index);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i != src && obs.counts(i) < 1.0) {
      throw PipelineError(fmt::format(
          "node {} has no recorded events; nodes with zero counts must be excluded before deriving rates", i));
    }
  }
  if (!(options.h > 0.0)) throw PipelineError("h must be positive");

  WeightedDigraph a = build_snow_adjacency(structure, obs);
  const StateVector x_star = obs.endemic_state();
  const Vector beta = Vector::Ones(n);
  Vector delta = derive_delta_from_endemic(x_star, a, beta);

  SpreadParams params = SpreadParams::per_node(options.h, beta, std::move(delta), std::move(a));
  const AssumptionReport report = check_assumptions(params);
  if (!report.a3_step_bounds) {
    const double h_max =
        1.0 / std::max(params.delta().maxCoeff(), params.adjacency().row_sums(false).maxCoeff());
    throw PipelineError(fmt::format(
        "derived rates violate the step bounds at h = {} (max h*delta = {:.4g}, max h*off-diagonal "
        "row sum = {:.4g}); use h <= {:.6g}",
        options.h, report.max_h_delta, report.max_h_offdiagonal_row_sum, h_max));
  }

  StateVector x0 = StateVector::Zero(n);
  x0(src) = 1.0;

  Trajectory traj;
  if (!options.hold_source) {
    traj = simulate(params, x0, options.steps, Model::kEuler);
  } else {
    for (const auto& f : check_assumptions(params, x0).failures()) warn(f);
    traj.h = params.h();
    traj.model = Model::kEuler;
    traj.states.resize(static_cast<Eigen::Index>(options.steps) + 1, n);
    traj.states.row(0) = x0.transpose();
    StateVector x = x0;
    for (std::size_t k = 1; k <= options.steps; ++k) {
      x = step_euler(params, x);
      x(src) = x0(src);
      traj.states.row(static_cast<Eigen::Index>(k)) = x.transpose();
    }
  }

  const std::size_t period = options.steps_per_period.value_or(default_steps_per_period(options.h));
  IncidenceSeries incidence = incidence_from_trajectory(traj, obs.capacities, period, obs.source_index);

  std::optional<FitReport> fit;
  if (options.reference) fit = incidence_fit(*options.reference, incidence);

  const double defect = (step_euler(params, x_star) - x_star).lpNorm<Eigen::Infinity>();
  return SnowResult{std::move(params), x_star,   std::move(traj), std::move(incidence),
                    std::move(fit),    report, defect};
}

UsdaResult usda_pipeline(const Trajectory& train_traj, const WeightedDigraph& train_graph,
                         const WeightedDigraph& full_graph, const StateVector& full_x0,
                         std::size_t steps, double h, const std::optional<Trajectory>& reference) {
  if (static_cast<std::size_t>(full_x0.size()) != full_graph.size()) {
    throw DimensionError(fmt::format("full x0 has {} entries, full graph has {} nodes", full_x0.size(),
                                     full_graph.size()));
  }
  EstimationResult estimate = identify_homogeneous(train_traj, train_graph, h);
  if (!estimate.identifiable) {
    throw IdentificationError(
        fmt::format("training data is not identifiable ({})", to_string(estimate.case_tag)),
        std::string(to_string(estimate.case_tag)));
  }
  SpreadParams params =
      SpreadParams::homogeneous(h, estimate.beta_hat(0), estimate.delta_hat(0), full_graph);
  Trajectory traj = simulate(params, full_x0, steps, Model::kEuler);

  std::optional<FitReport> fit;
  if (reference) fit = frobenius_fit(*reference, traj);
  return UsdaResult{std::move(params), std::move(estimate), std::move(traj), std::move(fit)};
}

}  // namespace sisnet
