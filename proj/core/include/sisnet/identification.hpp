#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sisnet/dynamics.hpp"

namespace sisnet {

/// Stacked regression rhs = phi * [beta, delta]^T. Row k*n + i (homogeneous)
/// or row k (per node) holds [h (1 - x_i^k) (A x^k)_i, -h x_i^k] against
/// x_i^{k+1} - x_i^k.
struct RegressionSystem {
  Matrix phi;
  Vector rhs;
  double h_used = 1.0;
};

/// Why a system could not be identified.
enum class IdentifiabilityCase {
  kIdentifiable,
  kHealthyStationary,  // states never move and phi = 0: any parameters fit
  kEndemicStationary,  // states never move, phi != 0: parameters in null(phi)
  kRankDeficient,      // movement, but rank(phi) < 2
};

std::string_view to_string(IdentifiabilityCase c);
IdentifiabilityCase parse_identifiability_case(std::string_view name);

enum class EstimateKind { kHomogeneous, kHeterogeneous, kRatio };

std::string_view to_string(EstimateKind k);

/// Estimates are vectors of length 1 (homogeneous) or n (per node). Entries
/// that could not be identified are NaN.
struct EstimationResult {
  EstimateKind kind = EstimateKind::kHomogeneous;
  Vector beta_hat;
  Vector delta_hat;
  Vector ratio_hat;
  double residual_norm = 0.0;
  bool identifiable = false;
  /// Scalar rank for homogeneous fits; minimum per-node rank otherwise.
  int rank = 0;
  std::vector<int> node_ranks;
  IdentifiabilityCase case_tag = IdentifiabilityCase::kIdentifiable;
  std::vector<IdentifiabilityCase> node_cases;  // per node, heterogeneous only
  /// True when h was a guess, so beta_hat and delta_hat are scaled by
  /// h_true / h_guess and only the ratio is meaningful.
  bool scaled = false;
  double h_used = 1.0;

  std::size_t transitions = 0;  // T
  bool movement_detected = false;
  std::vector<NodeIndex> nodes_stationary;
};

/// Throws InsufficientDataError when T = 0 and DimensionError on shape
/// mismatch.
RegressionSystem build_regression(const Trajectory& traj, const WeightedDigraph& a, double h);

/// Per-node system for node i (T rows).
RegressionSystem build_node_regression(const Trajectory& traj, const WeightedDigraph& a, double h,
                                       NodeIndex i);

/// Solves a two-parameter least-squares problem by SVD with relative rank
/// tolerance 1e-10 * sigma_max. `rank` receives the numerical rank; the
/// solution is only meaningful when it equals 2.
Eigen::Vector2d solve_least_squares(const Matrix& phi, const Vector& rhs, int& rank);

/// Homogeneous (beta, delta). Identifiable iff some x^l != x^0 and
/// rank(phi) = 2. Needs n > 1.
EstimationResult identify_homogeneous(const Trajectory& traj, const WeightedDigraph& a, double h);

/// Same regression with a guessed step size: beta_hat and delta_hat come out
/// scaled by h_true / h_guess, the ratio delta/beta is exact. Throws
/// IdentificationError when beta_hat = 0.
EstimationResult identify_ratio(const Trajectory& traj, const WeightedDigraph& a, double h_guess);

/// Per-node (beta_i, delta_i); unidentifiable nodes are listed in
/// nodes_stationary and left NaN. `identifiable` is true only when every node
/// was identified; `case_tag` then reports the first failing node's case.
EstimationResult identify_heterogeneous(const Trajectory& traj, const WeightedDigraph& a, double h);

/// delta_i / beta_i = ((1 - x*_i) / x*_i) * sum_j a_ij x*_j for an observed
/// endemic state. Every entry of x* must be >= 1e-12.
Vector ratio_from_endemic(const StateVector& x_star, const WeightedDigraph& a);

/// delta_i = beta_assumed_i * ratio_i.
Vector derive_delta_from_endemic(const StateVector& x_star, const WeightedDigraph& a,
                                 const Vector& beta_assumed);

}  // namespace sisnet
