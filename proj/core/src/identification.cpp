#include "sisnet/identification.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "sisnet/diagnostics.hpp"
#include "sisnet/errors.hpp"

namespace sisnet {
namespace {

constexpr double kRankTolerance = 1e-10;
constexpr double kPositiveStateFloor = 1e-12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_shapes(const Trajectory& traj, const WeightedDigraph& a) {
  if (traj.nodes() != a.size()) {
    throw DimensionError(fmt::format("trajectory has {} nodes, adjacency has {}", traj.nodes(), a.size()));
  }
  if (traj.states.rows() < 2) {
    throw InsufficientDataError(
        "insufficient data: at least one transition (T > 0) is needed to identify spread parameters");
  }
}

bool row_moves(const Matrix& states) {
  for (Eigen::Index k = 1; k < states.rows(); ++k) {
    if (states.row(k) != states.row(0)) return true;
  }
  return false;
}

bool node_moves(const Matrix& states, Eigen::Index i) {
  for (Eigen::Index k = 1; k < states.rows(); ++k) {
    if (states(k, i) != states(0, i)) return true;
  }
  return false;
}

void warn_if_negative(double beta, double delta, std::string_view where) {
  if (beta < 0.0 || delta < 0.0) {
    warn(fmt::format("{}: negative estimate (beta = {}, delta = {}) suggests model mismatch", where, beta,
                     delta));
  }
}

}  // namespace

std::string_view to_string(IdentifiabilityCase c) {
  switch (c) {
    case IdentifiabilityCase::kIdentifiable: return "identifiable";
    case IdentifiabilityCase::kHealthyStationary: return "healthy_stationary";
    case IdentifiabilityCase::kEndemicStationary: return "endemic_stationary";
    case IdentifiabilityCase::kRankDeficient: return "rank_deficient";
  }
  return "unknown";
}

IdentifiabilityCase parse_identifiability_case(std::string_view name) {
  if (name == "identifiable") return IdentifiabilityCase::kIdentifiable;
  if (name == "healthy_stationary") return IdentifiabilityCase::kHealthyStationary;
  if (name == "endemic_stationary") return IdentifiabilityCase::kEndemicStationary;
  if (name == "rank_deficient") return IdentifiabilityCase::kRankDeficient;
  throw ValidationError(fmt::format("unknown identifiability case '{}'", name));
}

std::string_view to_string(EstimateKind k) {
  switch (k) {
    case EstimateKind::kHomogeneous: return "homogeneous";
    case EstimateKind::kHeterogeneous: return "heterogeneous";
    case EstimateKind::kRatio: return "ratio";
  }
  return "unknown";
}

RegressionSystem build_regression(const Trajectory& traj, const WeightedDigraph& a, double h) {
  check_shapes(traj, a);
  const Matrix& x = traj.states;
  const auto n = x.cols();
  const auto transitions = x.rows() - 1;

  RegressionSystem sys;
  sys.h_used = h;
  sys.phi.resize(transitions * n, 2);
  sys.rhs.resize(transitions * n);
  for (Eigen::Index k = 0; k < transitions; ++k) {
    const Vector ax = a.weights() * x.row(k).transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index r = k * n + i;
      sys.phi(r, 0) = h * ((1.0 - x(k, i)) * ax(i));
      sys.phi(r, 1) = h * (-x(k, i));
      sys.rhs(r) = x(k + 1, i) - x(k, i);
    }
  }
  return sys;
}

RegressionSystem build_node_regression(const Trajectory& traj, const WeightedDigraph& a, double h,
                                       NodeIndex node) {
  check_shapes(traj, a);
  if (node >= traj.nodes()) throw ValidationError(fmt::format("node {} out of range", node));
  const Matrix& x = traj.states;
  const auto i = static_cast<Eigen::Index>(node);
  const auto transitions = x.rows() - 1;
  const auto a_row = a.weights().row(i);

  RegressionSystem sys;
  sys.h_used = h;
  sys.phi.resize(transitions, 2);
  sys.rhs.resize(transitions);
  for (Eigen::Index k = 0; k < transitions; ++k) {
    const double ax = a_row.dot(x.row(k));
    sys.phi(k, 0) = h * ((1.0 - x(k, i)) * ax);
    sys.phi(k, 1) = h * (-x(k, i));
    sys.rhs(k) = x(k + 1, i) - x(k, i);
  }
  return sys;
}

Eigen::Vector2d solve_least_squares(const Matrix& phi, const Vector& rhs, int& rank) {
  Eigen::JacobiSVD<Matrix> svd(phi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kRankTolerance);
  rank = svd.singularValues().size() == 0 || svd.singularValues()(0) == 0.0
             ? 0
             : static_cast<int>(svd.rank());
  if (rank == 0) return Eigen::Vector2d::Zero();
  return svd.solve(rhs);
}

EstimationResult identify_homogeneous(const Trajectory& traj, const WeightedDigraph& a, double h) {
  if (a.size() < 2) throw PreconditionError("homogeneous identification needs n > 1 nodes");
  const RegressionSystem sys = build_regression(traj, a, h);

  EstimationResult r;
  r.kind = EstimateKind::kHomogeneous;
  r.h_used = h;
  r.transitions = traj.steps();
  r.movement_detected = row_moves(traj.states);
  for (Eigen::Index i = 0; i < traj.states.cols(); ++i) {
    if (!node_moves(traj.states, i)) r.nodes_stationary.push_back(static_cast<NodeIndex>(i));
  }
  r.beta_hat = Vector::Constant(1, kNaN);
  r.delta_hat = Vector::Constant(1, kNaN);
  r.ratio_hat = Vector::Constant(1, kNaN);

  const Eigen::Vector2d theta = solve_least_squares(sys.phi, sys.rhs, r.rank);
  r.node_ranks = {r.rank};

  if (!r.movement_detected) {
    r.case_tag = sys.phi.isZero(0.0) ? IdentifiabilityCase::kHealthyStationary
                                     : IdentifiabilityCase::kEndemicStationary;
    return r;
  }
  if (r.rank < 2) {
    r.case_tag = IdentifiabilityCase::kRankDeficient;
    return r;
  }
  r.identifiable = true;
  r.case_tag = IdentifiabilityCase::kIdentifiable;
  r.beta_hat(0) = theta(0);
  r.delta_hat(0) = theta(1);
  r.ratio_hat(0) = theta(1) / theta(0);
  r.residual_norm = (sys.phi * theta - sys.rhs).norm();
  warn_if_negative(theta(0), theta(1), "identify_homogeneous");
  return r;
}

EstimationResult identify_ratio(const Trajectory& traj, const WeightedDigraph& a, double h_guess) {
  if (!(h_guess > 0.0) || !std::isfinite(h_guess)) {
    throw ValidationError(fmt::format("h_guess must be positive, got {}", h_guess));
  }
  EstimationResult r = identify_homogeneous(traj, a, h_guess);
  r.kind = EstimateKind::kRatio;
  r.scaled = true;
  if (r.identifiable && r.beta_hat(0) == 0.0) {
    throw IdentificationError("beta estimate is zero; the ratio delta/beta is undefined", "zero_beta");
  }
  return r;
}

EstimationResult identify_heterogeneous(const Trajectory& traj, const WeightedDigraph& a, double h) {
  if (a.size() < 2) throw PreconditionError("heterogeneous identification needs n > 1 nodes");
  check_shapes(traj, a);
  const auto n = static_cast<Eigen::Index>(a.size());

  EstimationResult r;
  r.kind = EstimateKind::kHeterogeneous;
  r.h_used = h;
  r.transitions = traj.steps();
  r.movement_detected = row_moves(traj.states);
  r.beta_hat = Vector::Constant(n, kNaN);
  r.delta_hat = Vector::Constant(n, kNaN);
  r.ratio_hat = Vector::Constant(n, kNaN);
  r.node_ranks.assign(static_cast<std::size_t>(n), 0);
  r.node_cases.assign(static_cast<std::size_t>(n), IdentifiabilityCase::kIdentifiable);
  r.rank = 2;

  double squared_residual = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto node = static_cast<NodeIndex>(i);
    const RegressionSystem sys = build_node_regression(traj, a, h, node);
    int rank = 0;
    const Eigen::Vector2d theta = solve_least_squares(sys.phi, sys.rhs, rank);
    r.node_ranks[node] = rank;
    r.rank = std::min(r.rank, rank);

    IdentifiabilityCase c = IdentifiabilityCase::kIdentifiable;
    if (!node_moves(traj.states, i)) {
      c = sys.phi.isZero(0.0) ? IdentifiabilityCase::kHealthyStationary
                              : IdentifiabilityCase::kEndemicStationary;
    } else if (rank < 2) {
      c = IdentifiabilityCase::kRankDeficient;
    }
    r.node_cases[node] = c;
    if (c != IdentifiabilityCase::kIdentifiable) {
      r.nodes_stationary.push_back(node);
      if (r.case_tag == IdentifiabilityCase::kIdentifiable) r.case_tag = c;
      continue;
    }
    r.beta_hat(i) = theta(0);
    r.delta_hat(i) = theta(1);
    r.ratio_hat(i) = theta(1) / theta(0);
    squared_residual += (sys.phi * theta - sys.rhs).squaredNorm();
    warn_if_negative(theta(0), theta(1), fmt::format("identify_heterogeneous node {}", i));
  }
  r.identifiable = r.nodes_stationary.empty();
  r.residual_norm = std::sqrt(squared_residual);
  return r;
}

Vector ratio_from_endemic(const StateVector& x_star, const WeightedDigraph& a) {
  if (static_cast<std::size_t>(x_star.size()) != a.size()) {
    throw DimensionError(fmt::format("x* has {} entries, adjacency has {} nodes", x_star.size(), a.size()));
  }
  for (Eigen::Index i = 0; i < x_star.size(); ++i) {
    if (!(x_star(i) >= kPositiveStateFloor)) {
      throw PreconditionError(fmt::format(
          "endemic ratio needs x* >> 0; entry {} is {} (division by zero)", i, x_star(i)));
    }
  }
  const Vector ax = a.weights() * x_star;
  return ((1.0 - x_star.array()) / x_star.array()) * ax.array();
}

Vector derive_delta_from_endemic(const StateVector& x_star, const WeightedDigraph& a,
                                 const Vector& beta_assumed) {
  if (beta_assumed.size() != x_star.size()) {
    throw DimensionError(fmt::format("beta has {} entries, x* has {}", beta_assumed.size(), x_star.size()));
  }
  return beta_assumed.cwiseProduct(ratio_from_endemic(x_star, a));
}

}  // namespace sisnet
