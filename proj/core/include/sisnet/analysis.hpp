#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "sisnet/dynamics.hpp"
#include "sisnet/spectral.hpp"

namespace sisnet {

inline constexpr double kRegimeTolerance = 1e-9;
inline constexpr double kDefinitenessTolerance = 1e-8;
inline constexpr double kEquilibriumTolerance = 1e-10;

enum class Regime { kStableStrict, kStableBoundary, kEndemic };

std::string_view to_string(Regime regime);
Regime parse_regime(std::string_view name);

/// Regime of the threshold value s1 = s1(I - hD + hB) with tolerance tol:
/// strict below 1 - tol, endemic above 1 + tol, boundary in between.
Regime regime_of(double s1, double tol = kRegimeTolerance);

struct HomogeneousThreshold {
  double s1_adjacency = 0.0;          // s1(A)
  double ratio_delta_over_beta = 0.0;  // delta / beta
  Regime regime = Regime::kStableStrict;
  bool agrees = true;  // same regime as the matrix test
};

struct ThresholdReport {
  double s1_value = 0.0;
  Regime regime = Regime::kStableStrict;
  std::optional<HomogeneousThreshold> homogeneous_form;
  AssumptionReport assumptions;
  bool irreducible = true;
  bool spectral_converged = true;
};

/// M = I - hD + hB.
Matrix threshold_matrix(const SpreadParams& p);

/// Regime classification through s1(I - hD + hB). For homogeneous parameters
/// the scalar test s1(A) vs delta/beta is reported alongside; a disagreement
/// between the two is flagged and warned about. A reducible B is flagged
/// since the stability results assume irreducibility.
ThresholdReport classify(const SpreadParams& p);

enum class Definiteness { kNegativeDefinite, kNegativeSemidefinite };

std::string_view to_string(Definiteness d);
Definiteness parse_definiteness(std::string_view name);

struct LyapunovCertificate {
  Vector p_diagonal;
  Definiteness definiteness = Definiteness::kNegativeDefinite;
  double max_eig_of_mtpm_minus_p = 0.0;
  double s1_value = 0.0;
};

/// Diagonal weights p_i = u_i / v_i from the left/right Perron vectors of
/// M = I - hD + hB, scaled so min p_i = 1, verified by a symmetric
/// eigensolve of M^T P M - P.
///
/// Throws PreconditionError when M is not an irreducible nonnegative matrix,
/// and CertificateError when s1(M) > 1 or verification fails.
LyapunovCertificate lyapunov_weights(const SpreadParams& p);

struct EndemicState {
  StateVector x_star;
  double residual = 0.0;  // |step_euler(p, x) - x|_inf at the returned point
  std::size_t iterations = 0;
  bool exists = false;
};

struct EndemicOptions {
  double tolerance = kEquilibriumTolerance;
  std::size_t max_iterations = 1'000'000;
  double initial_margin = 1e-3;  // start from (1 - margin) * 1
};

/// Strictly positive equilibrium of the Euler model in the endemic regime,
/// found by forward iteration with an internal step h' = 1 / max_i(delta_i +
/// sum_j beta_ij) started near the all-ones state. Outside the endemic regime
/// the healthy state is the only equilibrium and exists = false, x* = 0.
///
/// Throws ConvergenceError if the defect does not drop below the tolerance
/// within the iteration budget or the limit is not strictly positive.
EndemicState endemic_equilibrium(const SpreadParams& p, const EndemicOptions& options = {});

}  // namespace sisnet
