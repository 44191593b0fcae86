#include "sisnet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "sisnet/diagnostics.hpp"
#include "sisnet/errors.hpp"

namespace sisnet {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::kStableStrict: return "stable_strict";
    case Regime::kStableBoundary: return "stable_boundary";
    case Regime::kEndemic: return "endemic";
  }
  return "unknown";
}

Regime parse_regime(std::string_view name) {
  if (name == "stable_strict") return Regime::kStableStrict;
  if (name == "stable_boundary") return Regime::kStableBoundary;
  if (name == "endemic") return Regime::kEndemic;
  throw ValidationError(fmt::format("unknown regime '{}'", name));
}

std::string_view to_string(Definiteness d) {
  return d == Definiteness::kNegativeDefinite ? "negative_definite" : "negative_semidefinite";
}

Definiteness parse_definiteness(std::string_view name) {
  if (name == "negative_definite") return Definiteness::kNegativeDefinite;
  if (name == "negative_semidefinite") return Definiteness::kNegativeSemidefinite;
  throw ValidationError(fmt::format("unknown definiteness '{}'", name));
}

Regime regime_of(double s1, double tol) {
  if (s1 < 1.0 - tol) return Regime::kStableStrict;
  if (s1 > 1.0 + tol) return Regime::kEndemic;
  return Regime::kStableBoundary;
}

Matrix threshold_matrix(const SpreadParams& p) {
  Matrix m = p.h() * p.infection_matrix();
  m.diagonal().array() += 1.0 - p.h() * p.delta().array();
  return m;
}

ThresholdReport classify(const SpreadParams& p) {
  ThresholdReport report;
  report.assumptions = check_assumptions(p);
  report.irreducible = report.assumptions.a5_irreducible;
  if (!report.irreducible) {
    warn(fmt::format("infection matrix is reducible ({} components); the threshold results assume "
                     "irreducibility",
                     report.assumptions.component_count));
  }
  if (!report.assumptions.a2_nonnegative || !report.assumptions.a4_nontrivial_spread) {
    for (const auto& f : report.assumptions.failures()) warn(f);
  }

  const SpectralSummary s = spectral_abscissa(threshold_matrix(p));
  report.s1_value = s.spectral_abscissa;
  report.spectral_converged = s.converged;
  report.regime = regime_of(report.s1_value);

  if (p.is_homogeneous()) {
    HomogeneousThreshold hom;
    const double beta = p.beta()(0);
    const double delta = p.delta()(0);
    hom.s1_adjacency = spectral_abscissa(p.adjacency().weights()).spectral_abscissa;
    hom.ratio_delta_over_beta =
        beta > 0.0 ? delta / beta : std::numeric_limits<double>::infinity();
    // s1(I - hD + hB) - 1 = h (beta s1(A) - delta); compare on that scale so
    // both tests share the tolerance.
    hom.regime = regime_of(1.0 + p.h() * (beta * hom.s1_adjacency - delta));
    hom.agrees = hom.regime == report.regime;
    if (!hom.agrees) {
      warn(fmt::format("homogeneous threshold s1(A) = {} vs delta/beta = {} disagrees with s1(M) = {}",
                       hom.s1_adjacency, hom.ratio_delta_over_beta, report.s1_value));
    }
    report.homogeneous_form = hom;
  }
  return report;
}

LyapunovCertificate lyapunov_weights(const SpreadParams& p) {
  const Matrix m = threshold_matrix(p);
  if ((m.array() < 0.0).any()) {
    throw PreconditionError(
        "M = I - hD + hB has negative entries (h * delta_i > 1); the diagonal certificate needs a "
        "nonnegative matrix");
  }
  if (!is_irreducible(m)) {
    throw PreconditionError("M = I - hD + hB is reducible; the diagonal certificate needs irreducibility");
  }

  const SpectralSummary s = spectral_abscissa(m);
  const Regime regime = regime_of(s.spectral_abscissa);
  if (regime == Regime::kEndemic) {
    throw CertificateError(
        fmt::format("s1(M) = {:.12g} > 1: the healthy state admits no diagonal Lyapunov certificate",
                    s.spectral_abscissa),
        s.spectral_abscissa);
  }

  LyapunovCertificate cert;
  cert.s1_value = s.spectral_abscissa;
  cert.p_diagonal = s.dominant_left_vector.cwiseQuotient(s.dominant_right_vector);
  cert.p_diagonal /= cert.p_diagonal.minCoeff();

  Matrix q = m.transpose() * cert.p_diagonal.asDiagonal() * m;
  q.diagonal() -= cert.p_diagonal;
  q = 0.5 * (q + q.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(q, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw CertificateError("symmetric eigensolver failed on M^T P M - P",
                           std::numeric_limits<double>::quiet_NaN());
  }
  cert.max_eig_of_mtpm_minus_p = eig.eigenvalues().maxCoeff();

  if (regime == Regime::kStableStrict) {
    cert.definiteness = Definiteness::kNegativeDefinite;
    if (!(cert.max_eig_of_mtpm_minus_p < 0.0)) {
      throw CertificateError(
          fmt::format("certificate verification failed: max eig of M^T P M - P = {:.6g} is not negative",
                      cert.max_eig_of_mtpm_minus_p),
          cert.max_eig_of_mtpm_minus_p);
    }
  } else {
    cert.definiteness = Definiteness::kNegativeSemidefinite;
    if (std::abs(cert.max_eig_of_mtpm_minus_p) > kDefinitenessTolerance) {
      throw CertificateError(
          fmt::format("certificate verification failed: boundary case expects max eig 0, got {:.6g}",
                      cert.max_eig_of_mtpm_minus_p),
          cert.max_eig_of_mtpm_minus_p);
    }
  }
  return cert;
}

EndemicState endemic_equilibrium(const SpreadParams& p, const EndemicOptions& options) {
  const auto n = static_cast<Eigen::Index>(p.size());
  EndemicState state;
  state.x_star = StateVector::Zero(n);

  const ThresholdReport report = classify(p);
  if (report.regime != Regime::kEndemic) return state;

  const Matrix& b = p.infection_matrix();
  const Vector& delta = p.delta();
  const double scale = (delta + b.rowwise().sum()).maxCoeff();
  const double inner_h = 1.0 / scale;
  const double defect_scale = std::max(p.h(), inner_h);

  StateVector x = StateVector::Constant(n, 1.0 - options.initial_margin);
  double defect = std::numeric_limits<double>::infinity();
  std::size_t k = 0;
  for (;; ++k) {
    const Vector field = (1.0 - x.array()) * (b * x).array() - delta.array() * x.array();
    defect = defect_scale * field.lpNorm<Eigen::Infinity>();
    if (defect <= options.tolerance || k == options.max_iterations) break;
    x += inner_h * field;
  }
  if (defect > options.tolerance) {
    throw ConvergenceError(
        fmt::format("endemic iteration did not converge in {} steps (defect {:.3g})", k, defect), defect);
  }
  if (x.minCoeff() <= 1e-12) {
    throw ConvergenceError(
        fmt::format("endemic limit is not strictly positive (min entry {:.3g})", x.minCoeff()), defect);
  }

  state.x_star = x;
  state.iterations = k;
  state.residual = (step_euler(p, x) - x).lpNorm<Eigen::Infinity>();
  state.exists = true;
  return state;
}

}  // namespace sisnet
