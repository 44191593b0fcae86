#include "sisnet/spectral.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <fmt/format.h>

#include "sisnet/errors.hpp"

namespace sisnet {
namespace {

struct PowerResult {
  Vector vector;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Power iteration on the nonnegative matrix `shifted`; iterates stay in the
// positive orthant so the 1-norm is just the sum.
PowerResult power_iterate(const Matrix& shifted, const SpectralOptions& options) {
  const auto n = shifted.rows();
  PowerResult result;
  result.vector = Vector::Constant(n, 1.0 / static_cast<double>(n));
  Vector next(n);
  for (std::size_t k = 1; k <= options.max_iterations; ++k) {
    next.noalias() = shifted * result.vector;
    const double norm = next.sum();
    result.value = norm;  // sum(v) == 1, so this is the Collatz-Wielandt ratio
    next /= norm;
    const double change = (next - result.vector).lpNorm<1>();
    result.vector.swap(next);
    result.iterations = k;
    if (change <= options.tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

// Shifted inverse iteration started from a power-iteration estimate.
void polish(const Matrix& m, PowerResult& r) {
  const auto n = m.rows();
  double lambda = (m * r.vector).sum() / r.vector.sum();
  for (int pass = 0; pass < 50; ++pass) {
    const double shift = lambda + 1e-10 * std::max(1.0, std::abs(lambda));
    Eigen::PartialPivLU<Matrix> lu(m - shift * Matrix::Identity(n, n));
    Vector y = lu.solve(r.vector);
    if (!y.allFinite()) break;
    if (y.sum() < 0) y = -y;
    y /= y.lpNorm<1>();
    const double change = (y - r.vector).lpNorm<1>();
    r.vector = y;
    lambda = (m * r.vector).sum() / r.vector.sum();
    ++r.iterations;
    if (change <= 1e-14) break;
  }
  r.value = lambda;
}

Vector normalized_real(const Eigen::VectorXcd& v) {
  Vector re = v.real();
  if (re.lpNorm<1>() < 1e-300) re = v.imag();
  if (re.sum() < 0) re = -re;
  const double norm = re.lpNorm<1>();
  if (norm > 0) re /= norm;
  return re;
}

SpectralSummary dense_route(const Matrix& m) {
  SpectralSummary s;
  s.method = SpectralMethod::kDenseQR;
  Eigen::EigenSolver<Matrix> right(m, true);
  Eigen::EigenSolver<Matrix> left(m.transpose(), true);
  if (right.info() != Eigen::Success || left.info() != Eigen::Success) {
    s.converged = false;
    s.spectral_abscissa = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  auto pick = [](const Eigen::VectorXcd& values) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < values.size(); ++i) {
      const auto& a = values(i);
      const auto& b = values(best);
      // Prefer the real member of a conjugate pair on ties.
      if (a.real() > b.real() || (a.real() == b.real() && std::abs(a.imag()) < std::abs(b.imag()))) {
        best = i;
      }
    }
    return best;
  };
  const Eigen::Index r = pick(right.eigenvalues());
  const Eigen::Index l = pick(left.eigenvalues());
  s.spectral_abscissa = right.eigenvalues()(r).real();
  s.dominant_right_vector = normalized_real(right.eigenvectors().col(r));
  s.dominant_left_vector = normalized_real(left.eigenvectors().col(l));
  s.converged = true;
  return s;
}

}  // namespace

bool is_metzler(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != j && m(i, j) < 0.0) return false;
    }
  }
  return true;
}

SpectralSummary spectral_abscissa(const Matrix& m, const SpectralOptions& options) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw DimensionError(fmt::format("spectral_abscissa needs a non-empty square matrix, got {}x{}",
                                     m.rows(), m.cols()));
  }
  if (!m.allFinite()) throw ValidationError("spectral_abscissa: matrix has non-finite entries");

  if (!is_metzler(m)) return dense_route(m);
  const bool irreducible = is_irreducible(m);

  const auto n = m.rows();
  const double shift = m.diagonal().cwiseAbs().maxCoeff() + 1.0;
  const Matrix shifted = m + shift * Matrix::Identity(n, n);

  PowerResult right = power_iterate(shifted, options);
  PowerResult left = power_iterate(shifted.transpose(), options);
  const bool converged = right.converged && left.converged;

  SpectralSummary s;
  s.method = SpectralMethod::kPowerIteration;
  s.converged = converged;

  if (!irreducible) {
    // Reducible: the spectral radius of the shifted matrix is still an
    // eigenvalue with a nonnegative eigenvector, but the left and right
    // vectors may have disjoint support.
    if (!converged) return dense_route(m);
    s.iterations = std::max(right.iterations, left.iterations);
    s.spectral_abscissa = right.value - shift;
    s.dominant_right_vector = std::move(right.vector);
    s.dominant_left_vector = std::move(left.vector);
    return s;
  }

  if (!right.converged) polish(m, right);
  if (!left.converged) polish(m.transpose(), left);
  s.iterations = std::max(right.iterations, left.iterations);
  s.dominant_right_vector = std::move(right.vector);
  s.dominant_left_vector = std::move(left.vector);
  // Two-sided Rayleigh quotient; second-order accurate in the vector error.
  const Vector mv = m * s.dominant_right_vector;
  s.spectral_abscissa =
      s.dominant_left_vector.dot(mv) / s.dominant_left_vector.dot(s.dominant_right_vector);
  return s;
}

}  // namespace sisnet
