#pragma once

#include <cstddef>

#include "sisnet/graph.hpp"

namespace sisnet {

struct SpectralOptions {
  double tolerance = 1e-12;       // 1-norm change of the normalized iterate
  std::size_t max_iterations = 10'000;
};

enum class SpectralMethod { kPowerIteration, kDenseQR };

struct SpectralSummary {
  double spectral_abscissa = 0.0;
  Vector dominant_right_vector;
  Vector dominant_left_vector;
  std::size_t iterations = 0;
  bool converged = false;
  SpectralMethod method = SpectralMethod::kPowerIteration;
};

/// Largest real part among the eigenvalues of `m`.
///
/// Matrices with nonnegative off-diagonal entries (nonnegative or Metzler) are
/// handled by power iteration on m + cI, c = max|m_ii| + 1, run separately on
/// m and m^T from the uniform vector. For irreducible input the returned
/// vectors are the strictly positive Perron vectors with unit 1-norm; if the
/// cap is hit the summary is flagged `converged = false` and the iterate is
/// polished by shifted inverse iteration before being returned. Reducible
/// input that fails to converge falls through to the dense route.
///
/// Everything else goes to a dense Hessenberg-QR eigensolver; the vectors are
/// then the real parts of the eigenvectors for the eigenvalue of largest real
/// part, sign-fixed to a nonnegative sum and 1-norm normalized.
SpectralSummary spectral_abscissa(const Matrix& m, const SpectralOptions& options = {});

/// True when every off-diagonal entry is >= 0.
bool is_metzler(const Matrix& m);

}  // namespace sisnet
