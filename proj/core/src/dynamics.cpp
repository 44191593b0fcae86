#include "sisnet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "sisnet/diagnostics.hpp"
#include "sisnet/errors.hpp"

namespace sisnet {
namespace {

void require_finite(const Vector& v, std::string_view what) {
  if (!v.allFinite()) throw ValidationError(fmt::format("{} has non-finite entries", what));
}

void require_step(double h) {
  if (!std::isfinite(h) || h < 0.0) {
    throw ValidationError(fmt::format("step size h must be finite and >= 0, got {}", h));
  }
}

void require_state(const SpreadParams& p, const StateVector& x) {
  if (static_cast<std::size_t>(x.size()) != p.size()) {
    throw DimensionError(fmt::format("state has {} entries, parameters describe {} nodes", x.size(), p.size()));
  }
}

void require_factored(const SpreadParams& p, std::string_view op) {
  if (!p.is_factored()) {
    throw PreconditionError(fmt::format(
        "{} needs factored parameters (beta_i and a_ij separately); got a combined B matrix", op));
  }
}

StateVector product_update(const SpreadParams& p, const StateVector& x) {
  const Vector& beta = p.beta();
  const Matrix& a = p.adjacency().weights();
  const Vector& delta = p.delta();
  const auto n = x.size();
  StateVector next(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double escape = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) escape *= 1.0 - beta(i) * a(i, j) * x(j);
    next(i) = x(i) * (1.0 - delta(i)) + (1.0 - x(i)) * (1.0 - escape);
  }
  return next;
}

}  // namespace

SpreadParams::SpreadParams(double h, Vector delta, InfectionForm form,
                           std::optional<double> scalar_beta, std::optional<Vector> beta,
                           std::optional<WeightedDigraph> a, Matrix b)
    : h_(h),
      delta_(std::move(delta)),
      form_(form),
      scalar_beta_(scalar_beta),
      beta_(std::move(beta)),
      a_(std::move(a)),
      b_(std::move(b)) {}

SpreadParams SpreadParams::homogeneous(double h, double beta, double delta, WeightedDigraph a) {
  const auto n = static_cast<Eigen::Index>(a.size());
  return scalar_beta(h, beta, Vector::Constant(n, delta), std::move(a));
}

SpreadParams SpreadParams::scalar_beta(double h, double beta, Vector delta, WeightedDigraph a) {
  if (!std::isfinite(beta)) throw ValidationError("beta must be finite");
  const auto n = static_cast<Eigen::Index>(a.size());
  SpreadParams p = per_node(h, Vector::Constant(n, beta), std::move(delta), std::move(a));
  p.form_ = InfectionForm::kScalar;
  p.scalar_beta_ = beta;
  return p;
}

SpreadParams SpreadParams::per_node(double h, Vector beta, Vector delta, WeightedDigraph a) {
  require_step(h);
  require_finite(beta, "beta");
  require_finite(delta, "delta");
  const auto n = static_cast<Eigen::Index>(a.size());
  if (beta.size() != n || delta.size() != n) {
    throw DimensionError(fmt::format("beta ({}) and delta ({}) must match the {} graph nodes",
                                     beta.size(), delta.size(), n));
  }
  Matrix b = beta.asDiagonal() * a.weights();
  return SpreadParams(h, std::move(delta), InfectionForm::kPerNode, std::nullopt, std::move(beta),
                      std::move(a), std::move(b));
}

SpreadParams SpreadParams::combined(double h, Vector delta, Matrix b) {
  require_step(h);
  require_finite(delta, "delta");
  if (b.rows() == 0 || b.rows() != b.cols() || b.rows() != delta.size()) {
    throw DimensionError(fmt::format("B must be square and match delta ({}), got {}x{}",
                                     delta.size(), b.rows(), b.cols()));
  }
  if (!b.allFinite()) throw ValidationError("B has non-finite entries");
  return SpreadParams(h, std::move(delta), InfectionForm::kCombined, std::nullopt, std::nullopt,
                      std::nullopt, std::move(b));
}

const Vector& SpreadParams::beta() const {
  if (!beta_) throw PreconditionError("per-node beta is not available for combined-B parameters");
  return *beta_;
}

const WeightedDigraph& SpreadParams::adjacency() const {
  if (!a_) throw PreconditionError("adjacency is not available for combined-B parameters");
  return *a_;
}

bool SpreadParams::is_homogeneous() const {
  if (!is_factored() || size() == 0) return false;
  const Vector& b = *beta_;
  return (b.array() == b(0)).all() && (delta_.array() == delta_(0)).all();
}

SpreadParams SpreadParams::with_step(double h) const {
  require_step(h);
  SpreadParams copy = *this;
  copy.h_ = h;
  return copy;
}

std::string_view to_string(Model model) {
  switch (model) {
    case Model::kEuler: return "euler";
    case Model::kProduct: return "product";
    case Model::kTruncated: return "truncated";
  }
  return "unknown";
}

Model parse_model(std::string_view name) {
  if (name == "euler") return Model::kEuler;
  if (name == "product") return Model::kProduct;
  if (name == "truncated") return Model::kTruncated;
  throw ValidationError(fmt::format("unknown model '{}' (expected euler, product or truncated)", name));
}

std::vector<std::string> AssumptionReport::failures() const {
  std::vector<std::string> out;
  if (!a1_initial_state) {
    out.push_back(fmt::format("A1: initial state outside [0,1] at {} node(s) (range [{}, {}])",
                              a1_offending.size(), min_initial_state, max_initial_state));
  }
  if (!a2_nonnegative) {
    out.push_back(fmt::format("A2: negative rate at {} node(s) (min {})", a2_offending.size(), min_parameter));
  }
  if (!a3_step_bounds) {
    out.push_back(fmt::format(
        "A3: step bounds violated at {} node(s) (max h*delta = {}, max h*off-diagonal row sum = {})",
        a3_offending.size(), max_h_delta, max_h_offdiagonal_row_sum));
  }
  if (!a4_nontrivial_spread) out.push_back("A4: h = 0 or no off-diagonal infection entry is positive");
  if (!a5_irreducible) {
    out.push_back(fmt::format("A5: infection matrix is reducible ({} strongly connected components)",
                              component_count));
  }
  return out;
}

AssumptionReport check_assumptions(const SpreadParams& p) {
  AssumptionReport r;
  const Matrix& b = p.infection_matrix();
  const Vector& delta = p.delta();
  const double h = p.h();
  const auto n = b.rows();

  r.min_parameter = std::min(delta.minCoeff(), b.minCoeff());
  bool any_offdiagonal = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    bool negative = delta(i) < 0.0;
    double offdiag = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      negative = negative || b(i, j) < 0.0;
      if (j != i) {
        offdiag += b(i, j);
        any_offdiagonal = any_offdiagonal || b(i, j) > 0.0;
      }
    }
    if (negative) r.a2_offending.push_back(static_cast<NodeIndex>(i));

    const double h_delta = h * delta(i);
    const double h_off = h * offdiag;
    const double h_full = h * (offdiag + b(i, i));
    r.max_h_delta = std::max(r.max_h_delta, h_delta);
    r.max_h_offdiagonal_row_sum = std::max(r.max_h_offdiagonal_row_sum, h_off);
    r.max_h_row_sum = std::max(r.max_h_row_sum, h_full);
    if (h_delta > 1.0 || h_off > 1.0) r.a3_offending.push_back(static_cast<NodeIndex>(i));
    if (h_full > 1.0) r.a3_including_self_loops = false;
  }
  r.a2_nonnegative = r.a2_offending.empty();
  r.a3_step_bounds = r.a3_offending.empty();
  r.a3_including_self_loops = r.a3_including_self_loops && r.a3_step_bounds;
  r.a4_nontrivial_spread = h != 0.0 && any_offdiagonal;
  r.component_count = n <= 1 ? 1 : strongly_connected_components(b).size();
  r.a5_irreducible = r.component_count == 1;
  return r;
}

AssumptionReport check_assumptions(const SpreadParams& p, const StateVector& x0) {
  require_state(p, x0);
  AssumptionReport r = check_assumptions(p);
  r.initial_state_checked = true;
  r.min_initial_state = x0.minCoeff();
  r.max_initial_state = x0.maxCoeff();
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    if (!(x0(i) >= 0.0 && x0(i) <= 1.0)) r.a1_offending.push_back(static_cast<NodeIndex>(i));
  }
  r.a1_initial_state = r.a1_offending.empty();
  return r;
}

Vector vector_field(const SpreadParams& p, const StateVector& x) {
  require_state(p, x);
  const Vector bx = p.infection_matrix() * x;
  return (1.0 - x.array()) * bx.array() - p.delta().array() * x.array();
}

StateVector step_euler(const SpreadParams& p, const StateVector& x) {
  require_state(p, x);
  const Vector bx = p.infection_matrix() * x;
  const Vector& delta = p.delta();
  const double h = p.h();
  StateVector next(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    next(i) = x(i) + h * ((1.0 - x(i)) * bx(i) - delta(i) * x(i));
  }
  return next;
}

StateVector step_product(const SpreadParams& p, const StateVector& x) {
  require_factored(p, "step_product");
  require_state(p, x);
  if (p.h() != 1.0) warn(fmt::format("product model ignores the step size (h = {})", p.h()));
  return product_update(p, x);
}

StateVector step_truncated(const SpreadParams& p, const StateVector& x) {
  require_factored(p, "step_truncated");
  return step_euler(p.with_step(1.0), x);
}

Trajectory simulate(const SpreadParams& p, const StateVector& x0, std::size_t steps, Model model,
                    const SimulateOptions& options) {
  require_state(p, x0);
  if (model != Model::kEuler) require_factored(p, fmt::format("{} model", to_string(model)));
  if (model == Model::kProduct && p.h() != 1.0) {
    warn(fmt::format("product model ignores the step size (h = {})", p.h()));
  }

  // The product and truncated models are unit-step; their invariance
  // conditions are the assumptions evaluated at h = 1.
  const SpreadParams effective = model == Model::kEuler ? p : p.with_step(1.0);
  const AssumptionReport report = check_assumptions(effective, x0);
  for (const auto& failure : report.failures()) warn(failure);
  if (report.a3_step_bounds && !report.a3_including_self_loops) {
    warn(fmt::format("self-loop terms push h * row sum to {} > 1; [0,1] invariance is not guaranteed",
                     report.max_h_row_sum));
  }
  const bool guaranteed = report.invariance_guaranteed();

  Trajectory traj;
  traj.h = p.h();
  traj.model = model;
  traj.states.resize(static_cast<Eigen::Index>(steps) + 1, x0.size());
  traj.states.row(0) = x0.transpose();

  const double tol = options.invariance_tolerance;
  StateVector x = x0;
  for (std::size_t k = 1; k <= steps; ++k) {
    switch (model) {
      case Model::kEuler: x = step_euler(p, x); break;
      case Model::kProduct: x = product_update(p, x); break;
      case Model::kTruncated: x = step_euler(effective, x); break;
    }
    traj.states.row(static_cast<Eigen::Index>(k)) = x.transpose();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x(i) < -tol || x(i) > 1.0 + tol || !std::isfinite(x(i))) {
        if (guaranteed) {
          throw InvarianceViolation(fmt::format(
              "state x[{}] = {:.17g} left [0,1] at step {} although the invariance conditions hold", i,
              x(i), k));
        }
        traj.excursions.push_back({k, static_cast<NodeIndex>(i), x(i)});
      }
    }
  }
  if (!traj.excursions.empty()) {
    warn(fmt::format("{} state entries left [0,1] (first at step {}, node {})", traj.excursions.size(),
                     traj.excursions.front().step, traj.excursions.front().node));
  }
  return traj;
}

}  // namespace sisnet
