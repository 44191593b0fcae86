#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sisnet/graph.hpp"

namespace sisnet {

/// Infection level per node, each entry expected in [0, 1].
using StateVector = Vector;

enum class InfectionForm {
  kScalar,    // one beta shared by all nodes, with adjacency A
  kPerNode,   // beta_i per node, with adjacency A
  kCombined,  // a single matrix B with entries beta_ij
};

/// Step size, healing rates and infection structure of a networked SIS model.
/// The combined infection matrix B = diag(beta) A is materialized at
/// construction for the factored forms. Values are immutable.
///
/// Construction rejects non-finite values, negative h and mismatched sizes.
/// Sign conditions on beta and delta are left to check_assumptions so they can
/// be reported rather than thrown.
class SpreadParams {
 public:
  static SpreadParams homogeneous(double h, double beta, double delta, WeightedDigraph a);
  static SpreadParams scalar_beta(double h, double beta, Vector delta, WeightedDigraph a);
  static SpreadParams per_node(double h, Vector beta, Vector delta, WeightedDigraph a);
  static SpreadParams combined(double h, Vector delta, Matrix b);

  std::size_t size() const { return static_cast<std::size_t>(delta_.size()); }
  double h() const { return h_; }
  const Vector& delta() const { return delta_; }
  InfectionForm form() const { return form_; }
  bool is_factored() const { return form_ != InfectionForm::kCombined; }

  /// Per-node beta (the scalar broadcast for kScalar). Throws
  /// PreconditionError for the combined form.
  const Vector& beta() const;
  /// Set only for kScalar.
  std::optional<double> scalar_beta_value() const { return scalar_beta_; }
  /// Throws PreconditionError for the combined form.
  const WeightedDigraph& adjacency() const;
  /// B with entries beta_ij, available for every form.
  const Matrix& infection_matrix() const { return b_; }

  /// Factored with a single beta and a single delta (the scalar threshold
  /// s1(A) <= delta / beta applies).
  bool is_homogeneous() const;

  SpreadParams with_step(double h) const;

 private:
  SpreadParams(double h, Vector delta, InfectionForm form, std::optional<double> scalar_beta,
               std::optional<Vector> beta, std::optional<WeightedDigraph> a, Matrix b);

  double h_;
  Vector delta_;
  InfectionForm form_;
  std::optional<double> scalar_beta_;
  std::optional<Vector> beta_;
  std::optional<WeightedDigraph> a_;
  Matrix b_;
};

enum class Model { kEuler, kProduct, kTruncated };

std::string_view to_string(Model model);
/// Accepts "euler", "product", "truncated"; throws ValidationError otherwise.
Model parse_model(std::string_view name);

struct Excursion {
  std::size_t step = 0;
  NodeIndex node = 0;
  double value = 0.0;
};

/// States x^0..x^T stored row-wise: states.row(k) is x^k.
struct Trajectory {
  Matrix states;
  double h = 1.0;
  std::optional<Model> model;
  /// Entries that left [0, 1] by more than the invariance tolerance.
  std::vector<Excursion> excursions;

  std::size_t steps() const { return states.rows() == 0 ? 0 : static_cast<std::size_t>(states.rows() - 1); }
  std::size_t nodes() const { return static_cast<std::size_t>(states.cols()); }
  StateVector state(std::size_t k) const { return states.row(static_cast<Eigen::Index>(k)).transpose(); }
};

/// Results of the five standing assumptions of the discrete SIS analysis:
///  A1  x^0 in [0,1]^n
///  A2  delta_i >= 0 and beta_ij >= 0
///  A3  h delta_i <= 1 and h sum_{j != i} beta_ij <= 1
///  A4  h != 0 and some beta_ij > 0 with i != j
///  A5  B irreducible
struct AssumptionReport {
  bool a1_initial_state = true;
  bool a2_nonnegative = true;
  bool a3_step_bounds = true;
  bool a4_nontrivial_spread = true;
  bool a5_irreducible = true;
  /// A3 with the self-loop term included: h sum_j beta_ij <= 1. This is what
  /// the convex-combination invariance argument actually consumes.
  bool a3_including_self_loops = true;

  std::vector<NodeIndex> a1_offending;
  std::vector<NodeIndex> a2_offending;
  std::vector<NodeIndex> a3_offending;

  bool initial_state_checked = false;
  double min_initial_state = 0.0;
  double max_initial_state = 0.0;
  double min_parameter = 0.0;            // min over delta_i and beta_ij
  double max_h_delta = 0.0;              // max_i h delta_i
  double max_h_offdiagonal_row_sum = 0.0;  // max_i h sum_{j != i} beta_ij
  double max_h_row_sum = 0.0;            // max_i h sum_j beta_ij
  std::size_t component_count = 1;

  bool all_hold() const {
    return a1_initial_state && a2_nonnegative && a3_step_bounds && a4_nontrivial_spread &&
           a5_irreducible;
  }
  /// Conditions under which every model keeps the state in [0,1]^n.
  bool invariance_guaranteed() const {
    return a1_initial_state && a2_nonnegative && a3_step_bounds && a3_including_self_loops;
  }
  /// One line per failed assumption; empty when everything holds.
  std::vector<std::string> failures() const;
};

AssumptionReport check_assumptions(const SpreadParams& p, const StateVector& x0);
/// Same checks without an initial state (A1 reported as not checked).
AssumptionReport check_assumptions(const SpreadParams& p);

/// x + h ((1 - x) .* (B x) - delta .* x). No clamping.
StateVector step_euler(const SpreadParams& p, const StateVector& x);

/// x_i (1 - delta_i) + (1 - x_i)(1 - prod_j (1 - beta_i a_ij x_j)).
/// Requires the factored form; h is ignored (warning when h != 1).
StateVector step_product(const SpreadParams& p, const StateVector& x);

/// First-order truncation of the product model; identical to step_euler with
/// h = 1. Requires the factored form.
StateVector step_truncated(const SpreadParams& p, const StateVector& x);

struct SimulateOptions {
  double invariance_tolerance = 1e-12;
};

/// Rolls `steps` transitions of `model` from x0 and records every state.
/// Excursions outside [0,1]^n beyond the tolerance are recorded; if the
/// invariance conditions held they throw InvarianceViolation instead.
/// Violated assumptions are reported through warn().
Trajectory simulate(const SpreadParams& p, const StateVector& x0, std::size_t steps, Model model,
                    const SimulateOptions& options = {});

/// Vector field (1 - x) .* (B x) - delta .* x of the continuous model.
Vector vector_field(const SpreadParams& p, const StateVector& x);

}  // namespace sisnet
