#include "sisnet/json.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "sisnet/errors.hpp"
#include "sisnet/io.hpp"

namespace sisnet {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double number_from(const Json& j) { return j.is_null() ? kNaN : j.get<double>(); }

Json index_list(const std::vector<NodeIndex>& v) { return Json(v); }

std::vector<NodeIndex> index_list_from(const Json& j, const char* key) {
  if (!j.contains(key)) return {};
  return j.at(key).get<std::vector<NodeIndex>>();
}

// Scalar for length-1 estimates outside heterogeneous results.
Json estimate(const Vector& v, bool as_scalar) {
  if (as_scalar && v.size() == 1) return number(v(0));
  return vector_to_json(v);
}

Vector estimate_from(const Json& j) {
  if (j.is_array()) return vector_from_json(j);
  Vector v(1);
  v(0) = number_from(j);
  return v;
}

EstimateKind parse_estimate_kind(const std::string& name) {
  if (name == "homogeneous") return EstimateKind::kHomogeneous;
  if (name == "heterogeneous") return EstimateKind::kHeterogeneous;
  if (name == "ratio") return EstimateKind::kRatio;
  throw ValidationError(fmt::format("unknown estimate kind '{}'", name));
}

WeightedDigraph graph_from_source(const Json& doc, const Json& entry, const std::filesystem::path& base_dir,
                                  const char* key) {
  if (entry.is_array()) return WeightedDigraph(matrix_from_json(entry));
  if (!entry.is_string()) {
    throw ValidationError(fmt::format("'{}' must be a file path or an inline matrix", key));
  }
  std::filesystem::path path = entry.get<std::string>();
  if (path.is_relative()) path = base_dir / path;
  return io::read_graph_csv(path, doc.value("symmetric", false), doc.value("self_loops", false),
                            doc.value("nodes", std::size_t{0}));
}

Vector broadcast(const Json& j, std::size_t n, const char* key) {
  if (j.is_number()) return Vector::Constant(static_cast<Eigen::Index>(n), j.get<double>());
  if (!j.is_array()) throw ValidationError(fmt::format("'{}' must be a number or an array", key));
  Vector v = vector_from_json(j);
  if (static_cast<std::size_t>(v.size()) != n) {
    throw DimensionError(fmt::format("'{}' has {} entries, the network has {} nodes", key, v.size(), n));
  }
  return v;
}

}  // namespace

Json vector_to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("expected a JSON array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_from(j[i]);
  return v;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_to_json(m.row(r).transpose()));
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("expected a nonempty JSON array of rows");
  const std::size_t cols = j[0].size();
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw DimensionError(fmt::format("matrix row {} has the wrong length", r));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number_from(j[r][c]);
    }
  }
  return m;
}

void to_json(Json& j, const AssumptionReport& r) {
  j = Json{
      {"a1_initial_state", r.a1_initial_state},
      {"a2_nonnegative", r.a2_nonnegative},
      {"a3_step_bounds", r.a3_step_bounds},
      {"a4_nontrivial_spread", r.a4_nontrivial_spread},
      {"a5_irreducible", r.a5_irreducible},
      {"a3_including_self_loops", r.a3_including_self_loops},
      {"a1_offending", index_list(r.a1_offending)},
      {"a2_offending", index_list(r.a2_offending)},
      {"a3_offending", index_list(r.a3_offending)},
      {"initial_state_checked", r.initial_state_checked},
      {"min_initial_state", number(r.min_initial_state)},
      {"max_initial_state", number(r.max_initial_state)},
      {"min_parameter", number(r.min_parameter)},
      {"max_h_delta", number(r.max_h_delta)},
      {"max_h_offdiagonal_row_sum", number(r.max_h_offdiagonal_row_sum)},
      {"max_h_row_sum", number(r.max_h_row_sum)},
      {"component_count", r.component_count},
      {"all_hold", r.all_hold()},
  };
}

void from_json(const Json& j, AssumptionReport& r) {
  r.a1_initial_state = j.at("a1_initial_state").get<bool>();
  r.a2_nonnegative = j.at("a2_nonnegative").get<bool>();
  r.a3_step_bounds = j.at("a3_step_bounds").get<bool>();
  r.a4_nontrivial_spread = j.at("a4_nontrivial_spread").get<bool>();
  r.a5_irreducible = j.at("a5_irreducible").get<bool>();
  r.a3_including_self_loops = j.at("a3_including_self_loops").get<bool>();
  r.a1_offending = index_list_from(j, "a1_offending");
  r.a2_offending = index_list_from(j, "a2_offending");
  r.a3_offending = index_list_from(j, "a3_offending");
  r.initial_state_checked = j.at("initial_state_checked").get<bool>();
  r.min_initial_state = number_from(j.at("min_initial_state"));
  r.max_initial_state = number_from(j.at("max_initial_state"));
  r.min_parameter = number_from(j.at("min_parameter"));
  r.max_h_delta = number_from(j.at("max_h_delta"));
  r.max_h_offdiagonal_row_sum = number_from(j.at("max_h_offdiagonal_row_sum"));
  r.max_h_row_sum = number_from(j.at("max_h_row_sum"));
  r.component_count = j.at("component_count").get<std::size_t>();
}

void to_json(Json& j, const HomogeneousThreshold& h) {
  j = Json{{"s1_adjacency", number(h.s1_adjacency)},
           {"ratio_delta_over_beta", number(h.ratio_delta_over_beta)},
           {"regime", to_string(h.regime)},
           {"agrees", h.agrees}};
}

void from_json(const Json& j, HomogeneousThreshold& h) {
  h.s1_adjacency = number_from(j.at("s1_adjacency"));
  h.ratio_delta_over_beta = number_from(j.at("ratio_delta_over_beta"));
  h.regime = parse_regime(j.at("regime").get<std::string>());
  h.agrees = j.at("agrees").get<bool>();
}

void to_json(Json& j, const ThresholdReport& r) {
  j = Json{{"s1_value", number(r.s1_value)},
           {"regime", to_string(r.regime)},
           {"homogeneous_form", r.homogeneous_form ? Json(*r.homogeneous_form) : Json(nullptr)},
           {"assumptions", r.assumptions},
           {"irreducible", r.irreducible},
           {"spectral_converged", r.spectral_converged}};
}

void from_json(const Json& j, ThresholdReport& r) {
  r.s1_value = number_from(j.at("s1_value"));
  r.regime = parse_regime(j.at("regime").get<std::string>());
  const Json& h = j.at("homogeneous_form");
  if (h.is_null()) {
    r.homogeneous_form.reset();
  } else {
    r.homogeneous_form = h.get<HomogeneousThreshold>();
  }
  r.assumptions = j.at("assumptions").get<AssumptionReport>();
  r.irreducible = j.at("irreducible").get<bool>();
  r.spectral_converged = j.at("spectral_converged").get<bool>();
}

void to_json(Json& j, const LyapunovCertificate& c) {
  j = Json{{"p_diagonal", vector_to_json(c.p_diagonal)},
           {"definiteness", to_string(c.definiteness)},
           {"max_eig_of_mtpm_minus_p", number(c.max_eig_of_mtpm_minus_p)},
           {"s1_value", number(c.s1_value)}};
}

void from_json(const Json& j, LyapunovCertificate& c) {
  c.p_diagonal = vector_from_json(j.at("p_diagonal"));
  c.definiteness = parse_definiteness(j.at("definiteness").get<std::string>());
  c.max_eig_of_mtpm_minus_p = number_from(j.at("max_eig_of_mtpm_minus_p"));
  c.s1_value = number_from(j.at("s1_value"));
}

void to_json(Json& j, const EndemicState& s) {
  j = Json{{"x_star", vector_to_json(s.x_star)},
           {"residual", number(s.residual)},
           {"iterations", s.iterations},
           {"exists", s.exists}};
}

void from_json(const Json& j, EndemicState& s) {
  s.x_star = vector_from_json(j.at("x_star"));
  s.residual = number_from(j.at("residual"));
  s.iterations = j.at("iterations").get<std::size_t>();
  s.exists = j.at("exists").get<bool>();
}

void to_json(Json& j, const EstimationResult& r) {
  const bool scalar = r.kind != EstimateKind::kHeterogeneous;
  Json node_cases = Json::array();
  for (IdentifiabilityCase c : r.node_cases) node_cases.push_back(to_string(c));
  j = Json{{"kind", to_string(r.kind)},
           {"beta_hat", estimate(r.beta_hat, scalar)},
           {"delta_hat", estimate(r.delta_hat, scalar)},
           {"ratio_hat", estimate(r.ratio_hat, scalar)},
           {"residual_norm", number(r.residual_norm)},
           {"identifiable", r.identifiable},
           {"rank", r.rank},
           {"node_ranks", r.node_ranks},
           {"case", to_string(r.case_tag)},
           {"node_cases", node_cases},
           {"scaled", r.scaled},
           {"h_used", number(r.h_used)},
           {"diagnostics",
            {{"T", r.transitions},
             {"movement_detected", r.movement_detected},
             {"nodes_stationary", index_list(r.nodes_stationary)}}}};
}

void from_json(const Json& j, EstimationResult& r) {
  r.kind = parse_estimate_kind(j.at("kind").get<std::string>());
  r.beta_hat = estimate_from(j.at("beta_hat"));
  r.delta_hat = estimate_from(j.at("delta_hat"));
  r.ratio_hat = estimate_from(j.at("ratio_hat"));
  r.residual_norm = number_from(j.at("residual_norm"));
  r.identifiable = j.at("identifiable").get<bool>();
  r.rank = j.at("rank").get<int>();
  r.node_ranks = j.at("node_ranks").get<std::vector<int>>();
  r.case_tag = parse_identifiability_case(j.at("case").get<std::string>());
  r.node_cases.clear();
  for (const Json& c : j.at("node_cases")) r.node_cases.push_back(parse_identifiability_case(c.get<std::string>()));
  r.scaled = j.at("scaled").get<bool>();
  r.h_used = number_from(j.at("h_used"));
  const Json& d = j.at("diagnostics");
  r.transitions = d.at("T").get<std::size_t>();
  r.movement_detected = d.at("movement_detected").get<bool>();
  r.nodes_stationary = index_list_from(d, "nodes_stationary");
}

void to_json(Json& j, const FitReport& f) {
  j = Json{{"scaled_frobenius_error", number(f.scaled_frobenius_error)},
           {"per_step_errors", vector_to_json(f.per_step_errors)},
           {"totals", {{"observed", number(f.observed_norm)}, {"simulated", number(f.simulated_norm)}}},
           {"difference_norm", number(f.difference_norm)}};
}

void from_json(const Json& j, FitReport& f) {
  f.scaled_frobenius_error = number_from(j.at("scaled_frobenius_error"));
  f.per_step_errors = vector_from_json(j.at("per_step_errors"));
  f.observed_norm = number_from(j.at("totals").at("observed"));
  f.simulated_norm = number_from(j.at("totals").at("simulated"));
  f.difference_norm = number_from(j.at("difference_norm"));
}

void to_json(Json& j, const IncidenceSeries& s) {
  j = Json{{"new_events", s.new_events}, {"period_steps", s.period_steps}, {"total", s.total}};
}

void from_json(const Json& j, IncidenceSeries& s) {
  s.new_events = j.at("new_events").get<std::vector<long long>>();
  s.period_steps = j.at("period_steps").get<std::size_t>();
  s.total = j.at("total").get<long long>();
}

SpreadParams params_from_json(const Json& j, const std::filesystem::path& base_dir) {
  try {
    if (!j.is_object()) throw ValidationError("parameter document must be a JSON object");
    if (!j.contains("h")) throw ValidationError("parameter document needs 'h'");
    if (!j.contains("delta")) throw ValidationError("parameter document needs 'delta'");
    const double h = j.at("h").get<double>();
    const bool combined = j.contains("combined_b") && !j.at("combined_b").is_null();
    if (combined) {
      if (j.contains("beta") || (j.contains("adjacency") && !j.at("adjacency").is_null())) {
        throw ValidationError("'combined_b' excludes 'beta' and 'adjacency'");
      }
      const Json& entry = j.at("combined_b");
      Matrix b;
      if (entry.is_array()) {
        b = matrix_from_json(entry);
      } else {
        b = graph_from_source(j, entry, base_dir, "combined_b").weights();
      }
      Vector delta = broadcast(j.at("delta"), static_cast<std::size_t>(b.rows()), "delta");
      return SpreadParams::combined(h, std::move(delta), std::move(b));
    }
    if (!j.contains("beta")) throw ValidationError("parameter document needs 'beta' or 'combined_b'");
    if (!j.contains("adjacency")) throw ValidationError("parameter document needs 'adjacency'");
    WeightedDigraph a = graph_from_source(j, j.at("adjacency"), base_dir, "adjacency");
    const std::size_t n = a.size();
    const Json& beta = j.at("beta");
    const Json& delta = j.at("delta");
    if (beta.is_number()) {
      if (delta.is_number()) return SpreadParams::homogeneous(h, beta.get<double>(), delta.get<double>(), std::move(a));
      return SpreadParams::scalar_beta(h, beta.get<double>(), broadcast(delta, n, "delta"), std::move(a));
    }
    return SpreadParams::per_node(h, broadcast(beta, n, "beta"), broadcast(delta, n, "delta"), std::move(a));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("malformed parameter document: {}", e.what()));
  }
}

SpreadParams load_params(const std::filesystem::path& path) {
  return params_from_json(read_json_file(path), path.parent_path());
}

Json params_to_json(const SpreadParams& p) {
  Json j;
  j["h"] = p.h();
  if (!p.is_factored()) {
    j["delta"] = vector_to_json(p.delta());
    j["combined_b"] = matrix_to_json(p.infection_matrix());
    return j;
  }
  if (p.is_homogeneous()) {
    j["delta"] = p.delta()(0);
  } else {
    j["delta"] = vector_to_json(p.delta());
  }
  if (p.scalar_beta_value()) {
    j["beta"] = *p.scalar_beta_value();
  } else {
    j["beta"] = vector_to_json(p.beta());
  }
  j["adjacency"] = matrix_to_json(p.adjacency().weights());
  j["combined_b"] = nullptr;
  return j;
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(fmt::format("{}: {}", source, e.what()));
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io::IoError(fmt::format("cannot open '{}' for reading", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str(), path.string());
}

}  // namespace sisnet
