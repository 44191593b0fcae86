#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "sisnet/analysis.hpp"
#include "sisnet/dynamics.hpp"
#include "sisnet/identification.hpp"
#include "sisnet/pipelines.hpp"

namespace sisnet {

using Json = nlohmann::json;

// Reports serialize field by field. Non-finite numbers become null and read
// back as NaN, so every report round-trips through its own parser.
void to_json(Json& j, const AssumptionReport& r);
void from_json(const Json& j, AssumptionReport& r);
void to_json(Json& j, const HomogeneousThreshold& h);
void from_json(const Json& j, HomogeneousThreshold& h);
void to_json(Json& j, const ThresholdReport& r);
void from_json(const Json& j, ThresholdReport& r);
void to_json(Json& j, const LyapunovCertificate& c);
void from_json(const Json& j, LyapunovCertificate& c);
void to_json(Json& j, const EndemicState& s);
void from_json(const Json& j, EndemicState& s);
void to_json(Json& j, const EstimationResult& r);
void from_json(const Json& j, EstimationResult& r);
void to_json(Json& j, const FitReport& f);
void from_json(const Json& j, FitReport& f);
void to_json(Json& j, const IncidenceSeries& s);
void from_json(const Json& j, IncidenceSeries& s);

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

/// Parameter document:
///   {"h": 0.1, "delta": 0.1 | [...], "beta": 1.0 | [...],
///    "adjacency": "a.csv" | [[...]], "combined_b": "b.csv" | [[...]] | null}
/// With combined_b set, beta and adjacency must be absent. File paths are
/// resolved against `base_dir` and may hold a matrix CSV or an `i,j,weight`
/// edge list (with optional "nodes", "symmetric", "self_loops" keys).
/// Throws ValidationError on malformed documents.
SpreadParams params_from_json(const Json& j, const std::filesystem::path& base_dir = {});
SpreadParams load_params(const std::filesystem::path& path);

/// Inline form of `p` (matrices embedded), accepted by params_from_json.
Json params_to_json(const SpreadParams& p);

/// Parses a JSON document, converting library exceptions to ValidationError.
Json parse_json(const std::string& text, const std::string& source = "<string>");
Json read_json_file(const std::filesystem::path& path);

}  // namespace sisnet
