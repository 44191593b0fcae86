#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sisnet/errors.hpp"
#include "sisnet/graph.hpp"
#include "sisnet/dynamics.hpp"
#include "sisnet/pipelines.hpp"

namespace sisnet::io {

/// Malformed input with a 1-based source position.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Missing or unreadable files.
class IoError : public Error {
 public:
  using Error::Error;
};

// Matrix CSV: n rows of n comma-separated decimals, no header.
Matrix read_matrix_csv(std::istream& in, const std::string& source = "<stream>");
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(std::ostream& out, const Matrix& m);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

// Edge list CSV: header `i,j,weight`, zero-based indices.
std::vector<Edge> read_edge_list_csv(std::istream& in, const std::string& source = "<stream>");
std::vector<Edge> read_edge_list_csv(const std::filesystem::path& path);
void write_edge_list_csv(std::ostream& out, const std::vector<Edge>& edges);

/// Adjacency from either a matrix CSV or an `i,j,weight` edge list, told
/// apart by the header. For edge lists n defaults to the largest index + 1.
WeightedDigraph read_graph_csv(const std::filesystem::path& path, bool symmetric = false,
                               bool self_loops = false, std::size_t nodes = 0);

// Positions CSV: header `id,x,y` or `id,x,y,z`.
NodePositions read_positions_csv(std::istream& in, const std::string& source = "<stream>");
NodePositions read_positions_csv(const std::filesystem::path& path);
void write_positions_csv(std::ostream& out, const NodePositions& positions);

// Trajectory CSV: header `k,x0,x1,...`, one row per time index.
Trajectory read_trajectory_csv(std::istream& in, double h = 1.0, const std::string& source = "<stream>");
Trajectory read_trajectory_csv(const std::filesystem::path& path, double h = 1.0);
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

// State CSV: header `id,x`, one row per node in order.
StateVector read_state_csv(std::istream& in, const std::string& source = "<stream>");
StateVector read_state_csv(const std::filesystem::path& path);
void write_state_csv(std::ostream& out, const StateVector& x);

struct ObservationRows {
  std::vector<std::string> ids;
  Vector counts;
  Vector capacities;
};

// Observation CSV: header `id,count,capacity`.
ObservationRows read_observation_csv(std::istream& in, const std::string& source = "<stream>");
ObservationRows read_observation_csv(const std::filesystem::path& path);
void write_observation_csv(std::ostream& out, const ObservationRows& rows);

// Incidence CSV: header `period,new_events`.
IncidenceSeries read_incidence_csv(std::istream& in, const std::string& source = "<stream>");
IncidenceSeries read_incidence_csv(const std::filesystem::path& path);
void write_incidence_csv(std::ostream& out, const IncidenceSeries& series);
void write_incidence_csv(const std::filesystem::path& path, const IncidenceSeries& series);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

}  // namespace sisnet::io
