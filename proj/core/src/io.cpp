#include "sisnet/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace sisnet::io {
namespace {

struct Field {
  std::string text;
  std::size_t column = 1;
};

struct Row {
  std::size_t line = 0;
  std::vector<Field> fields;
};

std::vector<Row> read_rows(std::istream& in) {
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Row row;
    row.line = line_no;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::size_t end = comma == std::string::npos ? line.size() : comma;
      std::size_t b = start;
      std::size_t e = end;
      while (b < e && (line[b] == ' ' || line[b] == '\t')) ++b;
      while (e > b && (line[e - 1] == ' ' || line[e - 1] == '\t')) --e;
      row.fields.push_back({line.substr(b, e - b), b + 1});
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double parse_double(const std::string& source, const Row& row, const Field& f) {
  std::string_view text = f.text;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(source, row.line, f.column, fmt::format("expected a number, found '{}'", f.text));
  }
  return value;
}

long long parse_integer(const std::string& source, const Row& row, const Field& f) {
  std::string_view text = f.text;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(source, row.line, f.column, fmt::format("expected an integer, found '{}'", f.text));
  }
  return value;
}

std::size_t parse_index(const std::string& source, const Row& row, const Field& f) {
  const long long v = parse_integer(source, row, f);
  if (v < 0) throw ParseError(source, row.line, f.column, fmt::format("index {} is negative", v));
  return static_cast<std::size_t>(v);
}

void expect_width(const std::string& source, const Row& row, std::size_t width) {
  if (row.fields.size() != width) {
    const std::size_t column = row.fields.size() > width ? row.fields[width].column
                                                         : row.fields.back().column;
    throw ParseError(source, row.line, column,
                     fmt::format("expected {} fields, found {}", width, row.fields.size()));
  }
}

const Row& expect_header(const std::string& source, const std::vector<Row>& rows,
                         const std::vector<std::string>& names) {
  if (rows.empty()) throw ParseError(source, 1, 1, "file is empty");
  const Row& header = rows.front();
  expect_width(source, header, names.size());
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (header.fields[c].text != names[c]) {
      throw ParseError(source, header.line, header.fields[c].column,
                       fmt::format("expected header '{}', found '{}'", names[c], header.fields[c].text));
    }
  }
  return header;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  return out;
}

}  // namespace

ParseError::ParseError(const std::string& source, std::size_t line, std::size_t column,
                       const std::string& what)
    : ValidationError(fmt::format("{}:{}:{}: {}", source, line, column, what)),
      line_(line),
      column_(column) {}

std::string format_double(double value) { return fmt::format("{}", value); }

Matrix read_matrix_csv(std::istream& in, const std::string& source) {
  const std::vector<Row> rows = read_rows(in);
  if (rows.empty()) throw ParseError(source, 1, 1, "matrix file is empty");
  const std::size_t n = rows.size();
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    expect_width(source, rows[r], n);
    for (std::size_t c = 0; c < n; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parse_double(source, rows[r], rows[r].fields[c]);
    }
  }
  return m;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_matrix_csv(in, path.string());
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  auto out = open_output(path);
  write_matrix_csv(out, m);
}

std::vector<Edge> read_edge_list_csv(std::istream& in, const std::string& source) {
  const std::vector<Row> rows = read_rows(in);
  expect_header(source, rows, {"i", "j", "weight"});
  std::vector<Edge> edges;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    expect_width(source, rows[r], 3);
    edges.push_back({parse_index(source, rows[r], rows[r].fields[0]),
                     parse_index(source, rows[r], rows[r].fields[1]),
                     parse_double(source, rows[r], rows[r].fields[2])});
  }
  return edges;
}

std::vector<Edge> read_edge_list_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_edge_list_csv(in, path.string());
}

WeightedDigraph read_graph_csv(const std::filesystem::path& path, bool symmetric, bool self_loops,
                               std::size_t nodes) {
  auto in = open_input(path);
  std::string first;
  std::getline(in, first);
  in.clear();
  in.seekg(0);
  std::string compact;
  for (char c : first) {
    if (c != ' ' && c != '\t' && c != '\r') compact += c;
  }
  if (compact != "i,j,weight") return WeightedDigraph(read_matrix_csv(in, path.string()));
  const std::vector<Edge> edges = read_edge_list_csv(in, path.string());
  std::size_t n = nodes;
  if (n == 0) {
    for (const Edge& e : edges) n = std::max({n, e.i + 1, e.j + 1});
  }
  return build_from_edge_list(edges, n, symmetric, self_loops);
}

void write_edge_list_csv(std::ostream& out, const std::vector<Edge>& edges) {
  out << "i,j,weight\n";
  for (const Edge& e : edges) out << e.i << ',' << e.j << ',' << format_double(e.weight) << '\n';
}

NodePositions read_positions_csv(std::istream& in, const std::string& source) {
  const std::vector<Row> rows = read_rows(in);
  if (rows.empty()) throw ParseError(source, 1, 1, "positions file is empty");
  const std::size_t width = rows.front().fields.size();
  if (width == 4) {
    expect_header(source, rows, {"id", "x", "y", "z"});
  } else {
    expect_header(source, rows, {"id", "x", "y"});
  }
  const std::size_t dim = width - 1;
  NodePositions p;
  p.coords.resize(static_cast<Eigen::Index>(rows.size() - 1), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    expect_width(source, rows[r], width);
    p.ids.push_back(rows[r].fields[0].text);
    for (std::size_t c = 0; c < dim; ++c) {
      p.coords(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c)) =
          parse_double(source, rows[r], rows[r].fields[c + 1]);
    }
  }
  return p;
}

NodePositions read_positions_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_positions_csv(in, path.string());
}

void write_positions_csv(std::ostream& out, const NodePositions& positions) {
  out << (positions.dimension() == 3 ? "id,x,y,z\n" : "id,x,y\n");
  for (std::size_t r = 0; r < positions.size(); ++r) {
    out << (positions.ids.empty() ? std::to_string(r) : positions.ids[r]);
    for (Eigen::Index c = 0; c < positions.coords.cols(); ++c) {
      out << ',' << format_double(positions.coords(static_cast<Eigen::Index>(r), c));
    }
    out << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in, double h, const std::string& source) {
  const std::vector<Row> rows = read_rows(in);
  if (rows.empty()) throw ParseError(source, 1, 1, "trajectory file is empty");
  const Row& header = rows.front();
  if (header.fields.size() < 2) {
    throw ParseError(source, header.line, 1, "trajectory header needs 'k' and at least one state column");
  }
  std::vector<std::string> names{"k"};
  for (std::size_t i = 0; i + 1 < header.fields.size(); ++i) names.push_back(fmt::format("x{}", i));
  expect_header(source, rows, names);

  const std::size_t n = names.size() - 1;
  Trajectory traj;
  traj.h = h;
  traj.states.resize(static_cast<Eigen::Index>(rows.size() - 1), static_cast<Eigen::Index>(n));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    expect_width(source, rows[r], n + 1);
    const long long k = parse_integer(source, rows[r], rows[r].fields[0]);
    if (k != static_cast<long long>(r - 1)) {
      throw ParseError(source, rows[r].line, rows[r].fields[0].column,
                       fmt::format("expected time index {}, found {}", r - 1, k));
    }
    for (std::size_t c = 0; c < n; ++c) {
      traj.states(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c)) =
          parse_double(source, rows[r], rows[r].fields[c + 1]);
    }
  }
  if (traj.states.rows() == 0) {
    throw ParseError(source, header.line, 1, "trajectory has a header but no states");
  }
  return traj;
}

Trajectory read_trajectory_csv(const std::filesystem::path& path, double h) {
  auto in = open_input(path);
  return read_trajectory_csv(in, h, path.string());
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << 'k';
  for (Eigen::Index i = 0; i < traj.states.cols(); ++i) out << ",x" << i;
  out << '\n';
  for (Eigen::Index k = 0; k < traj.states.rows(); ++k) {
    out << k;
    for (Eigen::Index i = 0; i < traj.states.cols(); ++i) out << ',' << format_double(traj.states(k, i));
    out << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  auto out = open_output(path);
  write_trajectory_csv(out, traj);
}

StateVector read_state_csv(std::istream& in, const std::string& source) {
  const std::vector<Row> rows = read_rows(in);
  expect_header(source, rows, {"id", "x"});
  StateVector x(static_cast<Eigen::Index>(rows.size() - 1));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    expect_width(source, rows[r], 2);
    x(static_cast<Eigen::Index>(r - 1)) = parse_double(source, rows[r], rows[r].fields[1]);
  }
  if (x.size() == 0) throw ParseError(source, rows.front().line, 1, "state file has no rows");
  return x;
}

StateVector read_state_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_state_csv(in, path.string());
}

void write_state_csv(std::ostream& out, const StateVector& x) {
  out << "id,x\n";
  for (Eigen::Index i = 0; i < x.size(); ++i) out << i << ',' << format_double(x(i)) << '\n';
}

ObservationRows read_observation_csv(std::istream& in, const std::string& source) {
  const std::vector<Row> rows = read_rows(in);
  expect_header(source, rows, {"id", "count", "capacity"});
  ObservationRows obs;
  const auto n = static_cast<Eigen::Index>(rows.size() - 1);
  obs.counts.resize(n);
  obs.capacities.resize(n);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    expect_width(source, rows[r], 3);
    obs.ids.push_back(rows[r].fields[0].text);
    obs.counts(static_cast<Eigen::Index>(r - 1)) = parse_double(source, rows[r], rows[r].fields[1]);
    obs.capacities(static_cast<Eigen::Index>(r - 1)) = parse_double(source, rows[r], rows[r].fields[2]);
  }
  return obs;
}

ObservationRows read_observation_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_observation_csv(in, path.string());
}

void write_observation_csv(std::ostream& out, const ObservationRows& rows) {
  out << "id,count,capacity\n";
  for (Eigen::Index i = 0; i < rows.counts.size(); ++i) {
    out << rows.ids[static_cast<std::size_t>(i)] << ',' << format_double(rows.counts(i)) << ','
        << format_double(rows.capacities(i)) << '\n';
  }
}

IncidenceSeries read_incidence_csv(std::istream& in, const std::string& source) {
  const std::vector<Row> rows = read_rows(in);
  expect_header(source, rows, {"period", "new_events"});
  IncidenceSeries s;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    expect_width(source, rows[r], 2);
    const long long period = parse_integer(source, rows[r], rows[r].fields[0]);
    if (period != static_cast<long long>(r - 1)) {
      throw ParseError(source, rows[r].line, rows[r].fields[0].column,
                       fmt::format("expected period {}, found {}", r - 1, period));
    }
    s.new_events.push_back(parse_integer(source, rows[r], rows[r].fields[1]));
    s.total += s.new_events.back();
  }
  return s;
}

IncidenceSeries read_incidence_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_incidence_csv(in, path.string());
}

void write_incidence_csv(std::ostream& out, const IncidenceSeries& series) {
  out << "period,new_events\n";
  for (std::size_t k = 0; k < series.new_events.size(); ++k) out << k << ',' << series.new_events[k] << '\n';
}

void write_incidence_csv(const std::filesystem::path& path, const IncidenceSeries& series) {
  auto out = open_output(path);
  write_incidence_csv(out, series);
}

}  // namespace sisnet::io
