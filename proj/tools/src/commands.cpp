#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sisnet/analysis.hpp"
#include "sisnet/diagnostics.hpp"
#include "sisnet/dynamics.hpp"
#include "sisnet/errors.hpp"
#include "sisnet/fixtures.hpp"
#include "sisnet/identification.hpp"
#include "sisnet/io.hpp"
#include "sisnet/json.hpp"
#include "sisnet/pipelines.hpp"

namespace sisnet::cli {
namespace {

namespace fs = std::filesystem;

struct SimulateConfig {
  std::string params;
  std::string x0;
  std::string out;
  std::string out_dir;
  std::string model = "euler";
  std::string init = "binary";
  double infected_fraction = 0.25;
  std::size_t steps = 100;
  std::uint64_t seed = 0;
  std::size_t sweep = 0;
  unsigned threads = 0;
  bool strict = false;
  bool json = false;
};

struct IdentifyConfig {
  std::string trajectory;
  std::string adjacency;
  std::string state;
  std::string mode = "homogeneous";
  double h = 1.0;
  std::optional<double> beta;
  bool symmetric = false;
  bool self_loops = false;
  bool json = false;
};

struct AnalyzeConfig {
  std::string params;
  std::string x0;
  bool certificate = false;
  bool endemic = false;
  bool strict = false;
  bool json = false;
};

struct EndemicConfig {
  std::string params;
  std::string out;
  bool json = false;
};

struct SnowConfig {
  std::string observation;
  std::string source_id;
  double source_level = 19.0 / 20.0;
  std::string structure = "a3";
  double radius = 1.0;
  std::string positions;
  std::vector<std::string> overrides;
  double h = 1.0 / 30.0;
  std::size_t steps = 3000;
  std::optional<std::size_t> steps_per_period;
  bool hold_source = false;
  std::string reference;
  std::string out_trajectory;
  std::string out_incidence;
  bool json = false;
};

struct UsdaConfig {
  std::string train_trajectory;
  std::string train_adjacency;
  std::string full_adjacency;
  std::string full_x0;
  std::size_t steps = 30;
  double h = 1.0;
  std::string reference;
  std::string out_trajectory;
  bool symmetric = false;
  bool self_loops = false;
  bool json = false;
};

struct FixturesConfig {
  std::string kind = "geometric";
  std::string out_dir = ".";
  std::uint64_t seed = 0;
};

std::ofstream open_file(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw io::IoError(fmt::format("cannot open '{}' for writing", path.string()));
  return f;
}

void print_assumptions(std::ostream& os, const AssumptionReport& r) {
  const auto failures = r.failures();
  if (failures.empty()) {
    os << "assumptions: all hold\n";
    return;
  }
  os << "assumptions: " << failures.size() << " violated\n";
  for (const auto& f : failures) os << "  " << f << '\n';
}

StateVector initial_state(const SimulateConfig& cfg, SplitMix64& rng, std::size_t n) {
  if (cfg.init == "binary") return random_binary_state(rng, n, cfg.infected_fraction);
  return random_interior_state(rng, n);
}

AssumptionReport effective_assumptions(const SpreadParams& p, const StateVector& x0, Model model) {
  return check_assumptions(model == Model::kEuler ? p : p.with_step(1.0), x0);
}

int cmd_simulate(const SimulateConfig& cfg, std::ostream& out, std::ostream& err) {
  const SpreadParams params = load_params(cfg.params);
  const Model model = parse_model(cfg.model);
  const std::size_t n = params.size();

  if (cfg.sweep > 0) {
    if (!cfg.x0.empty()) throw ValidationError("--sweep draws its own initial states; drop --x0");
    if (cfg.out_dir.empty()) throw ValidationError("--sweep needs --out-dir");
    SplitMix64 master(cfg.seed);
    std::vector<std::uint64_t> seeds(cfg.sweep);
    for (auto& s : seeds) s = master.next();
    std::vector<StateVector> starts;
    for (std::uint64_t s : seeds) {
      SplitMix64 rng(s);
      starts.push_back(initial_state(cfg, rng, n));
    }
    if (cfg.strict) {
      for (std::size_t r = 0; r < starts.size(); ++r) {
        const AssumptionReport rep = effective_assumptions(params, starts[r], model);
        if (!rep.all_hold()) {
          err << "run " << r << ": ";
          print_assumptions(err, rep);
          return kAssumptions;
        }
      }
    }

    struct RunSummary {
      double final_max = 0.0;
      std::size_t excursions = 0;
      std::string error;
    };
    std::vector<RunSummary> summaries(cfg.sweep);
    std::atomic<std::size_t> next{0};
    const unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads ? cfg.threads : std::thread::hardware_concurrency(),
                                                             static_cast<unsigned>(cfg.sweep)));
    auto worker = [&] {
      for (std::size_t r = next++; r < cfg.sweep; r = next++) {
        try {
          const Trajectory traj = simulate(params, starts[r], cfg.steps, model);
          auto f = open_file(fs::path(cfg.out_dir) / fmt::format("run_{:04}.csv", r));
          io::write_trajectory_csv(f, traj);
          summaries[r].final_max = traj.state(traj.steps()).lpNorm<Eigen::Infinity>();
          summaries[r].excursions = traj.excursions.size();
        } catch (const std::exception& e) {
          summaries[r].error = e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    Json runs = Json::array();
    bool failed = false;
    for (std::size_t r = 0; r < cfg.sweep; ++r) {
      failed = failed || !summaries[r].error.empty();
      if (cfg.json) {
        runs.push_back({{"run", r},
                        {"seed", seeds[r]},
                        {"final_max", summaries[r].final_max},
                        {"excursions", summaries[r].excursions},
                        {"error", summaries[r].error.empty() ? Json(nullptr) : Json(summaries[r].error)}});
      } else if (summaries[r].error.empty()) {
        out << fmt::format("run {:4}  seed {:20}  final max x = {}  excursions = {}\n", r, seeds[r],
                           io::format_double(summaries[r].final_max), summaries[r].excursions);
      } else {
        out << fmt::format("run {:4}  seed {:20}  error: {}\n", r, seeds[r], summaries[r].error);
      }
    }
    if (cfg.json) out << runs.dump(2) << '\n';
    if (failed) throw Error("one or more sweep runs failed");
    return kOk;
  }

  StateVector x0;
  if (!cfg.x0.empty()) {
    x0 = io::read_state_csv(fs::path(cfg.x0));
  } else {
    SplitMix64 rng(cfg.seed);
    x0 = initial_state(cfg, rng, n);
  }
  if (static_cast<std::size_t>(x0.size()) != n) {
    throw DimensionError(fmt::format("initial state has {} entries, parameters have {} nodes", x0.size(), n));
  }
  const AssumptionReport report = effective_assumptions(params, x0, model);
  std::ostream& summary = cfg.out.empty() ? err : out;
  if (cfg.strict && !report.all_hold()) {
    print_assumptions(err, report);
    return kAssumptions;
  }

  const Trajectory traj = simulate(params, x0, cfg.steps, model);
  if (cfg.out.empty()) {
    io::write_trajectory_csv(out, traj);
  } else {
    io::write_trajectory_csv(fs::path(cfg.out), traj);
  }
  if (cfg.json) {
    Json j{{"model", to_string(model)},
           {"steps", cfg.steps},
           {"nodes", n},
           {"assumptions", report},
           {"excursions", traj.excursions.size()}};
    summary << j.dump(2) << '\n';
  } else {
    print_assumptions(summary, report);
    summary << fmt::format("{} model, {} nodes, {} steps, {} excursions\n", to_string(model), n, cfg.steps,
                           traj.excursions.size());
  }
  return kOk;
}

void print_estimate(std::ostream& os, const EstimationResult& r) {
  os << "mode: " << to_string(r.kind) << (r.scaled ? " (estimates scaled by h_true / h_guess)" : "") << '\n';
  os << "identifiable: " << (r.identifiable ? "yes" : "no") << " (" << to_string(r.case_tag) << ", rank "
     << r.rank << ", T = " << r.transitions << ")\n";
  if (r.kind == EstimateKind::kHeterogeneous) {
    for (Eigen::Index i = 0; i < r.beta_hat.size(); ++i) {
      const auto c = r.node_cases[static_cast<std::size_t>(i)];
      if (c == IdentifiabilityCase::kIdentifiable) {
        os << fmt::format("node {}: beta_hat = {}  delta_hat = {}\n", i, io::format_double(r.beta_hat(i)),
                          io::format_double(r.delta_hat(i)));
      } else {
        os << fmt::format("node {}: unidentifiable ({})\n", i, to_string(c));
      }
    }
  } else if (r.identifiable) {
    os << "beta_hat: " << io::format_double(r.beta_hat(0)) << '\n';
    os << "delta_hat: " << io::format_double(r.delta_hat(0)) << '\n';
    os << "ratio_hat: " << io::format_double(r.ratio_hat(0)) << '\n';
  }
  os << "residual_norm: " << io::format_double(r.residual_norm) << '\n';
}

int cmd_identify(const IdentifyConfig& cfg, std::ostream& out) {
  const WeightedDigraph a = io::read_graph_csv(cfg.adjacency, cfg.symmetric, cfg.self_loops);

  if (cfg.mode == "endemic-ratio") {
    StateVector x_star;
    if (!cfg.state.empty()) {
      x_star = io::read_state_csv(fs::path(cfg.state));
    } else if (!cfg.trajectory.empty()) {
      const Trajectory traj = io::read_trajectory_csv(fs::path(cfg.trajectory), cfg.h);
      x_star = traj.state(traj.steps());
    } else {
      throw ValidationError("endemic-ratio needs --state or --trajectory");
    }
    const Vector ratio = ratio_from_endemic(x_star, a);
    std::optional<Vector> delta;
    if (cfg.beta) delta = derive_delta_from_endemic(x_star, a, Vector::Constant(ratio.size(), *cfg.beta));
    if (cfg.json) {
      Json j{{"kind", "endemic_ratio"},
             {"ratio_hat", vector_to_json(ratio)},
             {"beta_assumed", cfg.beta ? Json(*cfg.beta) : Json(nullptr)},
             {"delta_hat", delta ? vector_to_json(*delta) : Json(nullptr)}};
      out << j.dump(2) << '\n';
    } else {
      out << "mode: endemic-ratio\n";
      for (Eigen::Index i = 0; i < ratio.size(); ++i) {
        out << fmt::format("node {}: delta/beta = {}", i, io::format_double(ratio(i)));
        if (delta) out << fmt::format("  delta = {}", io::format_double((*delta)(i)));
        out << '\n';
      }
    }
    return kOk;
  }

  if (cfg.trajectory.empty()) throw ValidationError("--trajectory is required for this mode");
  const Trajectory traj = io::read_trajectory_csv(fs::path(cfg.trajectory), cfg.h);
  EstimationResult r;
  if (cfg.mode == "homogeneous") {
    r = identify_homogeneous(traj, a, cfg.h);
  } else if (cfg.mode == "heterogeneous") {
    r = identify_heterogeneous(traj, a, cfg.h);
  } else if (cfg.mode == "ratio") {
    r = identify_ratio(traj, a, cfg.h);
  } else {
    throw ValidationError(fmt::format("unknown mode '{}'", cfg.mode));
  }
  if (cfg.json) {
    out << Json(r).dump(2) << '\n';
  } else {
    print_estimate(out, r);
  }
  return r.identifiable ? kOk : kUnidentifiable;
}

int cmd_analyze(const AnalyzeConfig& cfg, std::ostream& out, std::ostream& err) {
  const SpreadParams params = load_params(cfg.params);
  ThresholdReport report = classify(params);
  if (!cfg.x0.empty()) report.assumptions = check_assumptions(params, io::read_state_csv(fs::path(cfg.x0)));
  if (cfg.strict && !report.assumptions.all_hold()) {
    print_assumptions(err, report.assumptions);
    return kAssumptions;
  }
  Json j = report;
  int code = kOk;
  if (cfg.certificate) {
    try {
      j["certificate"] = lyapunov_weights(params);
    } catch (const CertificateError& e) {
      j["certificate"] = nullptr;
      j["certificate_error"] = e.what();
      err << "error: " << e.what() << '\n';
      code = kNoCertificate;
    } catch (const PreconditionError& e) {
      j["certificate"] = nullptr;
      j["certificate_error"] = e.what();
      err << "error: " << e.what() << '\n';
      code = kNoCertificate;
    }
  }
  if (cfg.endemic) j["endemic"] = endemic_equilibrium(params);
  out << j.dump(2) << '\n';
  return code;
}

int cmd_endemic(const EndemicConfig& cfg, std::ostream& out) {
  const SpreadParams params = load_params(cfg.params);
  const EndemicState state = endemic_equilibrium(params);
  if (!cfg.out.empty()) {
    auto f = open_file(cfg.out);
    io::write_state_csv(f, state.x_star);
  }
  out << Json(state).dump(2) << '\n';
  return kOk;
}

std::size_t index_of(const std::vector<std::string>& ids, const std::string& id, const char* what) {
  const auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw ValidationError(fmt::format("{} '{}' is not in the observation", what, id));
  return static_cast<std::size_t>(it - ids.begin());
}

int cmd_snow(const SnowConfig& cfg, std::ostream& out) {
  const io::ObservationRows rows = io::read_observation_csv(fs::path(cfg.observation));
  EndemicObservation obs;
  obs.counts = rows.counts;
  obs.capacities = rows.capacities;
  obs.ids = rows.ids;
  obs.source_index = index_of(rows.ids, cfg.source_id, "source id");
  obs.source_level = cfg.source_level;

  SnowStructure structure;
  structure.kind = parse_snow_structure(cfg.structure);
  structure.radius = cfg.radius;
  if (structure.kind != SnowStructureKind::kBroadcastOnly) {
    if (cfg.positions.empty()) throw ValidationError(fmt::format("structure {} needs --positions", cfg.structure));
    const NodePositions raw = io::read_positions_csv(fs::path(cfg.positions));
    NodePositions ordered;
    ordered.coords.resize(static_cast<Eigen::Index>(obs.size()), raw.coords.cols());
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const std::size_t k = static_cast<std::size_t>(
          std::find(raw.ids.begin(), raw.ids.end(), obs.ids[i]) - raw.ids.begin());
      if (k == raw.ids.size()) throw ValidationError(fmt::format("no position for node '{}'", obs.ids[i]));
      ordered.coords.row(static_cast<Eigen::Index>(i)) = raw.coords.row(static_cast<Eigen::Index>(k));
    }
    ordered.ids = obs.ids;
    structure.positions = std::move(ordered);
  }
  for (const std::string& o : cfg.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ValidationError(fmt::format("override '{}' is not ID=WEIGHT", o));
    double w = 0.0;
    try {
      std::size_t used = 0;
      w = std::stod(o.substr(eq + 1), &used);
      if (used != o.size() - eq - 1) throw std::invalid_argument(o);
    } catch (const std::logic_error&) {
      throw ValidationError(fmt::format("override '{}' has a malformed weight", o));
    }
    structure.overrides[index_of(rows.ids, o.substr(0, eq), "override id")] = w;
  }

  SnowOptions options;
  options.h = cfg.h;
  options.steps = cfg.steps;
  options.steps_per_period = cfg.steps_per_period;
  options.hold_source = cfg.hold_source;
  if (!cfg.reference.empty()) options.reference = io::read_incidence_csv(fs::path(cfg.reference));

  const SnowResult result = snow_pipeline(obs, structure, options);
  if (!cfg.out_trajectory.empty()) io::write_trajectory_csv(fs::path(cfg.out_trajectory), result.trajectory);
  if (!cfg.out_incidence.empty()) io::write_incidence_csv(fs::path(cfg.out_incidence), result.incidence);

  const StateVector final_state = result.trajectory.state(result.trajectory.steps());
  Vector gap = final_state - result.x_star;
  gap(static_cast<Eigen::Index>(obs.source_index)) = 0.0;
  if (cfg.json) {
    Json j{{"structure", cfg.structure},
           {"h", cfg.h},
           {"steps", cfg.steps},
           {"hold_source", cfg.hold_source},
           {"delta", vector_to_json(result.params.delta())},
           {"equilibrium_defect", result.equilibrium_defect},
           {"final_gap_to_observation", gap.lpNorm<Eigen::Infinity>()},
           {"incidence", result.incidence},
           {"fit", result.fit ? Json(*result.fit) : Json(nullptr)},
           {"assumptions", result.assumptions}};
    out << j.dump(2) << '\n';
  } else {
    out << fmt::format("snow pipeline: structure {}, {} nodes, h = {}, {} steps\n", cfg.structure, obs.size(),
                       io::format_double(cfg.h), cfg.steps);
    print_assumptions(out, result.assumptions);
    out << "equilibrium defect at observation: " << io::format_double(result.equilibrium_defect) << '\n';
    out << "final max gap to observation (households): " << io::format_double(gap.lpNorm<Eigen::Infinity>())
        << '\n';
    out << fmt::format("incidence: {} periods of {} steps, {} events\n", result.incidence.new_events.size(),
                       result.incidence.period_steps, result.incidence.total);
    if (result.fit) out << "scaled error vs reference: " << io::format_double(result.fit->scaled_frobenius_error) << '\n';
  }
  return kOk;
}

int cmd_usda(const UsdaConfig& cfg, std::ostream& out) {
  const Trajectory train = io::read_trajectory_csv(fs::path(cfg.train_trajectory), cfg.h);
  const WeightedDigraph train_graph = io::read_graph_csv(cfg.train_adjacency, cfg.symmetric, cfg.self_loops);
  const WeightedDigraph full_graph = io::read_graph_csv(cfg.full_adjacency, cfg.symmetric, cfg.self_loops);
  const StateVector x0 = io::read_state_csv(fs::path(cfg.full_x0));
  std::optional<Trajectory> reference;
  if (!cfg.reference.empty()) reference = io::read_trajectory_csv(fs::path(cfg.reference), cfg.h);

  const UsdaResult result = usda_pipeline(train, train_graph, full_graph, x0, cfg.steps, cfg.h, reference);
  if (!cfg.out_trajectory.empty()) io::write_trajectory_csv(fs::path(cfg.out_trajectory), result.trajectory);
  if (cfg.json) {
    Json j{{"estimate", result.estimate},
           {"steps", cfg.steps},
           {"h", cfg.h},
           {"fit", result.fit ? Json(*result.fit) : Json(nullptr)}};
    out << j.dump(2) << '\n';
  } else {
    out << fmt::format("usda pipeline: trained on {} regions, simulated {} regions for {} steps\n",
                       train_graph.size(), full_graph.size(), cfg.steps);
    out << "beta_hat: " << io::format_double(result.estimate.beta_hat(0)) << '\n';
    out << "delta_hat: " << io::format_double(result.estimate.delta_hat(0)) << '\n';
    if (result.fit) out << "scaled Frobenius error: " << io::format_double(result.fit->scaled_frobenius_error) << '\n';
  }
  return kOk;
}

void write_json(const fs::path& path, const Json& j) {
  auto f = open_file(path);
  f << j.dump(2) << '\n';
}

int cmd_fixtures(const FixturesConfig& cfg, std::ostream& out) {
  const fs::path dir = cfg.out_dir;
  fs::create_directories(dir);
  SplitMix64 rng(cfg.seed);
  if (cfg.kind == "geometric") {
    const GeometricFixture fx = geometric_fixture(rng);
    {
      auto f = open_file(dir / "positions.csv");
      io::write_positions_csv(f, fx.positions);
    }
    io::write_matrix_csv(dir / "adjacency.csv", fx.graph.weights());
    write_json(dir / "params.json",
               Json{{"h", 0.1}, {"beta", 1.0}, {"delta", 0.1}, {"adjacency", "adjacency.csv"}, {"combined_b", nullptr}});
    auto f = open_file(dir / "x0.csv");
    io::write_state_csv(f, random_binary_state(rng, fx.graph.size()));
    out << fmt::format("geometric fixture: {} nodes, radius 2, box [0,10]^2, {} draw(s)\n", fx.graph.size(),
                       fx.attempts);
    out << "files: positions.csv adjacency.csv params.json x0.csv\n";
  } else if (cfg.kind == "snow") {
    const SnowSynthetic s = snow_synthetic(rng);
    {
      auto f = open_file(dir / "observation.csv");
      io::write_observation_csv(f, {s.observation.ids, s.observation.counts, s.observation.capacities});
    }
    {
      auto f = open_file(dir / "positions.csv");
      io::write_positions_csv(f, *s.structure.positions);
    }
    out << fmt::format("snow fixture: {} households plus source 'source' at level {}\n", s.observation.size() - 1,
                       io::format_double(s.observation.source_level));
    out << "files: observation.csv positions.csv (use --override h0=0.1 for the reduced source edge)\n";
  } else if (cfg.kind == "usda") {
    const UsdaSynthetic u = usda_synthetic(rng);
    {
      auto f = open_file(dir / "full_edges.csv");
      io::write_edge_list_csv(f, u.full_edges);
    }
    io::write_matrix_csv(dir / "train_adjacency.csv", u.train_graph.weights());
    io::write_trajectory_csv(dir / "train_trajectory.csv", u.train_trajectory);
    {
      auto f = open_file(dir / "full_x0.csv");
      io::write_state_csv(f, u.full_x0);
    }
    io::write_trajectory_csv(dir / "reference.csv", u.reference);
    out << fmt::format("usda fixture: {} regions, {} in training block, beta = {}, delta = {}, h = {}\n",
                       u.full_graph.size(), u.train_nodes.size(), io::format_double(u.beta),
                       io::format_double(u.delta), io::format_double(u.h));
    out << "files: full_edges.csv (use --symmetric --self-loops) train_adjacency.csv train_trajectory.csv "
           "full_x0.csv reference.csv\n";
  } else {
    throw ValidationError(fmt::format("unknown fixture kind '{}'", cfg.kind));
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete-time networked SIS simulation, threshold analysis and parameter identification"};
  app.name("sisnet");
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  SimulateConfig sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Roll out a model and write the trajectory CSV");
  simulate_cmd->add_option("--params", sim.params, "Parameter JSON")->required();
  simulate_cmd->add_option("--x0", sim.x0, "Initial state CSV (id,x); drawn from --seed when absent");
  simulate_cmd->add_option("--steps", sim.steps, "Number of transitions");
  simulate_cmd->add_option("--model", sim.model, "euler | product | truncated");
  simulate_cmd->add_option("--out", sim.out, "Trajectory CSV (stdout when absent)");
  simulate_cmd->add_option("--seed", sim.seed, "64-bit seed for random initial states");
  simulate_cmd->add_option("--init", sim.init, "binary | interior")->check(CLI::IsMember({"binary", "interior"}));
  simulate_cmd->add_option("--infected-fraction", sim.infected_fraction, "Infection probability for binary draws");
  simulate_cmd->add_option("--sweep", sim.sweep, "Number of independent rollouts from random initial states");
  simulate_cmd->add_option("--out-dir", sim.out_dir, "Directory for sweep trajectories");
  simulate_cmd->add_option("--threads", sim.threads, "Worker threads for --sweep (0 = hardware)");
  simulate_cmd->add_flag("--strict", sim.strict, "Exit 2 when an assumption fails");
  simulate_cmd->add_flag("--json", sim.json, "Machine-readable summary");

  IdentifyConfig id;
  auto* identify_cmd = app.add_subcommand("identify", "Estimate spread parameters from a trajectory");
  identify_cmd->add_option("--trajectory", id.trajectory, "Trajectory CSV");
  identify_cmd->add_option("--adjacency", id.adjacency, "Adjacency matrix CSV or edge list")->required();
  identify_cmd->add_option("--mode", id.mode, "homogeneous | heterogeneous | ratio | endemic-ratio")
      ->check(CLI::IsMember({"homogeneous", "heterogeneous", "ratio", "endemic-ratio"}));
  identify_cmd->add_option("--h", id.h, "Step size (a guess for --mode ratio)");
  identify_cmd->add_option("--state", id.state, "Endemic state CSV for --mode endemic-ratio");
  identify_cmd->add_option("--beta", id.beta, "Assumed beta for deriving delta in endemic-ratio mode");
  identify_cmd->add_flag("--symmetric", id.symmetric, "Mirror edge-list entries");
  identify_cmd->add_flag("--self-loops", id.self_loops, "Unit diagonal for edge lists");
  identify_cmd->add_flag("--json", id.json, "Emit JSON");

  AnalyzeConfig an;
  auto* analyze_cmd = app.add_subcommand("analyze", "Threshold report as JSON");
  analyze_cmd->add_option("--params", an.params, "Parameter JSON")->required();
  analyze_cmd->add_option("--x0", an.x0, "Initial state CSV to include in the assumption check");
  analyze_cmd->add_flag("--certificate", an.certificate, "Add the diagonal Lyapunov certificate");
  analyze_cmd->add_flag("--endemic", an.endemic, "Add the endemic equilibrium");
  analyze_cmd->add_flag("--strict", an.strict, "Exit 2 when an assumption fails");
  analyze_cmd->add_flag("--json", an.json, "Accepted for uniformity; output is always JSON");

  EndemicConfig en;
  auto* endemic_cmd = app.add_subcommand("endemic", "Endemic equilibrium as JSON");
  endemic_cmd->add_option("--params", en.params, "Parameter JSON")->required();
  endemic_cmd->add_option("--out", en.out, "State CSV for x*");
  endemic_cmd->add_flag("--json", en.json, "Accepted for uniformity; output is always JSON");

  auto* validate_cmd = app.add_subcommand("validate", "Run a validation pipeline");
  validate_cmd->require_subcommand(1);

  SnowConfig snow;
  auto* snow_cmd = validate_cmd->add_subcommand("snow", "Endemic-observation pipeline with a broadcast source");
  snow_cmd->add_option("--observation", snow.observation, "Observation CSV (id,count,capacity)")->required();
  snow_cmd->add_option("--source-id", snow.source_id, "Id of the broadcast source row")->required();
  snow_cmd->add_option("--source-level", snow.source_level, "Pinned equilibrium level of the source");
  snow_cmd->add_option("--structure", snow.structure, "a1 | a2 | a3")->check(CLI::IsMember({"a1", "a2", "a3"}));
  snow_cmd->add_option("--radius", snow.radius, "Contact radius for a1/a2");
  snow_cmd->add_option("--positions", snow.positions, "Positions CSV for a1/a2");
  snow_cmd->add_option("--override", snow.overrides, "Source edge weight override ID=WEIGHT (repeatable)");
  snow_cmd->add_option("--h", snow.h, "Step size");
  snow_cmd->add_option("--steps", snow.steps, "Number of transitions");
  snow_cmd->add_option("--steps-per-period", snow.steps_per_period, "Steps aggregated per incidence period");
  snow_cmd->add_flag("--hold-source", snow.hold_source, "Hold the source at its initial value");
  snow_cmd->add_option("--reference", snow.reference, "Reference incidence CSV");
  snow_cmd->add_option("--out-trajectory", snow.out_trajectory, "Trajectory CSV");
  snow_cmd->add_option("--out-incidence", snow.out_incidence, "Incidence CSV");
  snow_cmd->add_flag("--json", snow.json, "Emit JSON");

  UsdaConfig usda;
  auto* usda_cmd = validate_cmd->add_subcommand("usda", "Train on a region, simulate the full network");
  usda_cmd->add_option("--train-trajectory", usda.train_trajectory, "Training trajectory CSV")->required();
  usda_cmd->add_option("--train-adjacency", usda.train_adjacency, "Training adjacency")->required();
  usda_cmd->add_option("--full-adjacency", usda.full_adjacency, "Full adjacency")->required();
  usda_cmd->add_option("--full-x0", usda.full_x0, "Full initial state CSV")->required();
  usda_cmd->add_option("--steps", usda.steps, "Number of transitions");
  usda_cmd->add_option("--h", usda.h, "Step size");
  usda_cmd->add_option("--reference", usda.reference, "Reference trajectory CSV");
  usda_cmd->add_option("--out-trajectory", usda.out_trajectory, "Simulated trajectory CSV");
  usda_cmd->add_flag("--symmetric", usda.symmetric, "Mirror edge-list entries");
  usda_cmd->add_flag("--self-loops", usda.self_loops, "Unit diagonal for edge lists");
  usda_cmd->add_flag("--json", usda.json, "Emit JSON");

  auto* fixtures_cmd = app.add_subcommand("fixtures", "Synthetic inputs");
  fixtures_cmd->require_subcommand(1);
  FixturesConfig fx;
  auto* generate_cmd = fixtures_cmd->add_subcommand("generate", "Write a synthetic fixture");
  generate_cmd->add_option("--kind", fx.kind, "geometric | snow | usda")
      ->check(CLI::IsMember({"geometric", "snow", "usda"}));
  generate_cmd->add_option("--out-dir", fx.out_dir, "Output directory");
  generate_cmd->add_option("--seed", fx.seed, "64-bit seed");

  ScopedWarningHandler warnings([&err](std::string_view m) { err << "sisnet: warning: " << m << '\n'; });
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (simulate_cmd->parsed()) return cmd_simulate(sim, out, err);
    if (identify_cmd->parsed()) return cmd_identify(id, out);
    if (analyze_cmd->parsed()) return cmd_analyze(an, out, err);
    if (endemic_cmd->parsed()) return cmd_endemic(en, out);
    if (snow_cmd->parsed()) return cmd_snow(snow, out);
    if (usda_cmd->parsed()) return cmd_usda(usda, out);
    if (generate_cmd->parsed()) return cmd_fixtures(fx, out);
    return kIoOrParse;
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kIoOrParse;
  } catch (const IdentificationError& e) {
    err << "error: " << e.what() << " [" << e.case_tag() << "]\n";
    return kUnidentifiable;
  } catch (const CertificateError& e) {
    err << "error: " << e.what() << '\n';
    return kNoCertificate;
  } catch (const PipelineError& e) {
    err << "error: " << e.what() << '\n';
    return kPipelinePrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoOrParse;
  }
}

}  // namespace sisnet::cli
