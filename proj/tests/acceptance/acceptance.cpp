#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "sisnet/analysis.hpp"
#include "sisnet/diagnostics.hpp"
#include "sisnet/dynamics.hpp"
#include "sisnet/errors.hpp"
#include "sisnet/fixtures.hpp"
#include "sisnet/identification.hpp"
#include "sisnet/pipelines.hpp"

namespace {

using namespace sisnet;
using sisnet::testing::Target;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;  // <= 0: none
  std::function<Outcome()> run;
};

double inf_norm(const Vector& v) { return v.lpNorm<Eigen::Infinity>(); }

Trajectory slice(const Trajectory& t, std::size_t k) {
  Trajectory s;
  s.h = t.h;
  s.states = t.states.middleRows(static_cast<Eigen::Index>(k), 2);
  return s;
}

// 1. Exact homogeneous recovery from the full run and from every single
// transition with movement.
Outcome criterion_exact_recovery() {
  Outcome o;
  double worst = 0.0;
  std::size_t transitions = 0;
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    SplitMix64 rng(seed);
    const GeometricFixture fx = geometric_fixture(rng, 40, 2.0);
    const SpreadParams p = SpreadParams::homogeneous(0.1, 1.0, 0.1, fx.graph);
    const Trajectory traj = simulate(p, random_binary_state(rng, 40), 100, Model::kEuler);

    const EstimationResult full = identify_homogeneous(traj, fx.graph, 0.1);
    o.require(full.identifiable, "full trajectory reported unidentifiable");
    const double e_full = std::max(std::abs(full.beta_hat(0) - 1.0), std::abs(full.delta_hat(0) - 0.1));
    worst = std::max(worst, e_full);

    for (std::size_t k = 0; k < traj.steps(); ++k) {
      if (traj.state(k + 1) == traj.state(k)) continue;
      const EstimationResult one = identify_homogeneous(slice(traj, k), fx.graph, 0.1);
      o.require(one.identifiable, fmt::format("seed {} transition {} unidentifiable", seed, k));
      if (!one.identifiable) continue;
      ++transitions;
      worst = std::max({worst, std::abs(one.beta_hat(0) - 1.0), std::abs(one.delta_hat(0) - 0.1)});
    }
  }
  o.require(transitions > 0, "no transition with movement");
  o.require(worst <= 1e-8, fmt::format("max abs error {:.3g} > 1e-8", worst));
  if (o.pass) o.detail = fmt::format("3 fixtures, {} single transitions, max abs error {:.2g}", transitions, worst);
  return o;
}

// 2. Ratio invariance under a wrong step size, estimates scale as 1/h_guess.
Outcome criterion_ratio_invariance() {
  Outcome o;
  SplitMix64 rng(21);
  const double h_true = 0.1;
  const GeometricFixture fx = geometric_fixture(rng, 40, 2.0);
  const SpreadParams p = SpreadParams::homogeneous(h_true, 1.0, 0.1, fx.graph);
  const Trajectory traj = simulate(p, random_binary_state(rng, 40), 100, Model::kEuler);

  std::vector<double> ratios;
  double worst_scale = 0.0;
  double beta_at_true = 0.0;
  double beta_at_ten = 0.0;
  for (double hg : {0.01, 0.1, 1.0, 10.0}) {
    const EstimationResult r = identify_ratio(traj, fx.graph, hg);
    o.require(r.identifiable && r.scaled, fmt::format("h_guess {} not identifiable or not flagged scaled", hg));
    ratios.push_back(r.ratio_hat(0));
    worst_scale = std::max({worst_scale, std::abs(r.beta_hat(0) * hg / h_true - 1.0),
                            std::abs(r.delta_hat(0) * hg / (0.1 * h_true) - 1.0)});
    if (hg == 0.1) beta_at_true = r.beta_hat(0);
    if (hg == 1.0) beta_at_ten = r.beta_hat(0);
  }
  const double spread = *std::max_element(ratios.begin(), ratios.end()) - *std::min_element(ratios.begin(), ratios.end());
  const double tenfold = std::abs(beta_at_ten * 10.0 - beta_at_true);
  o.require(spread <= 1e-10, fmt::format("ratio spread {:.3g} > 1e-10", spread));
  o.require(worst_scale <= 1e-10, fmt::format("relative scaling error {:.3g}", worst_scale));
  o.require(tenfold <= 1e-12, fmt::format("h_guess = 10 h_true not exactly tenfold smaller ({:.3g})", tenfold));
  if (o.pass) {
    o.detail = fmt::format("ratio spread {:.2g}, relative scaling error {:.2g}, beta_hat at 10h = {}", spread,
                           worst_scale, beta_at_ten);
  }
  return o;
}

// 3. Per-node recovery with T = 3 and one frozen node.
Outcome criterion_heterogeneous() {
  Outcome o;
  SplitMix64 rng(31);
  const std::size_t n = 50;
  const GeometricFixture fx = geometric_fixture(rng, n, 2.0);
  Vector beta(n), delta(n);
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    beta(i) = rng.uniform(0.5, 1.5);
    delta(i) = rng.uniform(0.05, 0.2);
  }
  const Eigen::Index frozen = 7;
  beta(frozen) = 0.0;
  const Vector load = delta + beta.asDiagonal() * fx.graph.row_sums();
  const double h = 0.9 / load.maxCoeff();
  const SpreadParams p = SpreadParams::per_node(h, beta, delta, fx.graph);
  StateVector x0 = random_interior_state(rng, n);
  x0(frozen) = 0.0;
  Trajectory traj;
  {
    ScopedWarningHandler quiet([](std::string_view) {});
    traj = simulate(p, x0, 3, Model::kEuler);
  }
  const EstimationResult r = identify_heterogeneous(traj, fx.graph, h);

  std::size_t moving = 0;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    const bool moved = (traj.states.col(i).array() != traj.states(0, i)).any();
    if (!moved) continue;
    ++moving;
    const bool ok = r.node_cases[static_cast<std::size_t>(i)] == IdentifiabilityCase::kIdentifiable;
    o.require(ok, fmt::format("moving node {} not identified", i));
    if (ok) worst = std::max({worst, std::abs(r.beta_hat(i) - beta(i)), std::abs(r.delta_hat(i) - delta(i))});
  }
  const bool listed = std::find(r.nodes_stationary.begin(), r.nodes_stationary.end(),
                                static_cast<NodeIndex>(frozen)) != r.nodes_stationary.end();
  o.require(listed, "frozen node not listed as stationary");
  o.require(std::isnan(r.beta_hat(frozen)) && std::isnan(r.delta_hat(frozen)), "frozen node received an estimate");
  o.require(r.node_cases[static_cast<std::size_t>(frozen)] != IdentifiabilityCase::kIdentifiable,
            "frozen node reported identifiable");
  o.require(moving == n - 1, fmt::format("expected {} moving nodes, found {}", n - 1, moving));
  o.require(worst <= 1e-8, fmt::format("max abs error {:.3g} > 1e-8", worst));
  if (o.pass) {
    o.detail = fmt::format("{} moving nodes recovered (max abs error {:.2g}), frozen node {} unidentifiable ({})",
                           moving, worst, frozen, to_string(r.node_cases[static_cast<std::size_t>(frozen)]));
  }
  return o;
}

std::vector<SpreadParams> regime_fixtures(std::uint64_t seed, Target target, std::size_t count) {
  SplitMix64 rng(seed);
  std::vector<SpreadParams> out;
  for (std::size_t f = 0; f < count; ++f) {
    const std::size_t n = 8 + rng.below(13);
    const bool homogeneous = f % 2 == 0;
    if (target == Target::kStable) {
      out.push_back(testing::random_regime_params(rng, n, homogeneous, 0.5, 0.97));
    } else {
      out.push_back(testing::random_regime_params(rng, n, homogeneous, 1.05, 1.5));
    }
  }
  return out;
}

// 4. Threshold dichotomy on random irreducible fixtures.
Outcome criterion_dichotomy() {
  Outcome o;
  std::size_t max_steps_stable = 0;
  std::size_t max_steps_endemic = 0;
  std::size_t homogeneous_checked = 0;
  for (Target target : {Target::kStable, Target::kEndemic}) {
    const auto fixtures = regime_fixtures(target == Target::kStable ? 41 : 42, target, 20);
    SplitMix64 rng(target == Target::kStable ? 43 : 44);
    for (std::size_t f = 0; f < fixtures.size(); ++f) {
      const SpreadParams& p = fixtures[f];
      const ThresholdReport report = classify(p);
      o.require(report.assumptions.all_hold(), fmt::format("fixture {} violates an assumption", f));
      const bool stable = report.s1_value <= 1.0;
      o.require(stable == (target == Target::kStable), fmt::format("fixture {} landed in the wrong regime", f));
      if (p.is_homogeneous()) {
        ++homogeneous_checked;
        const double s1a = testing::qr_spectral_abscissa(p.adjacency().weights());
        const double ratio = p.delta()(0) / *p.scalar_beta_value();
        o.require(report.homogeneous_form && report.homogeneous_form->agrees,
                  fmt::format("fixture {}: homogeneous test missing or disagrees", f));
        o.require((s1a <= ratio) == stable, fmt::format("fixture {}: s1(A) vs delta/beta disagrees", f));
      }
      StateVector x_star = StateVector::Zero(static_cast<Eigen::Index>(p.size()));
      if (!stable) x_star = endemic_equilibrium(p).x_star;
      for (int s = 0; s < 100; ++s) {
        StateVector x = random_interior_state(rng, p.size());
        std::size_t k = 0;
        while (inf_norm(x - x_star) > 1e-6 && k < 1'000'000) {
          x = step_euler(p, x);
          ++k;
        }
        o.require(inf_norm(x - x_star) <= 1e-6, fmt::format("fixture {} start {} did not converge", f, s));
        (stable ? max_steps_stable : max_steps_endemic) =
            std::max(stable ? max_steps_stable : max_steps_endemic, k);
      }
    }
  }
  if (o.pass) {
    o.detail = fmt::format("40 fixtures x 100 starts; worst steps to 1e-6: stable {}, endemic {}; {} homogeneous agree",
                           max_steps_stable, max_steps_endemic, homogeneous_checked);
  }
  return o;
}

// 5. Certificate definiteness and strict Lyapunov decrease.
Outcome criterion_certificate() {
  Outcome o;
  std::vector<SpreadParams> fixtures = regime_fixtures(41, Target::kStable, 20);
  std::vector<bool> boundary(fixtures.size(), false);
  for (std::size_t n : {3u, 5u, 8u, 12u, 20u}) {
    const double beta = 0.5 + 0.1 * static_cast<double>(n);
    fixtures.push_back(testing::circulant_boundary(n, beta, 0.2 / beta));
    boundary.push_back(true);
  }
  SplitMix64 brng(51);
  for (int k = 0; k < 5; ++k) {
    fixtures.push_back(testing::perron_boundary(brng, 6 + 2 * static_cast<std::size_t>(k)));
    boundary.push_back(true);
  }

  SplitMix64 rng(52);
  double worst_strict = -std::numeric_limits<double>::infinity();
  double worst_boundary = 0.0;
  std::size_t trajectories = 0;
  for (std::size_t f = 0; f < fixtures.size(); ++f) {
    const SpreadParams& p = fixtures[f];
    const Regime regime = classify(p).regime;
    o.require(regime == (boundary[f] ? Regime::kStableBoundary : Regime::kStableStrict),
              fmt::format("fixture {} classified {}", f, to_string(regime)));
    LyapunovCertificate cert;
    try {
      cert = lyapunov_weights(p);
    } catch (const Error& e) {
      o.require(false, fmt::format("fixture {}: {}", f, e.what()));
      continue;
    }
    if (boundary[f]) {
      worst_boundary = std::max(worst_boundary, std::abs(cert.max_eig_of_mtpm_minus_p));
      o.require(std::abs(cert.max_eig_of_mtpm_minus_p) <= 1e-8,
                fmt::format("boundary fixture {}: |max eig| {:.3g}", f, cert.max_eig_of_mtpm_minus_p));
    } else {
      worst_strict = std::max(worst_strict, cert.max_eig_of_mtpm_minus_p);
      o.require(cert.max_eig_of_mtpm_minus_p < -1e-10,
                fmt::format("strict fixture {}: max eig {:.3g}", f, cert.max_eig_of_mtpm_minus_p));
    }
    o.require((cert.p_diagonal.array() > 0.0).all(), fmt::format("fixture {}: nonpositive weight", f));

    const auto V = [&](const StateVector& x) { return x.dot(cert.p_diagonal.cwiseProduct(x)); };
    for (int s = 0; s < 2; ++s) {
      ++trajectories;
      StateVector x = random_interior_state(rng, p.size());
      for (int k = 0; k < 2000 && x.norm() >= 1e-10; ++k) {
        const StateVector next = step_euler(p, x);
        const double v = V(x);
        const double dv = V(next) - v;
        o.require(dv < 0.0, fmt::format("fixture {}: V increased at step {} (dV = {:.3g})", f, k, dv));
        if (!boundary[f] && v >= 1e-10) {
          o.require(dv <= -1e-14, fmt::format("fixture {}: dV = {:.3g} at step {}", f, dv, k));
        }
        x = next;
      }
    }
  }
  o.require(trajectories >= 50, "fewer than 50 trajectories sampled");
  if (o.pass) {
    o.detail = fmt::format("{} strict (max eig <= {:.3g}), 10 boundary (|max eig| <= {:.2g}), {} trajectories",
                           fixtures.size() - 10, worst_strict, worst_boundary, trajectories);
  }
  return o;
}

struct InvarianceDraw {
  SpreadParams params;
  StateVector x0;
};

InvarianceDraw invariance_draw(SplitMix64& rng) {
  const std::size_t n = 3 + rng.below(10);
  const auto N = static_cast<Eigen::Index>(n);
  Matrix a = testing::random_irreducible(rng, n, rng.uniform(0.1, 0.6));
  for (Eigen::Index i = 0; i < N; ++i) {
    if (rng.uniform() < 0.5) a(i, i) = rng.uniform();
  }
  Vector beta(N), delta(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    beta(i) = 1.0 - rng.uniform();
    delta(i) = rng.uniform() < 0.1 ? 1.0 : rng.uniform();
  }
  const double cap = rng.uniform() < 0.2 ? 1.0 : rng.uniform(0.3, 1.0);
  const auto max_row = [&](const Vector& b) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < N; ++i) {
      double off = 0.0;
      for (Eigen::Index j = 0; j < N; ++j) {
        if (j != i) off += b(i) * a(i, j);
      }
      worst = std::max(worst, off + b(i) * a(i, i));
    }
    return worst;
  };
  beta *= cap / max_row(beta);
  while (max_row(beta) > cap) {
    for (Eigen::Index i = 0; i < N; ++i) beta(i) = std::nextafter(beta(i), 0.0);
  }
  StateVector x0(N);
  const int kind = static_cast<int>(rng.below(3));
  for (Eigen::Index i = 0; i < N; ++i) {
    if (kind == 0) {
      x0(i) = rng.uniform() < 0.5 ? 1.0 : 0.0;
    } else if (kind == 1) {
      x0(i) = rng.uniform();
    } else {
      x0(i) = rng.uniform() < 0.3 ? 1.0 : rng.uniform();
    }
  }
  return {SpreadParams::per_node(1.0, beta, delta, WeightedDigraph(a)), x0};
}

// 6. Invariance of [0,1]^n under all three models.
Outcome criterion_invariance() {
  Outcome o;
  SplitMix64 rng(61);
  double worst_excess = 0.0;
  for (int d = 0; d < 1000; ++d) {
    const InvarianceDraw draw = invariance_draw(rng);
    const AssumptionReport rep = check_assumptions(draw.params, draw.x0);
    o.require(rep.all_hold() && rep.a3_including_self_loops, fmt::format("draw {} violates an assumption", d));
    const double h = 1.0 - rng.uniform();
    for (Model model : {Model::kEuler, Model::kProduct, Model::kTruncated}) {
      const SpreadParams p = model == Model::kEuler ? draw.params.with_step(h) : draw.params;
      try {
        const Trajectory t = simulate(p, draw.x0, 200, model);
        const double excess = std::max(-t.states.minCoeff(), t.states.maxCoeff() - 1.0);
        worst_excess = std::max(worst_excess, excess);
        o.require(excess <= 1e-12 && t.excursions.empty(),
                  fmt::format("draw {} {}: excess {:.3g}", d, to_string(model), excess));
      } catch (const Error& e) {
        o.require(false, fmt::format("draw {} {}: {}", d, to_string(model), e.what()));
      }
    }
  }
  if (o.pass) o.detail = fmt::format("1000 draws x 3 models x 200 steps, max excess {:.2g}", worst_excess);
  return o;
}

// 7. Truncated equals Euler at h = 1 bitwise; product differs at second order.
Outcome criterion_equivalence() {
  Outcome o;
  SplitMix64 rng(71);
  for (int d = 0; d < 1000; ++d) {
    const std::size_t n = 2 + rng.below(15);
    const auto N = static_cast<Eigen::Index>(n);
    const Matrix a = testing::random_irreducible(rng, n, rng.uniform(0.1, 0.8));
    Vector beta(N), delta(N);
    for (Eigen::Index i = 0; i < N; ++i) {
      beta(i) = rng.uniform(0.0, 2.0);
      delta(i) = rng.uniform();
    }
    const SpreadParams p = SpreadParams::per_node(rng.uniform(0.01, 3.0), beta, delta, WeightedDigraph(a));
    const StateVector x = random_interior_state(rng, n);
    const StateVector t = step_truncated(p, x);
    const StateVector e = step_euler(p.with_step(1.0), x);
    bool identical = true;
    for (Eigen::Index i = 0; i < N; ++i) identical = identical && std::bit_cast<std::uint64_t>(t(i)) == std::bit_cast<std::uint64_t>(e(i));
    o.require(identical, fmt::format("input {}: truncated and Euler(h=1) differ bitwise", d));
  }

  std::vector<std::pair<std::string, Matrix>> graphs;
  {
    Matrix ring = Matrix::Zero(12, 12);
    for (Eigen::Index i = 0; i < 12; ++i) {
      ring(i, (i + 1) % 12) = 1.0;
      ring(i, (i + 11) % 12) = 1.0;
    }
    graphs.emplace_back("ring", ring);
    std::vector<Edge> edges;
    for (std::size_t r = 0; r < 4; ++r) {
      for (std::size_t c = 0; c < 5; ++c) {
        if (c + 1 < 5) edges.push_back({r * 5 + c, r * 5 + c + 1, 1.0});
        if (r + 1 < 4) edges.push_back({r * 5 + c, (r + 1) * 5 + c, 1.0});
      }
    }
    graphs.emplace_back("grid", build_from_edge_list(edges, 20, true, false).weights());
    for (int k = 0; k < 3; ++k) graphs.emplace_back(fmt::format("capped{}", k), testing::random_degree_capped(rng, 15, 4));
  }

  double worst_slope_dev = 0.0;
  double worst_ratio = 0.0;
  for (const auto& [name, a] : graphs) {
    const WeightedDigraph g(a);
    const auto N = a.rows();
    const double dmax = static_cast<double>(g.max_degree());
    const StateVector x = random_interior_state(rng, static_cast<std::size_t>(N));
    Vector delta(N);
    for (Eigen::Index i = 0; i < N; ++i) delta(i) = rng.uniform();
    std::vector<double> lx, ly;
    for (double b : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const SpreadParams p = SpreadParams::scalar_beta(1.0, b, delta, g);
      const double err = inf_norm(step_product(p, x) - step_truncated(p, x));
      const double bound = 2.0 * dmax * b * b;
      worst_ratio = std::max(worst_ratio, err / bound);
      o.require(err <= bound, fmt::format("{}: beta {} error {:.3g} > bound {:.3g}", name, b, err, bound));
      o.require(err > 0.0, fmt::format("{}: zero difference at beta {}", name, b));
      lx.push_back(std::log10(b));
      ly.push_back(std::log10(std::max(err, 1e-300)));
    }
    const double mx = (lx[0] + lx[1] + lx[2] + lx[3]) / 4.0;
    const double my = (ly[0] + ly[1] + ly[2] + ly[3]) / 4.0;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
      sxy += (lx[k] - mx) * (ly[k] - my);
      sxx += (lx[k] - mx) * (lx[k] - mx);
    }
    const double slope = sxy / sxx;
    worst_slope_dev = std::max(worst_slope_dev, std::abs(slope - 2.0));
    o.require(std::abs(slope - 2.0) <= 0.1, fmt::format("{}: log-log slope {:.4f}", name, slope));
  }
  if (o.pass) {
    o.detail = fmt::format("1000 bitwise matches; 5 graphs (max degree <= 4): error/bound <= {:.3f}, |slope - 2| <= {:.4f}",
                           worst_ratio, worst_slope_dev);
  }
  return o;
}

// 8. Endemic fixed point against the analytic 2-node value and random defects.
Outcome criterion_endemic() {
  Outcome o;
  Matrix a2(2, 2);
  a2 << 0, 1, 1, 0;
  const WeightedDigraph g2(a2);
  double worst_x = 0.0, worst_ratio = 0.0;
  for (auto [beta, delta, h] : {std::tuple{1.0, 0.5, 0.5}, std::tuple{2.0, 0.3, 0.2}, std::tuple{0.8, 0.6, 0.5}}) {
    const SpreadParams p = SpreadParams::homogeneous(h, beta, delta, g2);
    const EndemicState s = endemic_equilibrium(p);
    const double analytic = 1.0 - delta / beta;
    o.require(s.exists, "2-node fixture not endemic");
    worst_x = std::max(worst_x, inf_norm(s.x_star - Vector::Constant(2, analytic)));
    worst_ratio = std::max(worst_ratio, inf_norm(ratio_from_endemic(s.x_star, g2) - Vector::Constant(2, delta / beta)));
  }
  o.require(worst_x <= 1e-8, fmt::format("x* error {:.3g}", worst_x));
  o.require(worst_ratio <= 1e-8, fmt::format("ratio error {:.3g}", worst_ratio));

  double worst_defect = 0.0;
  const auto fixtures = regime_fixtures(81, Target::kEndemic, 20);
  for (std::size_t f = 0; f < fixtures.size(); ++f) {
    const EndemicState s = endemic_equilibrium(fixtures[f]);
    const double defect = inf_norm(step_euler(fixtures[f], s.x_star) - s.x_star);
    worst_defect = std::max(worst_defect, defect);
    o.require(s.exists && (s.x_star.array() > 0.0).all(), fmt::format("fixture {}: x* not strictly positive", f));
    o.require(defect <= 1e-10, fmt::format("fixture {}: defect {:.3g}", f, defect));
  }
  if (o.pass) {
    o.detail = fmt::format("2-node x* error {:.2g}, ratio error {:.2g}; 20 random fixtures, max defect {:.2g}",
                           worst_x, worst_ratio, worst_defect);
  }
  return o;
}

// 9. Snow-style pipeline on a synthetic observation.
Outcome criterion_snow() {
  Outcome o;
  SplitMix64 rng(91);
  const SnowSynthetic syn = snow_synthetic(rng, 200, 20.0, 15, 19.0 / 20.0);
  ScopedWarningHandler quiet([](std::string_view) {});
  double worst_gap = 0.0;
  std::size_t runs = 0;
  for (std::size_t period : {1u, 3u}) {
    SnowOptions options;
    options.h = 1.0 / 30.0;
    options.steps = 3000;
    options.steps_per_period = period;
    const SnowResult r = snow_pipeline(syn.observation, syn.structure, options);
    ++runs;
    o.require(r.equilibrium_defect <= 1e-10, fmt::format("defect {:.3g}", r.equilibrium_defect));

    const auto src = static_cast<Eigen::Index>(syn.observation.source_index);
    auto household_gap = [&](std::size_t k) {
      Vector g = r.trajectory.state(k) - r.x_star;
      g(src) = 0.0;
      return inf_norm(g);
    };
    const double start = household_gap(0);
    const double mid = household_gap(options.steps / 2);
    const double end = household_gap(options.steps);
    worst_gap = std::max(worst_gap, end);
    o.require(mid < start && end <= std::max(mid, 1e-12), "simulation does not approach the observation");
    o.require(end <= 1e-6, fmt::format("final gap {:.3g}", end));

    auto cumulative = [&](std::size_t k) {
      long long c = 0;
      for (Eigen::Index i = 0; i < r.trajectory.states.cols(); ++i) {
        if (i != src) c += std::llround(r.trajectory.states(static_cast<Eigen::Index>(k), i) * 20.0);
      }
      return c;
    };
    long long sum = 0;
    for (long long v : r.incidence.new_events) sum += v;
    const long long expected = cumulative(options.steps) - cumulative(0);
    o.require(sum == r.incidence.total && sum == expected,
              fmt::format("incidence sum {} total {} expected {}", sum, r.incidence.total, expected));
  }
  if (o.pass) {
    o.detail = fmt::format("200 households, {} runs: defect <= 1e-10, final gap {:.2g}, incidence conserved", runs,
                           worst_gap);
  }
  return o;
}

// 10. USDA-style train-on-subgraph round trip.
Outcome criterion_usda() {
  Outcome o;
  SplitMix64 rng(101);
  const UsdaSynthetic u = usda_synthetic(rng);
  const UsdaResult r = usda_pipeline(u.train_trajectory, u.train_graph, u.full_graph, u.full_x0,
                                     u.reference.steps(), u.h, u.reference);
  o.require(r.fit.has_value(), "no fit report");
  const double err = r.fit ? r.fit->scaled_frobenius_error : 1.0;
  o.require(err <= 1e-8, fmt::format("scaled Frobenius error {:.3g}", err));
  if (o.pass) {
    o.detail = fmt::format("{} regions trained on {}: beta_hat {}, delta_hat {}, scaled error {:.2g}",
                           u.full_graph.size(), u.train_graph.size(), r.estimate.beta_hat(0),
                           r.estimate.delta_hat(0), err);
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "exact parameter recovery", 1.0, criterion_exact_recovery},
      {2, "ratio invariance under unknown h", 1.0, criterion_ratio_invariance},
      {3, "heterogeneous recovery", 1.0, criterion_heterogeneous},
      {4, "threshold dichotomy", 60.0, criterion_dichotomy},
      {5, "Lyapunov certificate soundness", 30.0, criterion_certificate},
      {6, "state-space invariance", 30.0, criterion_invariance},
      {7, "model equivalence", 0.0, criterion_equivalence},
      {8, "endemic fixed point", 0.0, criterion_endemic},
      {9, "snow-style pipeline consistency", 0.0, criterion_snow},
      {10, "usda-style pipeline self-consistency", 0.0, criterion_usda},
  };

  std::size_t warnings = 0;
  sisnet::ScopedWarningHandler count_warnings([&warnings](std::string_view) { ++warnings; });
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = fmt::format("exception: {}", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0.0 && secs >= c.time_limit_s) {
      o.detail = fmt::format("runtime {:.2f} s over the {} s limit; {}", secs, c.time_limit_s, o.detail);
      o.pass = false;
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %2d  %-38s %7.3f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed (%zu library warnings suppressed)\n",
              static_cast<int>(criteria.size()) - failures, criteria.size(), warnings);
  return failures == 0 ? 0 : 1;
}
