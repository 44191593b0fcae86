#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sisnet/analysis.hpp"
#include "sisnet/diagnostics.hpp"
#include "sisnet/errors.hpp"
#include "sisnet/fixtures.hpp"
#include "sisnet/identification.hpp"

namespace sisnet {
namespace {

struct Fixture {
  SpreadParams params;
  Trajectory trajectory;
};

Fixture geometric_run(std::uint64_t seed, double beta, double delta, double h, std::size_t steps) {
  SplitMix64 rng(seed);
  const GeometricFixture g = geometric_fixture(rng);
  SpreadParams p = SpreadParams::homogeneous(h, beta, delta, g.graph);
  Trajectory t = simulate(p, random_binary_state(rng, g.graph.size()), steps, Model::kEuler);
  return {std::move(p), std::move(t)};
}

Trajectory constant_trajectory(const StateVector& x, std::size_t steps) {
  Trajectory t;
  t.states = x.transpose().replicate(static_cast<Eigen::Index>(steps) + 1, 1);
  return t;
}

TEST(BuildRegression, HealthyTrajectoryIsAllZero) {
  SplitMix64 rng(1);
  const GeometricFixture g = geometric_fixture(rng);
  const RegressionSystem sys = build_regression(constant_trajectory(Vector::Zero(40), 3), g.graph, 0.1);
  EXPECT_EQ(sys.phi.rows(), 120);
  EXPECT_TRUE(sys.phi.isZero(0.0));
  EXPECT_TRUE(sys.rhs.isZero(0.0));
}

TEST(BuildRegression, OneStepOfGeometricFixture) {
  const Fixture f = geometric_run(2, 1.0, 0.1, 0.1, 1);
  const RegressionSystem sys = build_regression(f.trajectory, f.params.adjacency(), 0.1);
  EXPECT_EQ(sys.phi.rows(), 40);
  EXPECT_EQ(sys.phi.cols(), 2);
  EXPECT_FALSE(sys.rhs.isZero(0.0));
  EXPECT_LE((sys.phi * Eigen::Vector2d(1.0, 0.1) - sys.rhs).lpNorm<Eigen::Infinity>(), 1e-15);
}

TEST(BuildRegression, EndemicRestingTrajectory) {
  Matrix a(2, 2);
  a << 0, 1,
       1, 0;
  const RegressionSystem sys = build_regression(constant_trajectory(Eigen::Vector2d(0.5, 0.5), 2), WeightedDigraph(a), 0.5);
  EXPECT_TRUE(sys.rhs.isZero(0.0));
  EXPECT_FALSE(sys.phi.isZero(0.0));
}

TEST(BuildRegression, Errors) {
  const WeightedDigraph g = WeightedDigraph::identity(3);
  EXPECT_THROW(build_regression(constant_trajectory(Vector::Zero(3), 0), g, 1.0), InsufficientDataError);
  EXPECT_THROW(build_regression(constant_trajectory(Vector::Zero(2), 2), g, 1.0), DimensionError);
  EXPECT_THROW(build_node_regression(constant_trajectory(Vector::Zero(3), 2), g, 1.0, 3), ValidationError);
}

TEST(IdentifyHomogeneous, TwoStatesRecoverGeometricFixture) {
  const Fixture f = geometric_run(3, 1.0, 0.1, 0.1, 1);
  const EstimationResult r = identify_homogeneous(f.trajectory, f.params.adjacency(), 0.1);
  ASSERT_TRUE(r.identifiable);
  EXPECT_EQ(r.case_tag, IdentifiabilityCase::kIdentifiable);
  EXPECT_EQ(r.rank, 2);
  EXPECT_EQ(r.transitions, 1u);
  EXPECT_NEAR(r.beta_hat(0), 1.0, 1e-8);
  EXPECT_NEAR(r.delta_hat(0), 0.1, 1e-8);
  EXPECT_NEAR(r.ratio_hat(0), 0.1, 1e-8);
  EXPECT_LE(r.residual_norm, 1e-8);
}

TEST(IdentifyHomogeneous, ScaledRateFamily) {
  for (double c : {0.25, 1.0, 4.0, 20.0}) {
    const Fixture f = geometric_run(4, 0.0223745 * c, 0.00909176 * c, 1.0, 10);
    const EstimationResult r = identify_homogeneous(f.trajectory, f.params.adjacency(), 1.0);
    ASSERT_TRUE(r.identifiable);
    EXPECT_NEAR(r.beta_hat(0), 0.0223745 * c, 1e-10 * c);
    EXPECT_NEAR(r.delta_hat(0), 0.00909176 * c, 1e-10 * c);
  }
}

TEST(IdentifyHomogeneous, StationaryCases) {
  SplitMix64 rng(5);
  const GeometricFixture g = geometric_fixture(rng);
  const EstimationResult healthy = identify_homogeneous(constant_trajectory(Vector::Zero(40), 4), g.graph, 0.1);
  EXPECT_FALSE(healthy.identifiable);
  EXPECT_FALSE(healthy.movement_detected);
  EXPECT_EQ(healthy.case_tag, IdentifiabilityCase::kHealthyStationary);
  EXPECT_EQ(healthy.nodes_stationary.size(), 40u);
  EXPECT_TRUE(std::isnan(healthy.beta_hat(0)));

  const SpreadParams p = SpreadParams::homogeneous(0.1, 1.0, 0.1, g.graph);
  const EndemicState s = endemic_equilibrium(p);
  ASSERT_TRUE(s.exists);
  const EstimationResult endemic = identify_homogeneous(constant_trajectory(s.x_star, 4), g.graph, 0.1);
  EXPECT_FALSE(endemic.identifiable);
  EXPECT_EQ(endemic.case_tag, IdentifiabilityCase::kEndemicStationary);
}

TEST(IdentifyHomogeneous, Preconditions) {
  EXPECT_THROW(identify_homogeneous(constant_trajectory(Vector::Zero(1), 2), WeightedDigraph::identity(1), 1.0),
               PreconditionError);
  EXPECT_THROW(identify_homogeneous(constant_trajectory(Vector::Zero(3), 0), WeightedDigraph::identity(3), 1.0),
               InsufficientDataError);
}

TEST(IdentifyHomogeneous, RankDeficientWithMovement) {
  const ScopedWarningHandler quiet([](std::string_view) {});
  const SpreadParams p = SpreadParams::homogeneous(0.5, 1.0, 0.2, WeightedDigraph(Matrix::Zero(3, 3)));
  const Trajectory t = simulate(p, Eigen::Vector3d(0.5, 0.2, 0.9), 3, Model::kEuler);
  const EstimationResult r = identify_homogeneous(t, p.adjacency(), 0.5);
  EXPECT_TRUE(r.movement_detected);
  EXPECT_FALSE(r.identifiable);
  EXPECT_EQ(r.case_tag, IdentifiabilityCase::kRankDeficient);
  EXPECT_EQ(r.rank, 1);
}

TEST(IdentifyHomogeneous, WarnsOnNegativeEstimates) {
  std::vector<std::string> warnings;
  ScopedWarningHandler guard([&](std::string_view m) { warnings.emplace_back(m); });
  const Fixture f = geometric_run(6, 1.0, 0.1, 0.1, 3);
  Trajectory reversed = f.trajectory;
  reversed.states = f.trajectory.states.colwise().reverse();
  const EstimationResult r = identify_homogeneous(reversed, f.params.adjacency(), 0.1);
  ASSERT_TRUE(r.identifiable);
  EXPECT_TRUE(r.beta_hat(0) < 0.0 || r.delta_hat(0) < 0.0);
  EXPECT_FALSE(warnings.empty());
}

TEST(IdentifyRatio, GuessedStepScalesEstimates) {
  const Fixture f = geometric_run(7, 1.0, 0.1, 0.1, 5);
  const EstimationResult r = identify_ratio(f.trajectory, f.params.adjacency(), 1.0);
  ASSERT_TRUE(r.identifiable);
  EXPECT_TRUE(r.scaled);
  EXPECT_EQ(r.kind, EstimateKind::kRatio);
  EXPECT_NEAR(r.beta_hat(0), 0.1, 1e-10);
  EXPECT_NEAR(r.delta_hat(0), 0.01, 1e-10);
  EXPECT_NEAR(r.ratio_hat(0), 0.1, 1e-10);
}

TEST(IdentifyRatio, InvariantToGuess) {
  const Fixture f = geometric_run(8, 0.7, 0.2, 0.05, 4);
  const EstimationResult base = identify_homogeneous(f.trajectory, f.params.adjacency(), 0.05);
  const EstimationResult same = identify_ratio(f.trajectory, f.params.adjacency(), 0.05);
  EXPECT_EQ(same.beta_hat(0), base.beta_hat(0));
  EXPECT_EQ(same.delta_hat(0), base.delta_hat(0));
  for (double c : {0.01, 0.3, 7.0, 1000.0}) {
    const EstimationResult r = identify_ratio(f.trajectory, f.params.adjacency(), 0.05 * c);
    EXPECT_NEAR(r.ratio_hat(0), base.ratio_hat(0), 1e-10);
    EXPECT_NEAR(r.beta_hat(0) * c, base.beta_hat(0), 1e-10);
    EXPECT_NEAR(r.delta_hat(0) * c, base.delta_hat(0), 1e-10);
  }
  EXPECT_THROW(identify_ratio(f.trajectory, f.params.adjacency(), 0.0), ValidationError);
  EXPECT_THROW(identify_ratio(f.trajectory, f.params.adjacency(), -1.0), ValidationError);
}

TEST(IdentifyHeterogeneous, RecoversDistinctRates) {
  SplitMix64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 5 + rng.below(30);
    const Matrix a = testing::random_irreducible(rng, n, 0.2);
    Vector beta(static_cast<Eigen::Index>(n)), delta(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < beta.size(); ++i) {
      beta(i) = rng.uniform(0.5, 1.5);
      delta(i) = rng.uniform(0.05, 0.2);
    }
    const double h = 0.9 / (beta.asDiagonal() * a).rowwise().sum().maxCoeff();
    const SpreadParams p = SpreadParams::per_node(h, beta, delta, WeightedDigraph(a));
    const Trajectory t = simulate(p, random_interior_state(rng, n), 3, Model::kEuler);
    const EstimationResult r = identify_heterogeneous(t, p.adjacency(), h);
    ASSERT_TRUE(r.identifiable);
    EXPECT_EQ(r.kind, EstimateKind::kHeterogeneous);
    EXPECT_LE((r.beta_hat - beta).lpNorm<Eigen::Infinity>(), 1e-8);
    EXPECT_LE((r.delta_hat - delta).lpNorm<Eigen::Infinity>(), 1e-8);
    EXPECT_LE(r.residual_norm, 1e-8);
  }
}

TEST(IdentifyHeterogeneous, IsolatedHealthyNodeIsStationary) {
  const ScopedWarningHandler quiet([](std::string_view) {});
  Matrix a = Matrix::Ones(4, 4);
  a.row(3).setZero();
  a.col(3).setZero();
  const SpreadParams p = SpreadParams::homogeneous(0.1, 1.0, 0.2, WeightedDigraph(a));
  StateVector x0(4);
  x0 << 0.5, 0.2, 0.9, 0.0;
  const Trajectory t = simulate(p, x0, 4, Model::kEuler);
  const EstimationResult r = identify_heterogeneous(t, p.adjacency(), 0.1);
  EXPECT_FALSE(r.identifiable);
  EXPECT_EQ(r.nodes_stationary, std::vector<NodeIndex>{3});
  EXPECT_EQ(r.node_cases[3], IdentifiabilityCase::kHealthyStationary);
  EXPECT_EQ(r.case_tag, IdentifiabilityCase::kHealthyStationary);
  EXPECT_TRUE(std::isnan(r.beta_hat(3)));
  for (Eigen::Index i = 0; i < 3; ++i) {
    EXPECT_NEAR(r.beta_hat(i), 1.0, 1e-10);
    EXPECT_NEAR(r.delta_hat(i), 0.2, 1e-10);
  }
}

TEST(IdentifyHeterogeneous, SingleTransitionIsRankOne) {
  const Fixture f = geometric_run(10, 1.0, 0.1, 0.1, 1);
  const EstimationResult r = identify_heterogeneous(f.trajectory, f.params.adjacency(), 0.1);
  EXPECT_FALSE(r.identifiable);
  EXPECT_EQ(r.nodes_stationary.size(), 40u);
  std::size_t moving = 0;
  for (Eigen::Index i = 0; i < 40; ++i) {
    if (f.trajectory.states(1, i) == f.trajectory.states(0, i)) continue;
    ++moving;
    EXPECT_EQ(r.node_ranks[static_cast<std::size_t>(i)], 1);
    EXPECT_EQ(r.node_cases[static_cast<std::size_t>(i)], IdentifiabilityCase::kRankDeficient);
  }
  EXPECT_GT(moving, 0u);
}

TEST(IdentifyHeterogeneous, DependentRowsOnPathGraph) {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 1) = a(1, 0) = a(1, 2) = a(2, 1) = 1.0;
  Trajectory t;
  t.states.resize(3, 3);
  t.states << 0.5, 0.5, 0.2,
              0.4, 1.0 / 3.0, 0.3,
              0.3, 0.25, 0.35;
  // Node 0 rows: [0.25, -0.5] and [0.6 / 3, -0.4] are proportional.
  const EstimationResult r = identify_heterogeneous(t, WeightedDigraph(a), 1.0);
  EXPECT_EQ(r.node_ranks[0], 1);
  EXPECT_EQ(r.node_cases[0], IdentifiabilityCase::kRankDeficient);
  EXPECT_EQ(r.node_cases[1], IdentifiabilityCase::kIdentifiable);
  EXPECT_FALSE(r.identifiable);
}

TEST(CaseNames, RoundTrip) {
  for (auto c : {IdentifiabilityCase::kIdentifiable, IdentifiabilityCase::kHealthyStationary,
                 IdentifiabilityCase::kEndemicStationary, IdentifiabilityCase::kRankDeficient}) {
    EXPECT_EQ(parse_identifiability_case(to_string(c)), c);
  }
  EXPECT_THROW(parse_identifiability_case("maybe"), ValidationError);
}

TEST(RatioFromEndemic, Examples) {
  Matrix a(2, 2);
  a << 0, 1,
       1, 0;
  const Vector pair = ratio_from_endemic(Eigen::Vector2d(0.5, 0.5), WeightedDigraph(a));
  EXPECT_NEAR(pair(0), 0.5, 1e-15);
  EXPECT_NEAR(pair(1), 0.5, 1e-15);

  EXPECT_EQ(ratio_from_endemic(Eigen::Vector2d(1, 1), WeightedDigraph(a)), Vector::Zero(2));

  Matrix pump = Matrix::Zero(2, 2);
  pump(0, 1) = 1.0;
  pump(1, 1) = 1.0;
  const Vector household = ratio_from_endemic(Eigen::Vector2d(15.0 / 20.0, 19.0 / 20.0), WeightedDigraph(pump));
  EXPECT_NEAR(household(0), (5.0 / 15.0) * (19.0 / 20.0), 1e-15);
  EXPECT_NEAR(household(0), 0.3167, 1e-4);

  EXPECT_THROW(ratio_from_endemic(Eigen::Vector2d(0.5, 0.0), WeightedDigraph(a)), PreconditionError);
  EXPECT_THROW(ratio_from_endemic(Vector::Ones(3), WeightedDigraph(a)), DimensionError);
}

TEST(DeriveDelta, LinearInBeta) {
  SplitMix64 rng(11);
  const Matrix a = testing::random_irreducible(rng, 6, 0.4);
  const StateVector x = random_interior_state(rng, 6);
  const Vector ratio = ratio_from_endemic(x, WeightedDigraph(a));
  EXPECT_EQ(derive_delta_from_endemic(x, WeightedDigraph(a), Vector::Ones(6)), ratio);
  EXPECT_EQ(derive_delta_from_endemic(x, WeightedDigraph(a), Vector::Constant(6, 2.0)), 2.0 * ratio);
  EXPECT_THROW(derive_delta_from_endemic(x, WeightedDigraph(a), Vector::Ones(5)), DimensionError);
}

TEST(DeriveDelta, BroadcastStarDependsOnOwnLevelAndSource) {
  SplitMix64 rng(12);
  const std::size_t n = 8;
  const WeightedDigraph star = attach_broadcast_column(WeightedDigraph::identity(n), n - 1, {{2, 0.1}});
  StateVector x = random_interior_state(rng, n);
  x(static_cast<Eigen::Index>(n) - 1) = 0.95;
  const Vector delta = derive_delta_from_endemic(x, star, Vector::Ones(static_cast<Eigen::Index>(n)));
  for (Eigen::Index i = 0; i + 1 < static_cast<Eigen::Index>(n); ++i) {
    const double w = i == 2 ? 0.1 : 1.0;
    EXPECT_NEAR(delta(i), (1.0 - x(i)) / x(i) * (x(i) + w * 0.95), 1e-14);
  }
}

}  // namespace
}  // namespace sisnet
