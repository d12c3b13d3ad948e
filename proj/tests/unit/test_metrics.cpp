#include "pcula/assignment.hpp"
#include "pcula/metrics.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

using namespace pcula;
using pcula::testing::vec;

namespace {

EmpiricalMeasure values(std::vector<double> v) { return EmpiricalMeasure::from_values(v); }

// Minimum over all permutations of the mean squared matching cost.
double brute_force_w2(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  std::vector<int> perm(std::size_t(a.cols()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) c += (a.col(Eigen::Index(i)) - b.col(perm[i])).squaredNorm();
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best / double(a.cols()));
}

Eigen::MatrixXd random_cloud(std::mt19937_64& rng, Eigen::Index d, Eigen::Index n) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(d, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < d; ++i) m(i, j) = nd(rng);
  return m;
}

Potential zero_potential() {
  return Potential::custom([](const Point&) { return 0.0; },
                           [](const Point& x) { return Point(Point::Zero(x.size())); }, 0.0, 1.0,
                           "zero");
}

const ConvexDomain kWide1 = ConvexDomain::ball(vec({0.0}), 1e9);
const ConvexDomain kWide2 = ConvexDomain::ball(vec({0.0, 0.0}), 1e9);

}  // namespace

TEST(EmpiricalMeasure, Validation) {
  EXPECT_THROW(EmpiricalMeasure(Eigen::MatrixXd(1, 0)), InvalidArgument);
  Eigen::MatrixXd p(1, 2);
  p << 0, 1;
  EXPECT_THROW(EmpiricalMeasure(p, vec({0.5, 0.6})), InvalidArgument);
  EXPECT_THROW(EmpiricalMeasure(p, vec({1.5, -0.5})), InvalidArgument);
  EXPECT_THROW(EmpiricalMeasure(p, vec({1.0})), DimensionMismatch);
  EXPECT_NO_THROW(EmpiricalMeasure(p, vec({0.25, 0.75})));
}

TEST(EmpiricalMeasure, SubsampleIsEvenlySpaced) {
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 0.0);
  const auto s = values(v).subsample(10);
  ASSERT_EQ(s.size(), 10);
  for (Eigen::Index j = 0; j < 10; ++j) EXPECT_EQ(s.points()(0, j), double(10 * j));
}

TEST(W2Exact1d, Examples) {
  EXPECT_EQ(w2_exact_1d(values({0.3, -1, 2}), values({2, 0.3, -1})), 0.0);
  EXPECT_DOUBLE_EQ(w2_exact_1d(values({0}), values({1})), 1.0);
  EXPECT_DOUBLE_EQ(w2_exact_1d(values({0, 1}), values({0.5, 1.5})), 0.5);
  // both pairings by hand: sorted 0.5, crossed sqrt((2.25 + 0.25) / 2)
  EXPECT_LT(0.5, std::sqrt((2.25 + 0.25) / 2));
}

TEST(W2Exact1d, SymmetricAndUnequalSizes) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_cloud(rng, 1, 7), b = random_cloud(rng, 1, 7);
    const EmpiricalMeasure ma(a), mb(b);
    EXPECT_NEAR(w2_exact_1d(ma, mb), w2_exact_1d(mb, ma), 1e-12);
  }
  // {0, 1} against {0, 0.5, 1}: three rank midpoints of the smaller measure
  // interpolated linearly in rank.
  const double d = w2_exact_1d(values({0, 1}), values({0, 0.5, 1}));
  EXPECT_TRUE(std::isfinite(d));
  EXPECT_NEAR(d, w2_exact_1d(values({0, 0.5, 1}), values({0, 1})), 1e-15);
  EXPECT_THROW(w2_exact_1d(EmpiricalMeasure(Eigen::MatrixXd::Zero(2, 3)), values({1, 2, 3})),
               DimensionMismatch);
}

TEST(Assignment, MatchesPermutationBruteForce) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 1 + trial % 6;
    const auto a = random_cloud(rng, 2, n), b = random_cloud(rng, 2, n);
    EXPECT_NEAR(w2_exact_assignment(EmpiricalMeasure(a), EmpiricalMeasure(b)), brute_force_w2(a, b),
                1e-10);
  }
}

TEST(Assignment, AgreesWithSorted1d) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_cloud(rng, 1, 40), b = random_cloud(rng, 1, 40);
    EXPECT_NEAR(w2_exact_assignment(EmpiricalMeasure(a), EmpiricalMeasure(b)),
                w2_exact_1d(EmpiricalMeasure(a), EmpiricalMeasure(b)), 1e-10);
  }
}

TEST(Assignment, MetricAxioms) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const EmpiricalMeasure a(random_cloud(rng, 2, 12)), b(random_cloud(rng, 2, 12)),
        c(random_cloud(rng, 2, 12));
    const double ab = w2_exact_assignment(a, b), bc = w2_exact_assignment(b, c),
                 ac = w2_exact_assignment(a, c);
    EXPECT_NEAR(ab, w2_exact_assignment(b, a), 1e-12);
    EXPECT_LE(ac, ab + bc + 1e-9);
    EXPECT_GT(ab, 0.0);
  }
  Eigen::MatrixXd p = random_cloud(rng, 3, 9);
  Eigen::MatrixXd q = p.rowwise().reverse();
  EXPECT_NEAR(w2_exact_assignment(EmpiricalMeasure(p), EmpiricalMeasure(q)), 0.0, 1e-15);
}

TEST(Assignment, Preconditions) {
  EXPECT_THROW(w2_exact_assignment(EmpiricalMeasure(Eigen::MatrixXd::Zero(2, 3)),
                                   EmpiricalMeasure(Eigen::MatrixXd::Zero(2, 4))),
               InvalidArgument);
  EXPECT_THROW(w2_exact_assignment(EmpiricalMeasure(Eigen::MatrixXd::Zero(1, 4097)),
                                   EmpiricalMeasure(Eigen::MatrixXd::Zero(1, 4097))),
               InvalidArgument);
}

TEST(Assignment, SolverOnKnownMatrix) {
  const double c[3][3] = {{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
  const auto r = solve_assignment(3, [&](std::size_t i, std::size_t j) { return c[i][j]; });
  EXPECT_EQ(r.cost, 5.0);
  EXPECT_EQ(r.match, (std::vector<std::size_t>{1, 0, 2}));
}

TEST(GibbsGrid, GaussianClosedForm1d) {
  for (double alpha : {0.5, 1.0, 4.0}) {
    const PenalizedPotential f(Potential::quadratic(alpha), kWide1, 0.0);
    const double sd = 1.0 / std::sqrt(alpha);
    const auto g = gibbs_density_grid(f, 1.0, {GridAxis{-10 * sd, 10 * sd, 20001}});
    EXPECT_NEAR(g.integral(), 1.0, 1e-8);
    EXPECT_LE(g.tail_mass_bound, kGridTailMassTol);
    for (std::size_t i = 0; i < g.node_count(); i += 97) {
      const double x = g.node_point(i)(0);
      const double exact = std::exp(-0.5 * x * x / (sd * sd)) / (sd * std::sqrt(2 * M_PI));
      EXPECT_NEAR(g.values[i], exact, 1e-6);
    }
  }
}

TEST(GibbsGrid, GaussianClosedForm2dWithSigma) {
  const double sigma = 0.7, alpha = 2.0;
  const PenalizedPotential f(Potential::quadratic(alpha), kWide2, 0.0);
  const double var = sigma * sigma / alpha;
  const auto g = gibbs_density_grid(f, sigma, {GridAxis{-4, 4, 401}, GridAxis{-4, 4, 401}});
  EXPECT_NEAR(g.integral(), 1.0, 1e-8);
  for (std::size_t i = 0; i < g.node_count(); i += 1231) {
    const Point x = g.node_point(i);
    const double exact = std::exp(-0.5 * x.squaredNorm() / var) / (2 * M_PI * var);
    EXPECT_NEAR(g.values[i], exact, 1e-6);
  }
}

TEST(GibbsGrid, SymmetricPotentialGivesSymmetricGrid) {
  const PenalizedPotential f(Potential::quadratic(1.0), ConvexDomain::box(vec({-1}), vec({1})), 50.0);
  const auto g = gibbs_density_grid(f, 1.0, {GridAxis{-9, 9, 18001}});
  const std::size_t n = g.node_count();
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(g.values[i], g.values[n - 1 - i], 1e-12);
}

TEST(GibbsGrid, LargePenaltyApproachesUniformOnInterval) {
  const auto interval = ConvexDomain::box(vec({-1}), vec({1}));
  const PenalizedPotential f(zero_potential(), interval, 1e4);
  const auto g = gibbs_density_grid(f, 1.0, {GridAxis{-1.2, 1.2, 24001}});
  EXPECT_NEAR(g.integral(), 1.0, 1e-8);
  // mass outside by the explicit formula: 2 * int_0^inf exp(-n t^2) / Z
  const double z_out = std::sqrt(M_PI / 1e4);
  const double expected_out = z_out / (2.0 + z_out);
  EXPECT_LT(mass_outside(g, interval), 0.01);
  EXPECT_NEAR(mass_outside(g, interval), expected_out, 1e-4);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const double x = g.node_point(i)(0);
    if (std::abs(x) < 0.99) EXPECT_NEAR(g.values[i], 1.0 / (2.0 + z_out), 1e-6);
  }
}

TEST(GibbsGrid, NarrowBoundsRejected) {
  const PenalizedPotential f(Potential::quadratic(1.0), kWide1, 0.0);
  EXPECT_THROW(gibbs_density_grid(f, 1.0, {GridAxis{-2, 2, 1001}}), GridBoundsError);
  const PenalizedPotential flat(zero_potential(), ConvexDomain::box(vec({-1}), vec({1})), 1.0);
  EXPECT_THROW(gibbs_density_grid(flat, 1.0, {GridAxis{-1.5, 1.5, 1001}}), GridBoundsError);
}

TEST(GibbsGrid, MassOutsideShrinksWithPenalty) {
  const auto ellipse = ConvexDomain::ellipsoid(vec({1.0, 0.5}));
  double prev = 1.0;
  for (double n : {1.0, 10.0, 100.0, 500.0}) {
    const PenalizedPotential f(Potential::quadratic(1.0), ellipse, n);
    const auto g = gibbs_density_grid(f, 1.0, {GridAxis{-7, 7, 701}, GridAxis{-7, 7, 701}});
    const double out = mass_outside(g, ellipse);
    EXPECT_LE(out, prev);
    prev = out;
  }
}

TEST(TruncatedGibbs, UniformWhenPotentialIsFlat) {
  const auto interval = ConvexDomain::box(vec({-1}), vec({1}));
  const auto g = truncated_gibbs_density_grid(zero_potential(), interval, 1.0, {GridAxis{-1, 1, 2001}});
  EXPECT_NEAR(g.integral(), 1.0, 1e-12);
  for (double v : g.values) EXPECT_NEAR(v, 0.5, 1e-12);
  EXPECT_NEAR(g.quantile(0.25), -0.5, 1e-12);
}

TEST(GridQuantile, InvertsTheCdf) {
  const PenalizedPotential f(Potential::quadratic(1.0), kWide1, 0.0);
  const auto g = gibbs_density_grid(f, 1.0, {GridAxis{-10, 10, 40001}});
  EXPECT_NEAR(g.quantile(0.5), 0.0, 1e-9);
  EXPECT_NEAR(g.quantile(0.975), 1.959963984540054, 1e-5);
  EXPECT_NEAR(g.quantile(0.025), -1.959963984540054, 1e-5);
}

TEST(W2SampleVsGrid, SelfConsistency) {
  const PenalizedPotential f(Potential::quadratic(1.0), ConvexDomain::box(vec({-1}), vec({1})), 10.0);
  const auto g = gibbs_density_grid(f, 1.0, {GridAxis{-9, 9, 180001}});
  std::vector<double> q;
  for (int i = 0; i < 5000; ++i) q.push_back(g.quantile((i + 0.5) / 5000));
  EXPECT_LE(w2_sample_vs_grid_1d(values(q), g), 1e-3);
}

TEST(W2SampleVsGrid, NearPointMass) {
  const auto g = gibbs_density_grid(PenalizedPotential(Potential::quadratic(1e8), kWide1, 0.0), 1.0,
                                    {GridAxis{-1e-3, 1e-3, 20001}});
  EXPECT_LE(w2_sample_vs_grid_1d(values(std::vector<double>(100, 0.0)), g), 2e-4);
}

TEST(W2SampleVsGrid, ShiftedGaussians) {
  const PenalizedPotential f(Potential::quadratic(1.0), kWide1, 0.0);
  const auto g = gibbs_density_grid(f, 1.0, {GridAxis{-10, 10, 40001}});
  std::vector<double> q;
  for (int i = 0; i < 4000; ++i) q.push_back(g.quantile((i + 0.5) / 4000) + 0.3);
  EXPECT_NEAR(w2_sample_vs_grid_1d(values(q), g), 0.3, 1e-3);
}

// Standard normal target: g = x^2 / 4 with sigma = 1. The 1e6 x 1e-4 chain
// is floor-limited (T = 100), so the horizon here is T = 4e4 and the
// median of three seeds is gated.
TEST(W2SampleVsGrid, UlaSamplesOfStandardNormal) {
  ChainConfig cfg{PenalizedPotential(Potential::quadratic(1.0), kWide1, 0.0)};
  cfg.h = 2e-2;
  cfg.steps = 2'000'000;
  const auto g = gibbs_density_grid(cfg.potential, 1.0, {GridAxis{-10, 10, 20001}});
  std::vector<double> w2;
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    cfg.seed = seed;
    w2.push_back(w2_sample_vs_grid_1d(EmpiricalMeasure::from_trajectory(run_chain(cfg)), g));
  }
  std::sort(w2.begin(), w2.end());
  EXPECT_LE(w2[1], 0.02) << w2[0] << " " << w2[1] << " " << w2[2];
}

TEST(W2Grid, ShiftedGaussiansAndIdentity) {
  const PenalizedPotential f(Potential::quadratic(1.0), kWide1, 0.0);
  const auto a = gibbs_density_grid(f, 1.0, {GridAxis{-10, 10, 20001}});
  const auto b = gibbs_density_grid(f, 1.0, {GridAxis{-9.5, 10.5, 20001}});
  EXPECT_NEAR(w2_grid_1d(a, a), 0.0, 1e-12);
  // b is the same law sampled on shifted nodes: still the same law.
  EXPECT_NEAR(w2_grid_1d(a, b), 0.0, 1e-6);
}

TEST(Accuracy, Examples) {
  const auto ellipse = ConvexDomain::ellipsoid(vec({1.0, 0.5}));
  Eigen::MatrixXd s(2, 4);
  s << 0, 0.5, 0.9, 2, 0, 0.1, 0.3, 0;
  EXPECT_DOUBLE_EQ(accuracy_in_domain(s, ellipse), 0.5);
  EXPECT_EQ(accuracy_in_domain(Eigen::MatrixXd(s.leftCols(2)), ellipse), 1.0);
  EXPECT_THROW(accuracy_in_domain(Eigen::MatrixXd(2, 0), ellipse), InvalidArgument);

  ChainConfig cfg{PenalizedPotential(Potential::quadratic(1.0), ellipse, 0.0)};
  cfg.h = 1e-3;
  cfg.steps = 20000;
  EXPECT_EQ(accuracy_in_domain(projected_euler_chain(cfg), ellipse), 1.0);
}

TEST(GridCsv, Layout) {
  GridDensity g{{GridAxis{0, 1, 2}}, {0.5, 1.5}};
  std::ostringstream os;
  write_grid_csv(os, g);
  EXPECT_EQ(os.str(), "x,value\r\n0,0.5\r\n1,1.5\r\n");
  GridDensity g2{{GridAxis{0, 1, 2}, GridAxis{0, 2, 2}}, {1, 2, 3, 4}};
  std::ostringstream os2;
  write_grid_csv(os2, g2);
  EXPECT_EQ(os2.str(), "x,y,value\r\n0,0,1\r\n1,0,2\r\n0,2,3\r\n1,2,4\r\n");
}
