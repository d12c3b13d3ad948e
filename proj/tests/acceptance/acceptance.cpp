// Acceptance suite: one PASS/FAIL line per criterion.
//   pcula_acceptance            run all criteria
//   pcula_acceptance 4 7        run selected criteria
// Exit status is nonzero when any selected criterion fails.

#include "pcula/assignment.hpp"
#include "pcula/cli.hpp"
#include "pcula/domain.hpp"
#include "pcula/experiments.hpp"
#include "pcula/metrics.hpp"
#include "pcula/sampler.hpp"

#include "json.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace pcula;
namespace fs = std::filesystem;

namespace {

Point vec(std::initializer_list<double> v) {
  Point p(Eigen::Index(v.size()));
  Eigen::Index i = 0;
  for (double x : v) p(i++) = x;
  return p;
}

Point random_point(std::mt19937_64& rng, Eigen::Index d, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Point p(d);
  for (Eigen::Index i = 0; i < d; ++i) p(i) = u(rng);
  return p;
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double sorted_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------------------
// Independent 1-D oracles on [-1, 1] with g = alpha x^2 / 4, sigma = 1.

// Tabulated CDF of a density on [lo, hi] with a fine trapezoid rule.
struct Tabulated {
  double lo, hi;
  std::vector<double> cdf;

  template <class Density>
  Tabulated(Density p, double lo_, double hi_, std::size_t cells) : lo(lo_), hi(hi_), cdf(cells + 1) {
    const double dx = (hi - lo) / double(cells);
    double prev = p(lo), acc = 0.0;
    cdf[0] = 0.0;
    for (std::size_t i = 1; i <= cells; ++i) {
      const double cur = p(lo + dx * double(i));
      acc += 0.5 * (prev + cur) * dx;
      cdf[i] = acc;
      prev = cur;
    }
    for (double& c : cdf) c /= acc;
  }

  double quantile(double u) const {
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    const auto i = std::size_t(std::max<std::ptrdiff_t>(1, it - cdf.begin()));
    const double dx = (hi - lo) / double(cdf.size() - 1);
    const double c0 = cdf[i - 1], c1 = cdf[i];
    const double frac = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
    return lo + dx * (double(i - 1) + frac);
  }
};

double penalized_energy_1d(double x, double alpha, double n) {
  const double out = std::max(0.0, std::abs(x) - 1.0);
  return 0.25 * alpha * x * x + 0.5 * n * out * out;
}

Tabulated penalized_law_1d(double alpha, double n) {
  return Tabulated([=](double x) { return std::exp(-2.0 * penalized_energy_1d(x, alpha, n)); },
                   -12.0, 12.0, 4'000'000);
}

// Truncated Gibbs on [-1, 1]: a normal with variance 1 / alpha restricted to
// the interval, so the quantile is closed form.
double truncated_quantile(double u, double alpha) {
  const boost::math::normal_distribution<double> nd(0.0, 1.0 / std::sqrt(alpha));
  const double a = boost::math::cdf(nd, -1.0), b = boost::math::cdf(nd, 1.0);
  return boost::math::quantile(nd, a + u * (b - a));
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<std::pair<std::string, ConvexDomain>> variants{
      {"ball", ConvexDomain::ball(vec({0.2, -0.1}), 1.0)},
      {"box", ConvexDomain::box(vec({-1.0, -0.5}), vec({1.0, 0.5}))},
      {"halfspace", ConvexDomain::halfspace(vec({s, s}), 0.3)},
      {"ellipsoid", ConvexDomain::ellipsoid(vec({1.0, 0.5}))},
      {"intersection", ConvexDomain::intersection({ConvexDomain::halfspace(vec({1.0, 0.0}), 0.5),
                                                   ConvexDomain::halfspace(vec({s, s}), 0.2)})},
  };
  double worst_idem = 0.0, worst_exp = -INFINITY, worst_vi = -INFINITY;
  std::mt19937_64 rng(2718);
  for (const auto& [name, d] : variants) {
    for (int i = 0; i < 1000; ++i) {
      const Point x = random_point(rng, 2, 3.0), y = random_point(rng, 2, 3.0);
      const Point px = d.project(x).point, py = d.project(y).point;
      worst_idem = std::max(worst_idem, (d.project(px).point - px).norm());
      worst_exp = std::max(worst_exp, (px - py).norm() - (x - y).norm());
      // a member y of D: the projection of a fresh random point
      const Point z = d.project(random_point(rng, 2, 3.0)).point;
      worst_vi = std::max(worst_vi, (x - px).dot(z - px));
    }
  }
  const bool ok = worst_idem <= 1e-10 && worst_exp <= 1e-10 && worst_vi <= 1e-9;
  return {ok, "5 variants x 1000 points; idempotence " + fmt("%.1e", worst_idem) +
                  " <= 1e-10, expansion " + fmt("%.1e", worst_exp) + " <= 1e-10, variational " +
                  fmt("%.1e", worst_vi) + " <= 1e-9"};
}

Outcome criterion2() {
  // g(x) = sum log cosh(x_i) + x_1^2 / 2 declared with m = 0, L = 2.
  const auto custom = Potential::custom(
      [](const Point& x) {
        double v = 0.5 * x(0) * x(0);
        for (Eigen::Index i = 0; i < x.size(); ++i) v += std::log(std::cosh(x(i)));
        return v;
      },
      [](const Point& x) {
        Point g = x.array().tanh();
        g(0) += x(0);
        return g;
      },
      0.0, 2.0);
  const ConvexDomain domains[] = {ConvexDomain::ellipsoid(vec({1.0, 0.5})),
                                  ConvexDomain::box(vec({-1.0, -0.5}), vec({1.0, 0.5}))};
  double worst = 0.0;
  int checked = 0;
  std::mt19937_64 rng(31415);
  for (const auto& g : {Potential::quadratic(1.0), custom}) {
    for (double n : {0.0, 1.0, 100.0}) {
      for (const auto& d : domains) {
        const PenalizedPotential f(g, d, n);
        int done = 0;
        while (done < 500) {
          const Point x = random_point(rng, 2, 2.0);
          bool near = false;
          for (int k = 0; k < 16 && !near; ++k) {
            const double a = k * M_PI / 8;
            near = d.contains(x + 1e-4 * vec({std::cos(a), std::sin(a)})) != d.contains(x);
          }
          if (near) continue;
          Point fd(2);
          for (int k = 0; k < 2; ++k) {
            Point e = Point::Zero(2);
            e(k) = 1e-6;
            fd(k) = (f.value(x + e) - f.value(x - e)) / 2e-6;
          }
          const Point grad = f.gradient(x);
          worst = std::max(worst, (fd - grad).norm() / std::max(1.0, grad.norm()));
          ++done;
          ++checked;
        }
      }
    }
  }
  return {worst <= 1e-5, std::to_string(checked) + " points (quadratic, custom; n = 0, 1, 100); "
                             "relative error " + fmt("%.1e", worst) + " <= 1e-5"};
}

Outcome criterion3() {
  const auto ellipse = ConvexDomain::ellipsoid(vec({1.0, 0.5}));
  // Part A: quadratic g, n = 0, shared noise: d_k = (1 - h m)^k d_0 exactly.
  ChainConfig a{PenalizedPotential(Potential::quadratic(1.0), ellipse, 0.0)};
  a.h = 1e-3;
  a.steps = 10000;
  a.seed = 1;
  a.initial = vec({0.0, 0.0});
  ChainConfig b = a;
  b.initial = vec({0.9, 0.2});
  const auto run = run_coupled(a, b);
  double worst_closed = 0.0;
  const double d0 = std::hypot(0.9, 0.2);
  for (std::size_t k = 0; k < run.distances.size(); ++k)
    worst_closed = std::max(worst_closed,
                            std::abs(run.distances[k] - std::pow(1.0 - a.h * 0.5, double(k)) * d0));

  // Part B: ellipse, n = 100, h = 1e-4, 10 seeds, per-path bound at every k.
  double worst_path = -INFINITY;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ChainConfig pa{PenalizedPotential(Potential::quadratic(1.0), ellipse, 100.0)};
    pa.h = 1e-4;
    pa.steps = 10000;
    pa.seed = seed;
    pa.initial = vec({0.0, 0.0});
    ChainConfig pb = pa;
    pb.initial = vec({0.9, 0.2});
    const auto r = run_coupled(pa, pb);
    double bound = r.distances[0];
    for (std::size_t k = 0; k < r.distances.size(); ++k) {
      if (k) bound *= 1.0 - pa.h * 0.5;
      worst_path = std::max(worst_path, r.distances[k] - bound);
    }
  }
  const bool ok = worst_closed <= 1e-12 && worst_path <= 1e-9;
  return {ok, "closed form over 1e4 steps max error " + fmt("%.1e", worst_closed) +
                  " <= 1e-12; ellipse n=100, 10 seeds, max excess over (1-hm)^k d0 " +
                  fmt("%.1e", worst_path) + " <= 1e-9"};
}

Outcome criterion4() {
  const auto interval = ConvexDomain::box(vec({-1.0}), vec({1.0}));
  const PenalizedPotential f(Potential::quadratic(1.0), interval, 100.0);
  const Tabulated oracle = penalized_law_1d(1.0, 100.0);
  const auto grid = gibbs_density_grid(f, 1.0, auto_grid_axes(f, 1.0, 1e-4));
  std::vector<double> lib, orc;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ChainConfig cfg{f};
    cfg.h = 1e-4;
    cfg.steps = 1'000'000;
    cfg.seed = seed;
    const auto t = run_chain(cfg);
    lib.push_back(w2_sample_vs_grid_1d(EmpiricalMeasure::from_trajectory(t), grid));
    std::vector<double> v(t.samples.data(), t.samples.data() + t.size());
    std::sort(v.begin(), v.end());
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double q = oracle.quantile((double(i) + 0.5) / double(v.size()));
      acc += (v[i] - q) * (v[i] - q);
    }
    orc.push_back(std::sqrt(acc / double(v.size())));
  }
  const double med = sorted_median(lib), med_oracle = sorted_median(orc);
  const bool agree = std::abs(med - med_oracle) <= 1e-3;
  std::string per;
  for (double w : lib) per += (per.empty() ? "" : ", ") + fmt("%.4f", w);
  return {med <= 0.02 && agree, "median W2 over 5 seeds " + fmt("%.4f", med) + " <= 0.02 (per seed " +
                                    per + "; independent quadrature oracle " +
                                    fmt("%.4f", med_oracle) + ")"};
}

Outcome criterion5() {
  QuadratureSweepParams p{Potential::quadratic(1.0), ConvexDomain::box(vec({-1.0}), vec({1.0}))};
  p.n_list = {10, 100, 1000, 10000};
  const auto r = penalty_sweep_quadrature(p);
  const auto w2 = r.derived["w2"].get<std::vector<double>>();
  const double slope = r.derived["loglog_slope"].get<double>();

  // oracle: quantile-space integral of the tabulated pi^n against the
  // closed-form truncated normal quantile
  double worst_gap = 0.0;
  std::vector<double> oracle;
  for (double n : p.n_list) {
    const Tabulated law = penalized_law_1d(1.0, n);
    const int m = 200000;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      const double u = (i + 0.5) / m;
      const double d = law.quantile(u) - truncated_quantile(u, 1.0);
      acc += d * d;
    }
    oracle.push_back(std::sqrt(acc / m));
  }
  for (std::size_t i = 0; i < w2.size(); ++i)
    worst_gap = std::max(worst_gap, std::abs(w2[i] - oracle[i]) / oracle[i]);
  bool decreasing = true;
  for (std::size_t i = 1; i < w2.size(); ++i) decreasing = decreasing && w2[i] < w2[i - 1];
  std::string vals;
  for (double w : w2) vals += (vals.empty() ? "" : ", ") + fmt("%.5f", w);
  const bool ok = decreasing && slope <= -0.2 && worst_gap <= 0.02;
  return {ok, "W2 at n = 10, 100, 1e3, 1e4: " + vals + " strictly decreasing; slope " +
                  fmt("%.3f", slope) + " <= -0.2; oracle relative gap " + fmt("%.1e", worst_gap) +
                  " <= 2e-2"};
}

Outcome criterion6() {
  StepBiasParams p{Potential::quadratic(1.0), ConvexDomain::box(vec({-1.0}), vec({1.0}))};
  p.n = 100;
  p.h_list = {4e-4, 2e-4, 1e-4};
  p.steps = 1'000'000;
  const auto r = step_size_bias(p);
  const auto bias = r.derived["bias_above_floor"].get<std::vector<double>>();
  const bool ok = r.derived["bias_non_increasing_as_h_shrinks"].get<bool>();
  std::string vals;
  for (double b : bias) vals += (vals.empty() ? "" : ", ") + fmt("%.2e", b);
  const auto& slope = r.derived["loglog_slope"];
  const std::string slope_text =
      slope.is_null() ? "unresolved (Monte Carlo floor dominates)" : fmt("%.3f", slope.get<double>());
  return {ok, "bias above replica floor at h = 4e-4, 2e-4, 1e-4: " + vals +
                  " non-increasing; informative slope " + slope_text + " (target [0.5, 1.5])"};
}

Outcome criterion7() {
  Fig2Params p;  // alpha = 1, h = 1e-4, 1e5 steps, n = 1, 10, 100, 500, seeds 1..5
  const auto r = fig2_reproduction(p);
  const bool mono = r.derived["strictly_increasing_every_seed"].get<bool>();
  const double top = r.derived["median_accuracy_at_largest_n"].get<double>();
  const auto med = r.derived["median_accuracy"].get<std::vector<double>>();
  const auto stat = r.derived["stationary_in_domain_mass"].get<std::vector<double>>();
  std::string vals;
  const double reported[] = {0.719, 0.858, 0.953, 0.985};
  for (std::size_t i = 0; i < med.size(); ++i)
    vals += (i ? ", " : "") + fmt("%.3f", med[i]) + "/" + fmt("%.3f", stat[i]) + "/" +
            fmt("%.3f", reported[i]);
  return {mono && top >= 0.95,
          std::string("per-seed strictly increasing: ") + (mono ? "yes" : "no") +
              "; median accuracy at n=500 " + fmt("%.4f", top) +
              " >= 0.95; measured/stationary/reported by n: " + vals};
}

Outcome criterion8() {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> nd;
  double worst_perm = 0.0, worst_1d = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 1 + trial % 6;
    Eigen::MatrixXd a(2, n), b(2, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (int i = 0; i < 2; ++i) {
        a(i, j) = nd(rng);
        b(i, j) = nd(rng);
      }
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double best = INFINITY;
    do {
      double c = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) c += (a.col(i) - b.col(perm[std::size_t(i)])).squaredNorm();
      best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    worst_perm = std::max(worst_perm, std::abs(w2_exact_assignment(EmpiricalMeasure(a), EmpiricalMeasure(b)) -
                                               std::sqrt(best / double(n))));
  }
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 1 + trial % 50;
    Eigen::MatrixXd a(1, n), b(1, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      a(0, j) = nd(rng);
      b(0, j) = nd(rng);
    }
    worst_1d = std::max(worst_1d, std::abs(w2_exact_assignment(EmpiricalMeasure(a), EmpiricalMeasure(b)) -
                                           w2_exact_1d(EmpiricalMeasure(a), EmpiricalMeasure(b))));
  }
  return {worst_perm <= 1e-10 && worst_1d <= 1e-10,
          "200 2-D trials N <= 6 vs permutations " + fmt("%.1e", worst_perm) +
              " <= 1e-10; 200 1-D trials vs sorted " + fmt("%.1e", worst_1d) + " <= 1e-10"};
}

Outcome criterion9() {
  const fs::path root = fs::temp_directory_path() / ("pcula_accept9_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  auto read_dir = [](const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) {
      std::ifstream f(e.path(), std::ios::binary);
      files[e.path().filename().string()] = std::string(std::istreambuf_iterator<char>(f), {});
    }
    return files;
  };
  // smallest cell of the ellipse accuracy grid: n = 1, one seed, 1e5 steps
  {
    std::ofstream(root / "cell.ini") << "command = fig2\n[potential]\ntype = quadratic\nalpha = 1\n"
                                        "[sampler]\nh = 1e-4\nsteps = 100000\nseed = 1\n"
                                        "[experiment]\nn_list = 1\n";
  }
  std::ostringstream out, err;
  CliOptions first{root / "cell.ini", root / "first"};
  first.threads = 1;
  first.quiet = true;
  const int rc1 = run_cli(first, out, err);
  if (rc1 != 0) return {false, "first run exited " + std::to_string(rc1) + ": " + err.str()};
  const auto a = read_dir(root / "first");
  const auto echo = nlohmann::json::parse(a.at("report.json"))["config"].get<std::string>();
  { std::ofstream(root / "echo.ini") << echo; }
  CliOptions second{root / "echo.ini", root / "second"};
  second.threads = 4;
  second.quiet = true;
  const int rc2 = run_cli(second, out, err);
  const auto b = rc2 == 0 ? read_dir(root / "second") : decltype(a){};
  fs::remove_all(root);
  std::size_t bytes = 0;
  for (const auto& [k, v] : a) bytes += v.size();
  return {rc2 == 0 && a == b, std::to_string(a.size()) + " files (" + std::to_string(bytes) +
                                  " bytes) identical after re-run from echoed config, threads 1 vs 4"};
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "projection property suite", 5, criterion1},
      {2, "gradient consistency", 5, criterion2},
      {3, "exact coupling contraction", 30, criterion3},
      {4, "Gibbs stationarity", 120, criterion4},
      {5, "penalty convergence (quadrature)", 60, criterion5},
      {6, "step-size bias", 300, criterion6},
      {7, "ellipse accuracy reproduction", 60, criterion7},
      {8, "W2 oracle equivalence", 10, criterion8},
      {9, "determinism", 10, criterion9},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end())
      continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s  criterion %d  %s: %s; runtime %.1f s < %.0f s\n", pass ? "PASS" : "FAIL", c.id,
                c.title, o.detail.c_str(), secs, c.budget_seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
