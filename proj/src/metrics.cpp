#include "pcula/metrics.hpp"

#include "pcula/assignment.hpp"
#include "pcula/trajectory_io.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace pcula {

EmpiricalMeasure::EmpiricalMeasure(Eigen::MatrixXd points)
    : points_(std::move(points)) {
  if (points_.cols() == 0 || points_.rows() == 0)
    throw InvalidArgument("empirical measure: no points");
}

EmpiricalMeasure::EmpiricalMeasure(Eigen::MatrixXd points, Eigen::VectorXd weights)
    : EmpiricalMeasure(std::move(points)) {
  if (weights.size() != points_.cols())
    throw DimensionMismatch("empirical measure weights", points_.cols(),
                            weights.size());
  if ((weights.array() <= 0.0).any())
    throw InvalidArgument("empirical measure: weights must be positive");
  if (std::abs(weights.sum() - 1.0) > 1e-12)
    throw InvalidArgument("empirical measure: weights must sum to 1");
  weights_ = std::move(weights);
}

EmpiricalMeasure EmpiricalMeasure::from_values(std::span<const double> values) {
  Eigen::MatrixXd m(1, static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) m(0, Eigen::Index(i)) = values[i];
  return EmpiricalMeasure(std::move(m));
}

EmpiricalMeasure EmpiricalMeasure::from_trajectory(const Trajectory& t) {
  return EmpiricalMeasure(t.samples);
}

EmpiricalMeasure EmpiricalMeasure::subsample(Eigen::Index count) const {
  if (count <= 0) throw InvalidArgument("subsample: count must be positive");
  if (count >= size()) return *this;
  if (!uniform()) throw InvalidArgument("subsample: weighted measures unsupported");
  Eigen::MatrixXd out(dimension(), count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const auto src = static_cast<Eigen::Index>(
        (static_cast<double>(i) * static_cast<double>(size())) / double(count));
    out.col(i) = points_.col(src);
  }
  return EmpiricalMeasure(std::move(out));
}

namespace {

std::vector<double> sorted_values(const EmpiricalMeasure& m) {
  std::vector<double> v(m.points().data(), m.points().data() + m.size());
  std::sort(v.begin(), v.end());
  return v;
}

// Empirical quantile linear in rank; reproduces the sorted sample exactly at
// p = (i + 1/2) / N.
double rank_quantile(const std::vector<double>& s, double p) {
  const double n = double(s.size());
  const double r = std::clamp(p * n - 0.5, 0.0, n - 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(r));
  const auto hi = std::min(lo + 1, s.size() - 1);
  const double w = r - double(lo);
  if (w == 0.0) return s[lo];
  return (1.0 - w) * s[lo] + w * s[hi];
}

void require_uniform_1d(const EmpiricalMeasure& m, const char* where) {
  if (m.dimension() != 1) throw DimensionMismatch(where, 1, m.dimension());
  if (!m.uniform()) throw InvalidArgument(std::string(where) + ": uniform weights required");
}

}  // namespace

double w2_exact_1d(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  require_uniform_1d(a, "w2_exact_1d");
  require_uniform_1d(b, "w2_exact_1d");
  const auto sa = sorted_values(a);
  const auto sb = sorted_values(b);
  double acc = 0.0;
  if (sa.size() == sb.size()) {
    for (std::size_t i = 0; i < sa.size(); ++i) acc += (sa[i] - sb[i]) * (sa[i] - sb[i]);
    return std::sqrt(acc / double(sa.size()));
  }
  const std::size_t m = std::max(sa.size(), sb.size());
  for (std::size_t i = 0; i < m; ++i) {
    const double p = (double(i) + 0.5) / double(m);
    const double d = rank_quantile(sa, p) - rank_quantile(sb, p);
    acc += d * d;
  }
  return std::sqrt(acc / double(m));
}

double w2_exact_assignment(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  if (a.dimension() != b.dimension())
    throw DimensionMismatch("w2_exact_assignment", a.dimension(), b.dimension());
  if (!a.uniform() || !b.uniform())
    throw InvalidArgument("w2_exact_assignment: uniform weights required");
  if (a.size() != b.size())
    throw InvalidArgument("w2_exact_assignment: equal sample counts required");
  if (a.size() > kMaxAssignmentSize)
    throw InvalidArgument("w2_exact_assignment: at most 4096 points supported");
  const auto& pa = a.points();
  const auto& pb = b.points();
  const auto n = static_cast<std::size_t>(a.size());
  const auto sol = solve_assignment(n, [&](std::size_t i, std::size_t j) {
    return (pa.col(Eigen::Index(i)) - pb.col(Eigen::Index(j))).squaredNorm();
  });
  return std::sqrt(std::max(0.0, sol.cost) / double(n));
}

Point GridDensity::node_point(std::size_t flat) const {
  Point x(dimension());
  std::size_t rem = flat;
  for (int k = 0; k < dimension(); ++k) {
    const auto& ax = axes[std::size_t(k)];
    x[k] = ax.node(rem % ax.nodes);
    rem /= ax.nodes;
  }
  return x;
}

double GridDensity::trapezoid_weight(std::size_t flat) const {
  double w = 1.0;
  std::size_t rem = flat;
  for (const auto& ax : axes) {
    const std::size_t i = rem % ax.nodes;
    rem /= ax.nodes;
    w *= ax.step() * ((i == 0 || i + 1 == ax.nodes) ? 0.5 : 1.0);
  }
  return w;
}

double GridDensity::integral() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) acc += trapezoid_weight(i) * values[i];
  return acc;
}

namespace {

std::vector<double> node_cdf(const GridDensity& g) {
  const auto& ax = g.axes.front();
  const double dx = ax.step();
  std::vector<double> c(ax.nodes, 0.0);
  for (std::size_t i = 1; i < ax.nodes; ++i)
    c[i] = c[i - 1] + 0.5 * dx * (g.values[i - 1] + g.values[i]);
  return c;
}

double quantile_from_cdf(const GridDensity& g, const std::vector<double>& c,
                         double p) {
  const auto& ax = g.axes.front();
  const double total = c.back();
  const double target = std::clamp(p, 0.0, 1.0) * total;
  auto it = std::upper_bound(c.begin(), c.end(), target);
  if (it == c.begin()) return ax.lower;
  if (it == c.end()) return ax.upper;
  const auto j = static_cast<std::size_t>(it - c.begin()) - 1;
  const double dx = ax.step();
  const double v0 = g.values[j];
  const double v1 = g.values[j + 1];
  const double r = target - c[j];
  // Solve v0 s + (v1 - v0) s^2 / (2 dx) = r for s in [0, dx].
  const double a = (v1 - v0) / (2.0 * dx);
  double s;
  if (std::abs(a) * dx <= 1e-14 * std::max(v0, v1)) {
    s = r / v0;
  } else {
    const double disc = std::max(0.0, v0 * v0 + 4.0 * a * r);
    s = 2.0 * r / (v0 + std::sqrt(disc));
  }
  return ax.node(j) + std::clamp(s, 0.0, dx);
}

void check_axes(const std::vector<GridAxis>& axes) {
  if (axes.empty() || axes.size() > 2)
    throw InvalidArgument("grid density: dimension must be 1 or 2");
  for (const auto& ax : axes) {
    if (ax.nodes < 2) throw InvalidArgument("grid density: need >= 2 nodes per axis");
    if (!(ax.lower < ax.upper)) throw InvalidArgument("grid density: lower < upper required");
  }
}

// Fills values with exp(-2 energy / sigma^2) shifted by the minimum energy,
// with nodes outside `support` (when given) set to zero. Returns the
// minimum energy and its node.
struct Unnormalized {
  double min_energy;
  std::size_t argmin;
};

template <class EnergyFn, class MaskFn>
Unnormalized fill_boltzmann(GridDensity& g, double sigma, EnergyFn energy,
                            MaskFn keep) {
  std::size_t count = 1;
  for (const auto& ax : g.axes) count *= ax.nodes;
  std::vector<double> e(count);
  double emin = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const Point x = g.node_point(i);
    if (!keep(x)) {
      e[i] = std::numeric_limits<double>::infinity();
      continue;
    }
    e[i] = energy(x);
    if (e[i] < emin) {
      emin = e[i];
      arg = i;
    }
  }
  if (!std::isfinite(emin))
    throw GridBoundsError("grid density: no grid node carries mass");
  g.values.resize(count);
  const double beta = 2.0 / (sigma * sigma);
  for (std::size_t i = 0; i < count; ++i)
    g.values[i] = std::isfinite(e[i]) ? std::exp(-beta * (e[i] - emin)) : 0.0;
  return {emin, arg};
}

// Strong convexity gives f(x) >= f0 + (m/2)|x - c|^2 with
// c = x0 - grad f(x0) / m and f0 = f(x0) - |grad f(x0)|^2 / (2m); the mass of
// that Gaussian envelope outside the box bounds the truncated mass.
template <class EnergyFn, class GradFn>
double envelope_tail_bound(const GridDensity& g, double sigma, double m,
                           const Unnormalized& u, double z_grid,
                           EnergyFn energy, GradFn gradient) {
  const Point x0 = g.node_point(u.argmin);
  const Point grad = gradient(x0);
  const Point c = x0 - grad / m;
  const double f0 = energy(x0) - grad.squaredNorm() / (2.0 * m);
  const double beta = 2.0 / (sigma * sigma);
  const double d = double(g.dimension());
  const double log_env = -beta * (f0 - u.min_energy) +
                         0.5 * d * std::log(std::numbers::pi * sigma * sigma / m);
  const boost::math::normal_distribution<double> unit;
  const double sd = sigma / std::sqrt(2.0 * m);
  double tails = 0.0;
  for (int k = 0; k < g.dimension(); ++k) {
    const auto& ax = g.axes[std::size_t(k)];
    tails += boost::math::cdf(unit, (ax.lower - c[k]) / sd);
    tails += boost::math::cdf(boost::math::complement(unit, (ax.upper - c[k]) / sd));
  }
  return std::exp(log_env) * tails / z_grid;
}

double boundary_ratio(const GridDensity& g) {
  double vmax = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    vmax = std::max(vmax, g.values[i]);
    std::size_t rem = i;
    bool edge = false;
    for (const auto& ax : g.axes) {
      const auto j = rem % ax.nodes;
      rem /= ax.nodes;
      edge = edge || j == 0 || j + 1 == ax.nodes;
    }
    if (edge) vb = std::max(vb, g.values[i]);
  }
  return vb / vmax;
}

void normalize(GridDensity& g) {
  const double z = g.integral();
  for (auto& v : g.values) v /= z;
}

}  // namespace

double GridDensity::quantile(double p) const {
  if (dimension() != 1) throw DimensionMismatch("grid quantile", 1, dimension());
  return quantile_from_cdf(*this, node_cdf(*this), p);
}

GridDensity gibbs_density_grid(const PenalizedPotential& p, double sigma,
                               std::vector<GridAxis> axes) {
  check_axes(axes);
  if (!(sigma > 0.0)) throw InvalidArgument("grid density: sigma > 0 required");
  if (std::ssize(axes) != p.dimension())
    throw DimensionMismatch("gibbs_density_grid", p.dimension(), Eigen::Index(axes.size()));
  GridDensity g;
  g.axes = std::move(axes);
  auto energy = [&](const Point& x) { return p.value(x); };
  const auto u = fill_boltzmann(g, sigma, energy, [](const Point&) { return true; });
  const double z = g.integral();
  const double m = p.constants().m;
  if (m > 0.0) {
    g.tail_mass_bound = envelope_tail_bound(
        g, sigma, m, u, z, energy, [&](const Point& x) { return p.gradient(x); });
    if (!(g.tail_mass_bound <= kGridTailMassTol))
      throw GridBoundsError("grid density: bounds too narrow (tail mass bound " +
                            format_double(g.tail_mass_bound) + ")");
  } else if (boundary_ratio(g) > 1e-10) {
    // Without strong convexity only the decay at the grid edge is checked.
    throw GridBoundsError("grid density: bounds too narrow (density at grid edge)");
  }
  normalize(g);
  return g;
}

namespace {

// True when the grid box contains D, judged by the projections of far points
// along each coordinate axis (the support points of a bounded domain).
bool grid_covers(const std::vector<GridAxis>& axes, const ConvexDomain& domain) {
  constexpr double kFar = 1e12;
  const Eigen::Index d = domain.dimension();
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto& ax = axes[std::size_t(i)];
    const double slack = 1e-9 * std::max(1.0, ax.upper - ax.lower);
    for (double sign : {-1.0, 1.0}) {
      Point probe = Point::Zero(d);
      probe(i) = sign * kFar;
      const double reach = domain.project(probe).point(i);
      if (std::abs(reach) > 0.5 * kFar) return false;  // unbounded in this direction
      if (reach < ax.lower - slack || reach > ax.upper + slack) return false;
    }
  }
  return true;
}

}  // namespace

GridDensity truncated_gibbs_density_grid(const Potential& base,
                                         const ConvexDomain& domain,
                                         double sigma,
                                         std::vector<GridAxis> axes) {
  check_axes(axes);
  if (!(sigma > 0.0)) throw InvalidArgument("grid density: sigma > 0 required");
  if (std::ssize(axes) != domain.dimension())
    throw DimensionMismatch("truncated_gibbs_density_grid", domain.dimension(),
                            Eigen::Index(axes.size()));
  GridDensity g;
  g.axes = std::move(axes);
  auto energy = [&](const Point& x) { return base.value(x); };
  const auto u = fill_boltzmann(g, sigma, energy,
                                [&](const Point& x) { return domain.contains(x); });
  const double z = g.integral();
  const double m = base.strong_convexity();
  if (grid_covers(g.axes, domain)) {
    g.tail_mass_bound = 0.0;
  } else if (m > 0.0) {
    g.tail_mass_bound = envelope_tail_bound(
        g, sigma, m, u, z, energy, [&](const Point& x) { return base.gradient(x); });
    if (!(g.tail_mass_bound <= kGridTailMassTol))
      throw GridBoundsError("grid density: bounds too narrow for the truncated law");
  }
  normalize(g);
  return g;
}

double w2_sample_vs_grid_1d(const EmpiricalMeasure& samples, const GridDensity& density) {
  require_uniform_1d(samples, "w2_sample_vs_grid_1d");
  if (density.dimension() != 1)
    throw DimensionMismatch("w2_sample_vs_grid_1d", 1, density.dimension());
  const auto s = sorted_values(samples);
  const auto c = node_cdf(density);
  const double n = double(s.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double q = quantile_from_cdf(density, c, (double(i) + 0.5) / n);
    acc += (s[i] - q) * (s[i] - q);
  }
  return std::sqrt(acc / n);
}

double w2_grid_1d(const GridDensity& a, const GridDensity& b, std::size_t points) {
  if (a.dimension() != 1 || b.dimension() != 1)
    throw InvalidArgument("w2_grid_1d: 1-D densities required");
  if (points == 0) throw InvalidArgument("w2_grid_1d: need quantile points");
  const auto ca = node_cdf(a);
  const auto cb = node_cdf(b);
  double acc = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double p = (double(i) + 0.5) / double(points);
    const double d = quantile_from_cdf(a, ca, p) - quantile_from_cdf(b, cb, p);
    acc += d * d;
  }
  return std::sqrt(acc / double(points));
}

double accuracy_in_domain(const Eigen::MatrixXd& samples, const ConvexDomain& domain) {
  if (samples.cols() == 0) throw InvalidArgument("accuracy_in_domain: no samples");
  Eigen::Index inside = 0;
  for (Eigen::Index j = 0; j < samples.cols(); ++j)
    if (domain.contains(samples.col(j))) ++inside;
  return double(inside) / double(samples.cols());
}

double accuracy_in_domain(const Trajectory& t, const ConvexDomain& domain) {
  return accuracy_in_domain(t.samples, domain);
}

double mass_outside(const GridDensity& density, const ConvexDomain& domain) {
  double acc = 0.0;
  for (std::size_t i = 0; i < density.values.size(); ++i) {
    if (!domain.contains(density.node_point(i)))
      acc += density.trapezoid_weight(i) * density.values[i];
  }
  return acc;
}

void write_grid_csv(std::ostream& os, const GridDensity& density) {
  os << (density.dimension() == 1 ? "x,value\r\n" : "x,y,value\r\n");
  for (std::size_t i = 0; i < density.values.size(); ++i) {
    const Point x = density.node_point(i);
    for (Eigen::Index k = 0; k < x.size(); ++k) os << format_double(x[k]) << ',';
    os << format_double(density.values[i]) << "\r\n";
  }
}

}  // namespace pcula
