#include "pcula/domain.hpp"

#include "pcula/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pcula {

namespace {

bool all_finite(const Point& v) { return v.allFinite(); }

ProjectionResult make_result(const Point& x, Point p, bool converged = true,
                             int iterations = 0) {
  ProjectionResult r;
  r.squared_distance = (x - p).squaredNorm();
  r.point = std::move(p);
  r.converged = converged;
  r.iterations = iterations;
  return r;
}

// Rounding can leave a boundary point a few ulps outside; shrink toward an
// inner reference until the exact membership test accepts it.
template <class Inside>
Point shrink_until_inside(Point p, const Point& toward, Inside inside) {
  double f = std::numeric_limits<double>::epsilon();
  for (int i = 0; i < 60 && !inside(p); ++i, f *= 2.0) p = toward + (p - toward) * (1.0 - f);
  return p;
}

ProjectionResult project_ball(const shape::Ball& b, const Point& x) {
  const Point y = x - b.center;
  const double r = y.norm();
  if (r <= b.radius) return make_result(x, x);
  Point p = shrink_until_inside(b.center + y * (b.radius / r), b.center, [&](const Point& q) {
    return (q - b.center).squaredNorm() <= b.radius * b.radius;
  });
  return make_result(x, std::move(p));
}

ProjectionResult project_box(const shape::Box& b, const Point& x) {
  return make_result(x, x.cwiseMax(b.lower).cwiseMin(b.upper));
}

ProjectionResult project_halfspace(const shape::Halfspace& h, const Point& x) {
  const double violation = h.normal.dot(x) - h.offset;
  if (violation <= 0.0) return make_result(x, x);
  Point p = x - violation * h.normal;
  double step = std::numeric_limits<double>::epsilon() *
                std::max({1.0, std::abs(h.offset), p.lpNorm<Eigen::Infinity>()});
  for (int i = 0; i < 60 && h.normal.dot(p) > h.offset; ++i, step *= 2.0) p -= step * h.normal;
  return make_result(x, std::move(p));
}

double ellipsoid_level(const shape::Ellipsoid& e, const Point& x) {
  return ((x - e.center).array() / e.semi_axes.array()).square().sum();
}

// The nearest boundary point has coordinates y_i s_i^2 / (s_i^2 + t) where
// t >= 0 is the root of F(t) = sum_i (s_i y_i / (s_i^2 + t))^2 - 1.
// F is convex and decreasing on [0, inf), F(0) > 0 outside the ellipsoid and
// F(max_i s_i * |y|) <= 0, so Newton from the left is bracketed.
ProjectionResult project_ellipsoid(const shape::Ellipsoid& e, const Point& x) {
  if (ellipsoid_level(e, x) <= 1.0) return make_result(x, x);

  const Eigen::ArrayXd y = (x - e.center).array();
  const Eigen::ArrayXd s2 = e.semi_axes.array().square();
  const Eigen::ArrayXd sy = e.semi_axes.array() * y;

  double lo = 0.0;
  double hi = e.semi_axes.maxCoeff() * y.matrix().norm();
  double t = 0.0;
  bool converged = false;
  int it = 0;
  for (; it < 200; ++it) {
    const Eigen::ArrayXd denom = s2 + t;
    const Eigen::ArrayXd q = sy / denom;
    const double f = q.square().sum() - 1.0;
    if (std::abs(f) <= ConvexDomain::kEllipsoidResidualTol) {
      converged = true;
      break;
    }
    if (f > 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      converged = true;
      break;
    }
    const double df = -2.0 * (q.square() / denom).sum();
    double next = t - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  Point p = shrink_until_inside(e.center + (y * s2 / (s2 + t)).matrix(), e.center,
                                [&](const Point& q) { return ellipsoid_level(e, q) <= 1.0; });
  auto r = make_result(x, std::move(p), converged, it);
  if (!converged) r.warning = "ellipsoid projection: multiplier search stalled";
  return r;
}

ProjectionResult project_intersection(const shape::Intersection& in,
                                      const Point& x) {
  bool inside = true;
  for (const auto& part : in.parts) {
    if (!part.contains(x)) {
      inside = false;
      break;
    }
  }
  if (inside) return make_result(x, x);

  // Dykstra's algorithm; plain alternation would only find some point of D.
  const auto k = in.parts.size();
  std::vector<Point> increments(k, Point::Zero(x.size()));
  Point y = x;
  bool inner_ok = true;
  for (int sweep = 1; sweep <= ConvexDomain::kDykstraMaxSweeps; ++sweep) {
    const Point previous = y;
    for (std::size_t i = 0; i < k; ++i) {
      const Point shifted = y + increments[i];
      auto sub = in.parts[i].project(shifted);
      inner_ok = inner_ok && sub.converged;
      increments[i] = shifted - sub.point;
      y = std::move(sub.point);
    }
    if ((y - previous).norm() <= ConvexDomain::kDykstraMoveTol) {
      auto r = make_result(x, std::move(y), inner_ok, sweep);
      if (!inner_ok) r.warning = "intersection: a component projection did not converge";
      return r;
    }
  }
  auto r = make_result(x, std::move(y), false, ConvexDomain::kDykstraMaxSweeps);
  r.warning = "intersection: Dykstra iteration did not converge within " +
              std::to_string(ConvexDomain::kDykstraMaxSweeps) + " sweeps";
  return r;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool same(const Point& a, const Point& b) {
  return a.size() == b.size() && a == b;
}

}  // namespace

ConvexDomain::ConvexDomain(Shape s, Eigen::Index dim)
    : shape_(std::move(s)), dim_(dim) {}

ConvexDomain ConvexDomain::ball(Point center, double radius) {
  if (center.size() == 0) throw InvalidArgument("ball: empty center");
  if (!all_finite(center)) throw InvalidArgument("ball: non-finite center");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw InvalidArgument("ball: radius must be positive and finite");
  const auto d = center.size();
  return ConvexDomain(shape::Ball{std::move(center), radius}, d);
}

ConvexDomain ConvexDomain::box(Point lower, Point upper) {
  if (lower.size() == 0) throw InvalidArgument("box: empty bounds");
  if (lower.size() != upper.size())
    throw DimensionMismatch("box", lower.size(), upper.size());
  if (!all_finite(lower) || !all_finite(upper))
    throw InvalidArgument("box: bounds must be finite");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i]))
      throw InvalidArgument("box: lower < upper required in coordinate " +
                            std::to_string(i));
  }
  const auto d = lower.size();
  return ConvexDomain(shape::Box{std::move(lower), std::move(upper)}, d);
}

ConvexDomain ConvexDomain::halfspace(Point normal, double offset) {
  if (normal.size() == 0) throw InvalidArgument("halfspace: empty normal");
  if (!all_finite(normal) || !std::isfinite(offset))
    throw InvalidArgument("halfspace: non-finite parameters");
  if (std::abs(normal.norm() - 1.0) > 1e-12)
    throw InvalidArgument("halfspace: normal must have unit length");
  const auto d = normal.size();
  return ConvexDomain(shape::Halfspace{std::move(normal), offset}, d);
}

ConvexDomain ConvexDomain::ellipsoid(Point semi_axes, Point center) {
  if (semi_axes.size() == 0) throw InvalidArgument("ellipsoid: empty axes");
  if (semi_axes.size() != center.size())
    throw DimensionMismatch("ellipsoid", semi_axes.size(), center.size());
  if (!all_finite(semi_axes) || !all_finite(center))
    throw InvalidArgument("ellipsoid: non-finite parameters");
  if ((semi_axes.array() <= 0.0).any())
    throw InvalidArgument("ellipsoid: semi-axes must be positive");
  const auto d = semi_axes.size();
  return ConvexDomain(shape::Ellipsoid{std::move(semi_axes), std::move(center)},
                      d);
}

ConvexDomain ConvexDomain::ellipsoid(Point semi_axes) {
  Point center = Point::Zero(semi_axes.size());
  return ellipsoid(std::move(semi_axes), std::move(center));
}

ConvexDomain ConvexDomain::intersection(std::vector<ConvexDomain> parts) {
  if (parts.empty()) throw InvalidArgument("intersection: no components");
  const auto d = parts.front().dimension();
  for (const auto& p : parts) {
    if (p.dimension() != d)
      throw DimensionMismatch("intersection", d, p.dimension());
  }
  ConvexDomain dom(shape::Intersection{std::move(parts)}, d);
  const auto probe = dom.project(Point::Zero(d));
  const auto& comps = std::get<shape::Intersection>(dom.shape_).parts;
  bool member = probe.converged && probe.point.allFinite();
  for (const auto& c : comps) {
    member = member && c.contains(probe.point, 1e-8);
  }
  if (!member)
    throw InvalidArgument(
        "intersection: components appear to have empty intersection");
  return dom;
}

std::string ConvexDomain::kind() const {
  return std::visit(overloaded{
                        [](const shape::Ball&) { return std::string("ball"); },
                        [](const shape::Box&) { return std::string("box"); },
                        [](const shape::Halfspace&) {
                          return std::string("halfspace");
                        },
                        [](const shape::Ellipsoid&) {
                          return std::string("ellipsoid");
                        },
                        [](const shape::Intersection&) {
                          return std::string("intersection");
                        },
                    },
                    shape_);
}

void ConvexDomain::check_dim(const Point& x, const char* where) const {
  if (x.size() != dim_) throw DimensionMismatch(where, dim_, x.size());
}

bool ConvexDomain::contains(const Point& x, double tol) const {
  check_dim(x, "contains");
  if (tol < 0.0) throw InvalidArgument("contains: tol must be nonnegative");
  if (tol > 0.0) return squared_distance(x) <= tol * tol;
  return std::visit(
      overloaded{
          [&](const shape::Ball& b) {
            return (x - b.center).squaredNorm() <= b.radius * b.radius;
          },
          [&](const shape::Box& b) {
            return (x.array() >= b.lower.array()).all() &&
                   (x.array() <= b.upper.array()).all();
          },
          [&](const shape::Halfspace& h) { return h.normal.dot(x) <= h.offset; },
          [&](const shape::Ellipsoid& e) { return ellipsoid_level(e, x) <= 1.0; },
          [&](const shape::Intersection& in) {
            return std::all_of(in.parts.begin(), in.parts.end(),
                               [&](const ConvexDomain& p) {
                                 return p.contains(x);
                               });
          },
      },
      shape_);
}

ProjectionResult ConvexDomain::project(const Point& x) const {
  check_dim(x, "project");
  return std::visit(
      overloaded{
          [&](const shape::Ball& b) { return project_ball(b, x); },
          [&](const shape::Box& b) { return project_box(b, x); },
          [&](const shape::Halfspace& h) { return project_halfspace(h, x); },
          [&](const shape::Ellipsoid& e) { return project_ellipsoid(e, x); },
          [&](const shape::Intersection& in) {
            return project_intersection(in, x);
          },
      },
      shape_);
}

double ConvexDomain::squared_distance(const Point& x) const {
  return project(x).squared_distance;
}

Point ConvexDomain::penalty_gradient(const Point& x) const {
  auto r = project(x);
  return x - r.point;
}

double ConvexDomain::membership_tolerance() const {
  if (std::holds_alternative<shape::Intersection>(shape_)) return 1e-8;
  return 1e-12;
}

bool operator==(const ConvexDomain& a, const ConvexDomain& b) {
  if (a.dim_ != b.dim_ || a.shape_.index() != b.shape_.index()) return false;
  return std::visit(
      overloaded{
          [&](const shape::Ball& x) {
            const auto& y = std::get<shape::Ball>(b.shape_);
            return same(x.center, y.center) && x.radius == y.radius;
          },
          [&](const shape::Box& x) {
            const auto& y = std::get<shape::Box>(b.shape_);
            return same(x.lower, y.lower) && same(x.upper, y.upper);
          },
          [&](const shape::Halfspace& x) {
            const auto& y = std::get<shape::Halfspace>(b.shape_);
            return same(x.normal, y.normal) && x.offset == y.offset;
          },
          [&](const shape::Ellipsoid& x) {
            const auto& y = std::get<shape::Ellipsoid>(b.shape_);
            return same(x.semi_axes, y.semi_axes) && same(x.center, y.center);
          },
          [&](const shape::Intersection& x) {
            return x.parts == std::get<shape::Intersection>(b.shape_).parts;
          },
      },
      a.shape_);
}

}  // namespace pcula
