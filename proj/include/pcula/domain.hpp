#pragma once

#include <Eigen/Core>

#include <string>
#include <variant>
#include <vector>

namespace pcula {

using Point = Eigen::VectorXd;

struct ProjectionResult {
  Point point;
  double squared_distance = 0.0;
  bool converged = true;
  int iterations = 0;
  // Non-empty when the projection did not meet its tolerance.
  std::string warning;
};

class ConvexDomain;

namespace shape {

struct Ball {
  Point center;
  double radius;
};

struct Box {
  Point lower;
  Point upper;
};

// { x : <normal, x> <= offset }
struct Halfspace {
  Point normal;
  double offset;
};

// { x : sum_i ((x_i - center_i) / semi_axes_i)^2 <= 1 }
struct Ellipsoid {
  Point semi_axes;
  Point center;
};

struct Intersection {
  std::vector<ConvexDomain> parts;
};

}  // namespace shape

/// Closed convex subset of R^d with an exact (or numerically converged)
/// metric projection. Immutable once constructed.
class ConvexDomain {
 public:
  using Shape = std::variant<shape::Ball, shape::Box, shape::Halfspace,
                             shape::Ellipsoid, shape::Intersection>;

  static constexpr double kEllipsoidResidualTol = 1e-12;
  static constexpr double kDykstraMoveTol = 1e-10;
  static constexpr int kDykstraMaxSweeps = 10000;

  static ConvexDomain ball(Point center, double radius);
  static ConvexDomain box(Point lower, Point upper);
  static ConvexDomain halfspace(Point normal, double offset);
  static ConvexDomain ellipsoid(Point semi_axes, Point center);
  static ConvexDomain ellipsoid(Point semi_axes);
  static ConvexDomain intersection(std::vector<ConvexDomain> parts);

  Eigen::Index dimension() const noexcept { return dim_; }
  const Shape& shape() const noexcept { return shape_; }
  std::string kind() const;

  /// True iff dist(x, D) <= tol. With tol == 0 the primitive inequalities
  /// are tested exactly.
  bool contains(const Point& x, double tol = 0.0) const;

  ProjectionResult project(const Point& x) const;
  double squared_distance(const Point& x) const;

  /// Gradient of psi(x) = dist^2(x, D) / 2, i.e. x - project(x).
  Point penalty_gradient(const Point& x) const;

  /// Slack within which projected points are guaranteed to test as members.
  double membership_tolerance() const;

  friend bool operator==(const ConvexDomain& a, const ConvexDomain& b);

 private:
  ConvexDomain(Shape s, Eigen::Index dim);
  void check_dim(const Point& x, const char* where) const;

  Shape shape_;
  Eigen::Index dim_;
};

}  // namespace pcula
