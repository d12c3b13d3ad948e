#pragma once

#include "pcula/domain.hpp"
#include "pcula/errors.hpp"
#include "pcula/potential.hpp"
#include "pcula/sampler.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace pcula {

/// Finite point cloud in R^d (points are columns) with optional weights.
class EmpiricalMeasure {
 public:
  explicit EmpiricalMeasure(Eigen::MatrixXd points);
  EmpiricalMeasure(Eigen::MatrixXd points, Eigen::VectorXd weights);

  static EmpiricalMeasure from_values(std::span<const double> values);
  static EmpiricalMeasure from_trajectory(const Trajectory& t);

  Eigen::Index dimension() const noexcept { return points_.rows(); }
  Eigen::Index size() const noexcept { return points_.cols(); }
  const Eigen::MatrixXd& points() const noexcept { return points_; }
  const std::optional<Eigen::VectorXd>& weights() const noexcept {
    return weights_;
  }
  bool uniform() const noexcept { return !weights_.has_value(); }

  /// count points at evenly spaced ranks 0, stride, 2*stride, ...
  EmpiricalMeasure subsample(Eigen::Index count) const;

 private:
  Eigen::MatrixXd points_;
  std::optional<Eigen::VectorXd> weights_;
};

/// W2 in one dimension through the sorted (quantile) coupling. Unequal sizes
/// are compared at max(|a|, |b|) rank midpoints with linear interpolation.
double w2_exact_1d(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

/// W2 between equal-size uniform clouds via an exact assignment solve.
double w2_exact_assignment(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

constexpr Eigen::Index kMaxAssignmentSize = 4096;

struct GridAxis {
  double lower;
  double upper;
  std::size_t nodes;

  double step() const noexcept { return (upper - lower) / double(nodes - 1); }
  double node(std::size_t i) const noexcept {
    return i + 1 == nodes ? upper : lower + double(i) * step();
  }
};

class GridBoundsError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Nonnegative density sampled on a regular 1-D or 2-D grid (x fastest),
/// normalized so its trapezoidal integral is 1.
struct GridDensity {
  std::vector<GridAxis> axes;
  std::vector<double> values;

  int dimension() const noexcept { return static_cast<int>(axes.size()); }
  std::size_t node_count() const noexcept { return values.size(); }
  Point node_point(std::size_t flat) const;
  double trapezoid_weight(std::size_t flat) const;
  double integral() const;

  /// Inverse CDF (1-D only), exact for the piecewise-linear interpolant.
  double quantile(double p) const;

  /// Upper bound on the probability mass that falls outside the grid box,
  /// computed at construction (0 when not estimated).
  double tail_mass_bound = 0.0;
};

constexpr double kGridTailMassTol = 1e-8;

/// Normalized exp(-2 f_n / sigma^2) on the grid. Throws GridBoundsError when
/// the mass outside the grid cannot be certified below 1e-8.
GridDensity gibbs_density_grid(const PenalizedPotential& p, double sigma,
                               std::vector<GridAxis> axes);

/// Normalized exp(-2 g / sigma^2) restricted to D: the truncated Gibbs law.
GridDensity truncated_gibbs_density_grid(const Potential& g,
                                         const ConvexDomain& domain,
                                         double sigma,
                                         std::vector<GridAxis> axes);

double w2_sample_vs_grid_1d(const EmpiricalMeasure& samples,
                            const GridDensity& density);

/// W2 between two 1-D grid densities by midpoint quadrature in the quantile
/// variable.
double w2_grid_1d(const GridDensity& a, const GridDensity& b,
                  std::size_t quantile_points = 200000);

/// Fraction of samples with contains(D, x, 0).
double accuracy_in_domain(const Trajectory& t, const ConvexDomain& domain);
double accuracy_in_domain(const Eigen::MatrixXd& samples,
                          const ConvexDomain& domain);

/// Probability mass the grid density places outside D.
double mass_outside(const GridDensity& density, const ConvexDomain& domain);

/// Columns x (, y), value.
void write_grid_csv(std::ostream& os, const GridDensity& density);

}  // namespace pcula
