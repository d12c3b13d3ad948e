#pragma once

#include "pcula/domain.hpp"
#include "pcula/metrics.hpp"
#include "pcula/parallel.hpp"
#include "pcula/potential.hpp"
#include "pcula/report.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace pcula {

/// Synchronously coupled PCULA chains started from two points.
struct ContractionParams {
  Potential base;
  ConvexDomain domain;
  double n = 0.0;
  double sigma = 1.0;
  double h = 1e-4;
  std::uint64_t steps = 10000;
  Point initial_a;
  Point initial_b;
  std::vector<std::uint64_t> seeds{1};
  // Required ratio of the fitted exponent to -m is at least 1 - epsilon.
  double epsilon = 0.05;
  // Rows kept in the distance table per seed (every step is still checked).
  std::uint64_t record_every = 0;
  bool strict = false;
};

ExperimentReport contraction_experiment(const ContractionParams& p,
                                        const ParallelOptions& par = {});

/// Monte Carlo route: PCULA at each n against the projected-Euler chain
/// driven by the same noise, compared in W2.
struct PenaltySweepParams {
  Potential base;
  ConvexDomain domain;
  double sigma = 1.0;
  double h = 1e-4;
  std::uint64_t steps = 100000;
  std::optional<std::uint64_t> burn_in;
  std::optional<Point> initial;
  std::vector<double> n_list;
  std::vector<std::uint64_t> seeds{1};
  // Points per cloud for the 2-D assignment solve.
  Eigen::Index subsample = 1500;
  bool strict = false;
};

ExperimentReport penalty_sweep(const PenaltySweepParams& p,
                               const ParallelOptions& par = {});

/// Quadrature route in 1-D: W2 between the pi^n grid density and the
/// truncated Gibbs density, no Monte Carlo noise.
struct QuadratureSweepParams {
  Potential base;
  ConvexDomain domain;
  double sigma = 1.0;
  std::vector<double> n_list;
  double dx = 1e-4;
  std::size_t quantile_points = 200000;
  double slope_ceiling = -0.2;
};

ExperimentReport penalty_sweep_quadrature(const QuadratureSweepParams& p,
                                          const ParallelOptions& par = {});

/// Truncated Gaussian on the ellipse with semi-axes (1, 1/2).
struct Fig2Params {
  double alpha = 1.0;
  double sigma = 1.0;
  double h = 1e-4;
  std::uint64_t steps = 100000;
  std::optional<std::uint64_t> burn_in;
  std::vector<double> n_list{1, 10, 100, 500};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::optional<Point> initial;
  double accuracy_floor = 0.95;
  std::size_t histogram_bins = 60;
  // Grid spacing of the quadrature reference for the stationary in-domain
  // mass; 0 disables it.
  double stationary_dx = 0.01;
};

ExperimentReport fig2_reproduction(const Fig2Params& p,
                                   const ParallelOptions& par = {});

/// Long-run PCULA law at several h against the pi^n quadrature density.
struct StepBiasParams {
  Potential base;
  ConvexDomain domain;
  double n = 100.0;
  double sigma = 1.0;
  std::vector<double> h_list;
  std::uint64_t steps = 1000000;
  std::optional<std::uint64_t> burn_in;
  std::optional<Point> initial;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  double dx = 1e-4;
  // Bias counts as resolved when the replica spread is below this fraction
  // of the excess over the Monte Carlo floor.
  double resolve_ratio = 0.25;
};

ExperimentReport step_size_bias(const StepBiasParams& p,
                                const ParallelOptions& par = {});

/// Least-squares slope of y against x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> v);

/// Closed interval [lo, hi] spanned by a bounded 1-D domain.
std::pair<double, double> interval_of(const ConvexDomain& domain);

/// Grid axes wide enough for the tail-mass certificate of pi^n.
std::vector<GridAxis> auto_grid_axes(const PenalizedPotential& p, double sigma,
                                     double dx);

Json to_json(const Potential& p);
Json to_json(const ConvexDomain& d);

}  // namespace pcula
