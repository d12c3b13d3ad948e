#pragma once

#include "pcula/domain.hpp"
#include "pcula/potential.hpp"
#include "pcula/rng.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pcula {

/// Parameters of one PCULA chain
///   X_{k+1} = X_k - h grad f_n(X_k) + sigma sqrt(h) xi_k.
struct ChainConfig {
  PenalizedPotential potential;
  double sigma = 1.0;
  double h = 1e-4;
  std::uint64_t steps = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  // Defaults to the projection of the origin onto the domain.
  std::optional<Point> initial;
  // Defaults to steps / 10.
  std::optional<std::uint64_t> burn_in;
  std::uint64_t thin = 1;

  /// Every violated precondition, empty when the config is usable.
  std::vector<std::string> validate() const;
  /// Throws ConfigError listing all problems.
  void check() const;

  Point initial_point() const;
  std::uint64_t effective_burn_in() const;

  /// 1 / (m + L_n).
  double max_stable_step() const;
  /// Set when h exceeds max_stable_step().
  std::optional<std::string> stability_warning() const;
};

struct ChainState {
  Point position;
  std::uint64_t step_index = 0;
  NormalStream rng;

  friend bool operator==(const ChainState& a, const ChainState& b) {
    return a.step_index == b.step_index && a.rng == b.rng &&
           a.position.size() == b.position.size() && a.position == b.position;
  }
};

/// Post burn-in, thinned samples stored column-wise (d x count).
struct Trajectory {
  Eigen::MatrixXd samples;
  std::uint64_t first_step = 0;
  std::uint64_t thin = 1;
  ChainState final_state;

  Eigen::Index size() const noexcept { return samples.cols(); }
  Eigen::Index dimension() const noexcept { return samples.rows(); }
  Point sample(Eigen::Index j) const { return samples.col(j); }
  std::uint64_t step_index(Eigen::Index j) const {
    return first_step + static_cast<std::uint64_t>(j) * thin;
  }
};

struct CoupledRun {
  Trajectory a;
  Trajectory b;
  // distances[k] = |X_k^A - X_k^B| for k = 0..steps.
  std::vector<double> distances;
};

ChainState initial_state(const ChainConfig& cfg);

/// One PCULA update drawing xi from the state's stream.
ChainState pcula_step(const ChainState& state, const ChainConfig& cfg);

/// One PCULA update with caller-supplied noise (no draw is consumed).
ChainState pcula_step(const ChainState& state, const ChainConfig& cfg,
                      const Point& xi);

Trajectory run_chain(const ChainConfig& cfg);

/// Synchronous coupling: both chains consume the same xi_k at every step.
CoupledRun run_coupled(const ChainConfig& a, const ChainConfig& b);

/// X_{k+1} = Pi(X_k - h grad g(X_k) + sigma sqrt(h) xi_k) using the base
/// potential and domain of cfg.potential; the penalty strength is ignored.
Trajectory projected_euler_chain(const ChainConfig& cfg);

}  // namespace pcula
