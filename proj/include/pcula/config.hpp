#pragma once

#include "pcula/domain.hpp"
#include "pcula/potential.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pcula {

/// Domain as written in a config file. Intersections reference named
/// sub-sections: parts = a, b  ->  [domain.a], [domain.b].
struct DomainSpec {
  std::string type;
  std::optional<std::vector<double>> center;
  std::optional<double> radius;
  std::optional<std::vector<double>> lower;
  std::optional<std::vector<double>> upper;
  std::optional<std::vector<double>> normal;
  std::optional<double> offset;
  std::optional<std::vector<double>> semi_axes;
  std::vector<std::pair<std::string, DomainSpec>> parts;

  ConvexDomain build() const;
  bool operator==(const DomainSpec&) const = default;
};

struct PotentialSpec {
  std::string type;
  std::optional<double> alpha;
  // Row-major, dimension^2 entries.
  std::optional<std::vector<double>> precision;

  Potential build() const;
  bool operator==(const PotentialSpec&) const = default;
};

struct RunConfig {
  std::string command;
  std::optional<DomainSpec> domain;
  std::optional<PotentialSpec> potential;

  // [sampler]
  std::optional<double> n;
  std::optional<double> h;
  std::optional<double> sigma;
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> burn_in;
  std::optional<std::uint64_t> thin;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<std::uint64_t>> seeds;
  std::optional<std::vector<double>> initial;

  // [experiment]
  std::optional<std::string> route;
  std::optional<std::vector<double>> n_list;
  std::optional<std::vector<double>> h_list;
  std::optional<std::vector<double>> initial_a;
  std::optional<std::vector<double>> initial_b;
  std::optional<std::uint64_t> subsample;
  std::optional<std::uint64_t> histogram_bins;
  std::optional<std::uint64_t> record_every;
  std::optional<std::uint64_t> quantile_points;
  std::optional<double> accuracy_floor;
  std::optional<double> dx;
  std::optional<double> epsilon;
  std::optional<double> stationary_dx;
  std::optional<double> slope_ceiling;
  std::optional<double> resolve_ratio;

  // [grid]
  std::optional<std::vector<double>> grid_lower;
  std::optional<std::vector<double>> grid_upper;
  std::optional<std::vector<std::uint64_t>> grid_nodes;

  // [output]
  std::optional<std::string> output_directory;
  std::optional<bool> strict;
  std::optional<bool> binary;

  /// Seed list after defaults: seeds, else {seed}, else {1}.
  std::vector<std::uint64_t> seed_list() const;
  bool is_strict() const { return strict.value_or(false); }

  bool operator==(const RunConfig&) const = default;
};

inline constexpr std::string_view kCommands[] = {
    "sample", "contraction", "penalty-sweep", "fig2", "step-bias", "density-grid"};

/// Parses and fully validates a config; throws ConfigError with every problem.
RunConfig parse_config(std::string_view text);

/// Canonical text form; parse_config(to_config_text(c)) == c.
std::string to_config_text(const RunConfig& c);

/// Semantic checks against module preconditions (empty when valid).
std::vector<std::string> validate_config(const RunConfig& c);

}  // namespace pcula
