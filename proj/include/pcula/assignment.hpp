#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace pcula {

struct Assignment {
  // row i is matched to column match[i].
  std::vector<std::size_t> match;
  double cost = 0.0;
};

/// Exact minimum-cost perfect matching on an n x n cost matrix given as a
/// callback, by the shortest augmenting path (Hungarian) method with dual
/// potentials. O(n^3) time, O(n) scratch.
Assignment solve_assignment(std::size_t n,
                            const std::function<double(std::size_t, std::size_t)>& cost);

}  // namespace pcula
