#pragma once

// Double-sample uniform deviation bound for the update-vector estimates.
//
//   P(sup |err_D - err_T| >= eps) <= 4 Q^2 (8/eps)^(d+1) exp(-m eps^2 / 128)
//
// The constants are the ones produced by the symmetrization / permutation
// argument and are loose by design; treat the output as an order of
// magnitude, not a tight guarantee. Symmetrization requires m eps^2 >= 32.

#include <cstddef>

namespace unconfused {

struct BoundQuery {
  double m = 0.0;
  double epsilon = 1.0;
  double delta = 0.05;
  std::size_t d = 2;
  std::size_t q_classes = 2;
};

/// min(1, 4 Q^2 (8/eps)^(d+1) exp(-m eps^2 / 128)). Throws InvalidQuery.
double deviation_bound(const BoundQuery& query);

/// Smallest integer m >= 32 / eps^2 with deviation_bound(m) <= delta.
std::size_t min_sample_size(double epsilon, double delta, std::size_t d,
                            std::size_t q_classes);

}  // namespace unconfused
