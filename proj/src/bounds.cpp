#include "unconfused/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "unconfused/error.hpp"

namespace unconfused {
namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 8.0))
    throw InvalidQuery("epsilon must lie in (0, 8)");
}

void check_shape(std::size_t d, std::size_t q) {
  if (d < 1) throw InvalidQuery("dimension must be positive");
  if (q < 1) throw InvalidQuery("class count must be positive");
}

double log_bound(double m, double epsilon, std::size_t d, std::size_t q) {
  const double qd = static_cast<double>(q);
  return std::log(4.0 * qd * qd) +
         static_cast<double>(d + 1) * std::log(8.0 / epsilon) -
         m * epsilon * epsilon / 128.0;
}

}  // namespace

double deviation_bound(const BoundQuery& query) {
  check_epsilon(query.epsilon);
  check_shape(query.d, query.q_classes);
  if (!(query.m >= 0.0) || !std::isfinite(query.m))
    throw InvalidQuery("sample count must be non-negative");
  if (!(query.delta > 0.0 && query.delta <= 1.0))
    throw InvalidQuery("delta must lie in (0, 1]");
  const double lb = log_bound(query.m, query.epsilon, query.d, query.q_classes);
  return lb >= 0.0 ? 1.0 : std::exp(lb);
}

std::size_t min_sample_size(double epsilon, double delta, std::size_t d,
                            std::size_t q_classes) {
  check_epsilon(epsilon);
  check_shape(d, q_classes);
  if (!(delta > 0.0 && delta < 1.0))
    throw InvalidQuery("delta must lie in (0, 1)");

  const double qd = static_cast<double>(q_classes);
  const double eps2 = epsilon * epsilon;
  const double closed = (128.0 / eps2) *
                        (std::log(4.0 * qd * qd / delta) +
                         static_cast<double>(d + 1) * std::log(8.0 / epsilon));
  const auto floor_m = static_cast<std::size_t>(std::ceil(32.0 / eps2));
  auto m = std::max(floor_m, static_cast<std::size_t>(std::ceil(closed)));

  auto bound_at = [&](std::size_t k) {
    return deviation_bound({static_cast<double>(k), epsilon, delta, d,
                            q_classes});
  };
  while (bound_at(m) > delta) ++m;
  while (m > floor_m && bound_at(m - 1) <= delta) --m;
  return m;
}

}  // namespace unconfused
