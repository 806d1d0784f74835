#pragma once

#include <cstddef>
#include <cstdint>

#include "unconfused/matrix.hpp"
#include "unconfused/problem.hpp"
#include "unconfused/rng.hpp"

namespace unconfused {

/// Unit-sphere classification problem: a random linear reference W* with
/// unit-norm columns, points drawn uniformly on the sphere and kept only when
/// their margin under W* exceeds `margin_theta`.
struct SynthConfig {
  std::size_t q_classes = 10;
  std::size_t dim = 2;
  std::size_t n_train = 1000;
  std::size_t n_test = 10000;
  double margin_theta = 0.025;
  std::uint64_t seed = 1;

  /// Throws InvalidValue when Q < 2, d < 2 or theta outside [0, 1).
  void validate() const;
};

/// Uniform draw on the unit sphere of R^dim.
DenseVector sample_unit_sphere(std::size_t dim, RngStream& rng);

LinearModel generate_concept(const SynthConfig& cfg, RngStream& rng);

/// Rejection-samples exactly `count` points with margin > theta, labelled by
/// the reference. Throws GenerationStalled if a window of 10^6 draws accepts
/// fewer than 100 points.
LabeledDataset generate_dataset(const SynthConfig& cfg,
                                const LinearModel& reference, std::size_t count,
                                RngStream& rng);

/// Draws each noisy label from column t(x) of C by inverse CDF. Features and
/// true labels are kept as-is.
LabeledDataset corrupt(const LabeledDataset& ds, const ConfusionMatrix& c,
                       RngStream& rng);

/// Draw a label from column `true_class` of a column-stochastic matrix.
ClassIndex draw_from_column(const DenseMatrix& c, ClassIndex true_class,
                            double u);

struct SweepMatrices {
  ConfusionMatrix m;  // reference stochastic matrix, M = I + 10 N
  DenseMatrix n;      // direction, columns sum to 0
};

inline constexpr std::size_t kSweepAttempts = 1000;
inline constexpr double kSweepConditionCap = 1e6;

/// Random M with diagonal in [0.55, 0.95] and off-diagonal mass split in
/// proportion to uniform variates; N = (M - I) / 10. Resamples until
/// I + 20 N is nonnegative with condition estimate <= 1e6.
SweepMatrices generate_sweep_matrices(std::size_t q, RngStream& rng);

/// I + i N, validated. Level 0 is the identity and level 10 is M.
ConfusionMatrix sweep_level_matrix(const DenseMatrix& n, int level);
DenseMatrix sweep_level_raw(const DenseMatrix& n, int level);

}  // namespace unconfused
