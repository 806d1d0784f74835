#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "unconfused/matrix.hpp"

namespace unconfused {

/// Class indices are 0-based in memory. Every file format and user-facing
/// message uses 1-based indices.
using ClassIndex = std::size_t;

inline constexpr double kUnitNormTolerance = 1e-9;

struct LabeledExample {
  DenseVector features;
  std::optional<ClassIndex> true_label;
  std::optional<ClassIndex> noisy_label;
};

/// Ordered set of unit-norm examples sharing one dimension and label space.
class LabeledDataset {
 public:
  LabeledDataset(std::size_t q_classes, std::size_t dim);
  /// Validates every example. With `renormalize`, feature vectors are scaled
  /// to unit norm instead of being rejected.
  LabeledDataset(std::size_t q_classes, std::size_t dim,
                 std::vector<LabeledExample> examples,
                 bool renormalize = false);

  std::size_t q_classes() const { return q_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }

  const LabeledExample& operator[](std::size_t i) const {
    return examples_[i];
  }
  const std::vector<LabeledExample>& examples() const { return examples_; }

  void push_back(LabeledExample ex, bool renormalize = false);
  void set_noisy_label(std::size_t i, std::optional<ClassIndex> label);

  bool all_have_true_labels() const;
  bool all_have_noisy_labels() const;

  /// Per-class counts of the chosen label.
  std::vector<std::size_t> true_label_counts() const;
  std::vector<std::size_t> noisy_label_counts() const;

 private:
  void check(LabeledExample& ex, bool renormalize) const;

  std::size_t q_;
  std::size_t dim_;
  std::vector<LabeledExample> examples_;
};

/// Column-stochastic noise model: mat(p, q) = P(observed = p | true = q).
/// Columns are true classes. Construction validates (entries in [0,1],
/// columns sum to 1, invertible) and throws InvalidConfusion otherwise.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(DenseMatrix mat);
  static ConfusionMatrix identity(std::size_t q) {
    return ConfusionMatrix(DenseMatrix::identity(q));
  }

  std::size_t q_classes() const { return mat_.rows(); }
  const DenseMatrix& matrix() const { return mat_; }
  const DenseMatrix& inverse() const { return inverse_; }
  double operator()(std::size_t p, std::size_t q) const { return mat_(p, q); }

 private:
  DenseMatrix mat_;
  DenseMatrix inverse_;
};

struct ConfusionDiagnostics {
  bool ok = true;
  double max_column_deviation = 0.0;
  /// 0-based columns whose sum deviates from 1 by more than the tolerance.
  std::vector<std::size_t> bad_columns;
  bool has_out_of_range_entry = false;
  double condition = 0.0;
  bool singular = false;
  std::vector<std::string> messages;
};

inline constexpr double kColumnSumTolerance = 1e-9;

ConfusionDiagnostics validate_confusion(const DenseMatrix& mat);
inline ConfusionDiagnostics validate_confusion(const ConfusionMatrix& c) {
  return validate_confusion(c.matrix());
}

/// Homogeneous linear multiclass model, weights d x Q (column q is w_q).
class LinearModel {
 public:
  LinearModel(std::size_t q_classes, std::size_t dim)
      : weights_(dim, q_classes) {}
  explicit LinearModel(DenseMatrix weights) : weights_(std::move(weights)) {}

  std::size_t q_classes() const { return weights_.cols(); }
  std::size_t dim() const { return weights_.rows(); }
  const DenseMatrix& weights() const { return weights_; }
  DenseMatrix& weights() { return weights_; }

  DenseVector column(std::size_t q) const { return weights_.column(q); }

  /// Scores <w_q, x> for every class, written into `out` (size Q).
  void scores(std::span<const double> x, std::span<double> out) const;
  std::vector<double> scores(const DenseVector& x) const;

  /// ||sum_q w_q||_inf.
  double column_sum_drift() const;
  double max_column_norm() const;

  bool operator==(const LinearModel&) const = default;

 private:
  DenseMatrix weights_;
};

/// argmax_q <w_q, x>; ties go to the lowest class index.
ClassIndex predict(const LinearModel& model, const DenseVector& x);
ClassIndex argmax_lowest(std::span<const double> scores);

/// min over p != label of <w_label - w_p, x>.
double margin_of(const LinearModel& model, const DenseVector& x,
                 ClassIndex label);

/// True when the column-sum invariant ||sum_q w_q||_inf <= 1e-9 (1 + max ||w_q||)
/// holds.
bool column_sum_invariant_holds(const LinearModel& model);

}  // namespace unconfused
