#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "unconfused/matrix.hpp"
#include "unconfused/problem.hpp"

namespace unconfused {

struct EvalReport {
  /// (p, q) = fraction of true-q test points predicted p.
  DenseMatrix confusion_hat;
  /// Frobenius norm of confusion_hat, diagonal included: a perfect classifier
  /// scores sqrt(#present classes).
  double confusion_rate = 0.0;
  /// Frobenius norm of confusion_hat with the diagonal zeroed: 0 for a
  /// perfect classifier, grows with misclassification.
  double offdiag_confusion_rate = 0.0;
  double error_rate = 0.0;
  /// c_q = 1 - confusion_hat(q, q); 0 for classes absent from the test set.
  DenseVector per_class_error;
  std::vector<bool> class_present;
  std::vector<std::size_t> class_counts;
  std::size_t n = 0;
};

/// Throws EmptyTestSet / MissingLabels.
EvalReport evaluate(const LinearModel& model, const LabeledDataset& test);

/// Confusion matrix estimated from examples carrying both labels:
/// (p, q) = #{true = q, noisy = p} / #{true = q}.
struct ConfusionEstimate {
  DenseMatrix raw;
  std::optional<ConfusionMatrix> matrix;  // empty when degraded
  std::vector<ClassIndex> missing_classes;
  bool singular = false;
  std::string diagnostic;

  bool ok() const { return matrix.has_value(); }
};

ConfusionEstimate estimate_confusion_from_pairs(const LabeledDataset& ds);

double dist_error(const EvalReport& a, const EvalReport& b);
/// Difference of the Frobenius confusion rates.
double dist_confusion(const EvalReport& a, const EvalReport& b);
double dist_classwise(const EvalReport& a, const EvalReport& b);
double dist_couplewise(const EvalReport& a, const EvalReport& b);

}  // namespace unconfused
