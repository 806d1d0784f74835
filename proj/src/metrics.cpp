#include "unconfused/metrics.hpp"

#include <cmath>

#include "unconfused/error.hpp"

namespace unconfused {
namespace {

void require_same_q(const EvalReport& a, const EvalReport& b) {
  if (a.confusion_hat.rows() != b.confusion_hat.rows())
    throw DimensionMismatch("reports cover different class counts");
}

}  // namespace

EvalReport evaluate(const LinearModel& model, const LabeledDataset& test) {
  if (test.empty()) throw EmptyTestSet("cannot evaluate on an empty test set");
  if (!test.all_have_true_labels())
    throw MissingLabels("evaluation requires true labels");
  if (model.dim() != test.dim() || model.q_classes() != test.q_classes())
    throw DimensionMismatch("model and test set shapes differ");

  const std::size_t q = test.q_classes();
  EvalReport r;
  r.n = test.size();
  r.class_counts.assign(q, 0);
  DenseMatrix counts(q, q);
  std::vector<double> scores(q);
  std::size_t wrong = 0;
  for (const auto& ex : test.examples()) {
    model.scores(ex.features.span(), scores);
    const ClassIndex pred = argmax_lowest(scores);
    const ClassIndex truth = *ex.true_label;
    counts(pred, truth) += 1.0;
    ++r.class_counts[truth];
    if (pred != truth) ++wrong;
  }

  r.confusion_hat = DenseMatrix(q, q);
  r.per_class_error = DenseVector(q, 0.0);
  r.class_present.assign(q, false);
  for (std::size_t c = 0; c < q; ++c) {
    if (r.class_counts[c] == 0) continue;
    r.class_present[c] = true;
    const double total = static_cast<double>(r.class_counts[c]);
    for (std::size_t p = 0; p < q; ++p)
      r.confusion_hat(p, c) = counts(p, c) / total;
    r.per_class_error[c] = 1.0 - r.confusion_hat(c, c);
  }
  r.confusion_rate = frobenius_norm(r.confusion_hat);
  DenseMatrix off = r.confusion_hat;
  for (std::size_t c = 0; c < q; ++c) off(c, c) = 0.0;
  r.offdiag_confusion_rate = frobenius_norm(off);
  r.error_rate = static_cast<double>(wrong) / static_cast<double>(r.n);
  return r;
}

ConfusionEstimate estimate_confusion_from_pairs(const LabeledDataset& ds) {
  const std::size_t q = ds.q_classes();
  ConfusionEstimate est;
  est.raw = DenseMatrix(q, q);
  std::vector<std::size_t> support(q, 0);
  for (const auto& ex : ds.examples()) {
    if (!ex.true_label || !ex.noisy_label)
      throw MissingLabels("confusion estimation needs both labels");
    est.raw(*ex.noisy_label, *ex.true_label) += 1.0;
    ++support[*ex.true_label];
  }
  for (std::size_t c = 0; c < q; ++c) {
    if (support[c] == 0) {
      est.missing_classes.push_back(c);
      continue;
    }
    for (std::size_t p = 0; p < q; ++p)
      est.raw(p, c) /= static_cast<double>(support[c]);
  }
  if (!est.missing_classes.empty()) {
    est.diagnostic = "no true-label support for class";
    for (ClassIndex c : est.missing_classes)
      est.diagnostic += " " + std::to_string(c + 1);
    est.singular = true;
    return est;
  }
  const auto diag = validate_confusion(est.raw);
  if (!diag.ok) {
    est.singular = diag.singular;
    est.diagnostic = "estimated confusion matrix rejected:";
    for (const auto& m : diag.messages) est.diagnostic += " " + m + ";";
    return est;
  }
  est.matrix.emplace(est.raw);
  return est;
}

double dist_error(const EvalReport& a, const EvalReport& b) {
  require_same_q(a, b);
  return std::abs(a.error_rate - b.error_rate);
}

double dist_confusion(const EvalReport& a, const EvalReport& b) {
  require_same_q(a, b);
  return std::abs(a.confusion_rate - b.confusion_rate);
}

double dist_classwise(const EvalReport& a, const EvalReport& b) {
  require_same_q(a, b);
  double s = 0.0;
  for (std::size_t c = 0; c < a.per_class_error.dim(); ++c) {
    const double d = a.per_class_error[c] - b.per_class_error[c];
    s += d * d;
  }
  return std::sqrt(s);
}

double dist_couplewise(const EvalReport& a, const EvalReport& b) {
  require_same_q(a, b);
  return frobenius_norm(a.confusion_hat - b.confusion_hat);
}

}  // namespace unconfused
