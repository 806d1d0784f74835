#include "unconfused/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "unconfused/error.hpp"

namespace unconfused {

LabeledDataset::LabeledDataset(std::size_t q_classes, std::size_t dim)
    : q_(q_classes), dim_(dim) {
  if (q_ < 1) throw InvalidValue("dataset needs at least one class");
  if (dim_ < 1) throw InvalidValue("dataset needs a positive dimension");
}

LabeledDataset::LabeledDataset(std::size_t q_classes, std::size_t dim,
                               std::vector<LabeledExample> examples,
                               bool renormalize)
    : LabeledDataset(q_classes, dim) {
  for (auto& ex : examples) check(ex, renormalize);
  examples_ = std::move(examples);
}

void LabeledDataset::check(LabeledExample& ex, bool renormalize) const {
  if (ex.features.dim() != dim_) {
    throw DimensionMismatch("example has dimension " +
                            std::to_string(ex.features.dim()) + ", expected " +
                            std::to_string(dim_));
  }
  if (!ex.true_label && !ex.noisy_label)
    throw MissingLabels("example carries neither a true nor a noisy label");
  for (const auto& label : {ex.true_label, ex.noisy_label}) {
    if (label && *label >= q_) {
      throw InvalidValue("label " + std::to_string(*label + 1) +
                         " outside 1.." + std::to_string(q_));
    }
  }
  const double norm = ex.features.norm();
  if (std::abs(norm - 1.0) > kUnitNormTolerance) {
    if (!renormalize || norm == 0.0) {
      throw InvalidValue("feature vector norm " + std::to_string(norm) +
                         " is not 1");
    }
    for (double& v : ex.features.span()) v /= norm;
  }
}

void LabeledDataset::push_back(LabeledExample ex, bool renormalize) {
  check(ex, renormalize);
  examples_.push_back(std::move(ex));
}

void LabeledDataset::set_noisy_label(std::size_t i,
                                     std::optional<ClassIndex> label) {
  if (label && *label >= q_) throw InvalidValue("noisy label out of range");
  examples_.at(i).noisy_label = label;
}

bool LabeledDataset::all_have_true_labels() const {
  return std::all_of(examples_.begin(), examples_.end(),
                     [](const auto& e) { return e.true_label.has_value(); });
}

bool LabeledDataset::all_have_noisy_labels() const {
  return std::all_of(examples_.begin(), examples_.end(),
                     [](const auto& e) { return e.noisy_label.has_value(); });
}

std::vector<std::size_t> LabeledDataset::true_label_counts() const {
  std::vector<std::size_t> counts(q_, 0);
  for (const auto& e : examples_)
    if (e.true_label) ++counts[*e.true_label];
  return counts;
}

std::vector<std::size_t> LabeledDataset::noisy_label_counts() const {
  std::vector<std::size_t> counts(q_, 0);
  for (const auto& e : examples_)
    if (e.noisy_label) ++counts[*e.noisy_label];
  return counts;
}

ConfusionDiagnostics validate_confusion(const DenseMatrix& mat) {
  ConfusionDiagnostics d;
  if (!mat.is_square()) {
    d.ok = false;
    d.messages.push_back("confusion matrix is not square");
    return d;
  }
  const std::size_t q = mat.rows();
  for (std::size_t c = 0; c < q; ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < q; ++r) {
      const double v = mat(r, c);
      sum += v;
      if (v < 0.0 || v > 1.0) {
        d.has_out_of_range_entry = true;
        std::ostringstream os;
        os << "entry (" << r + 1 << "," << c + 1 << ") = " << v
           << " outside [0,1]";
        d.messages.push_back(os.str());
      }
    }
    const double dev = std::abs(sum - 1.0);
    d.max_column_deviation = std::max(d.max_column_deviation, dev);
    if (dev > kColumnSumTolerance) {
      d.bad_columns.push_back(c);
      std::ostringstream os;
      os << "column " << c + 1 << " sums to " << sum;
      d.messages.push_back(os.str());
    }
  }
  d.condition = condition_estimate(mat);
  d.singular = !std::isfinite(d.condition);
  if (d.singular) d.messages.push_back("confusion matrix is singular");
  d.ok = !d.has_out_of_range_entry && d.bad_columns.empty() && !d.singular;
  return d;
}

ConfusionMatrix::ConfusionMatrix(DenseMatrix mat) : mat_(std::move(mat)) {
  const auto diag = validate_confusion(mat_);
  if (!diag.ok) {
    std::string what = "invalid confusion matrix";
    for (const auto& m : diag.messages) what += "; " + m;
    if (diag.singular && !diag.has_out_of_range_entry && diag.bad_columns.empty())
      throw SingularMatrix(what);
    throw InvalidConfusion(what);
  }
  inverse_ = invert(mat_);
}

void LinearModel::scores(std::span<const double> x,
                         std::span<double> out) const {
  const std::size_t q = q_classes();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double xj = x[j];
    const auto row = weights_.row(j);
    for (std::size_t c = 0; c < q; ++c) out[c] += xj * row[c];
  }
}

std::vector<double> LinearModel::scores(const DenseVector& x) const {
  if (x.dim() != dim())
    throw DimensionMismatch("input dimension " + std::to_string(x.dim()) +
                            " vs model dimension " + std::to_string(dim()));
  std::vector<double> out(q_classes());
  scores(x.span(), out);
  return out;
}

double LinearModel::column_sum_drift() const {
  double worst = 0.0;
  for (std::size_t j = 0; j < dim(); ++j) {
    double s = 0.0;
    for (double v : weights_.row(j)) s += v;
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

double LinearModel::max_column_norm() const {
  double best = 0.0;
  for (std::size_t c = 0; c < q_classes(); ++c)
    best = std::max(best, weights_.column(c).norm());
  return best;
}

bool column_sum_invariant_holds(const LinearModel& model) {
  return model.column_sum_drift() <= 1e-9 * (1.0 + model.max_column_norm());
}

ClassIndex argmax_lowest(std::span<const double> scores) {
  ClassIndex best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c)
    if (scores[c] > scores[best]) best = c;
  return best;
}

ClassIndex predict(const LinearModel& model, const DenseVector& x) {
  return argmax_lowest(model.scores(x));
}

double margin_of(const LinearModel& model, const DenseVector& x,
                 ClassIndex label) {
  const auto s = model.scores(x);
  if (label >= s.size()) throw InvalidValue("label out of range");
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < s.size(); ++p)
    if (p != label) m = std::min(m, s[label] - s[p]);
  return m;
}

}  // namespace unconfused
