#include "unconfused/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "unconfused/error.hpp"

namespace unconfused {

void SynthConfig::validate() const {
  if (q_classes < 2) throw InvalidValue("need at least 2 classes");
  if (dim < 2) throw InvalidValue("need dimension at least 2");
  if (!(margin_theta >= 0.0 && margin_theta < 1.0))
    throw InvalidValue("margin must lie in [0, 1)");
}

DenseVector sample_unit_sphere(std::size_t dim, RngStream& rng) {
  std::vector<double> v(dim);
  if (dim == 2) {
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    v[0] = std::cos(angle);
    v[1] = std::sin(angle);
    return DenseVector(std::move(v));
  }
  double norm = 0.0;
  while (norm < 1e-12) {
    for (double& x : v) x = rng.normal();
    norm = std::sqrt(dot(v, v));
  }
  for (double& x : v) x /= norm;
  return DenseVector(std::move(v));
}

LinearModel generate_concept(const SynthConfig& cfg, RngStream& rng) {
  cfg.validate();
  DenseMatrix w(cfg.dim, cfg.q_classes);
  for (std::size_t q = 0; q < cfg.q_classes; ++q) {
    const auto col = sample_unit_sphere(cfg.dim, rng);
    for (std::size_t j = 0; j < cfg.dim; ++j) w(j, q) = col[j];
  }
  return LinearModel(std::move(w));
}

LabeledDataset generate_dataset(const SynthConfig& cfg,
                                const LinearModel& reference, std::size_t count,
                                RngStream& rng) {
  cfg.validate();
  if (reference.dim() != cfg.dim || reference.q_classes() != cfg.q_classes)
    throw DimensionMismatch("reference does not match the configuration");

  constexpr std::size_t kWindow = 1'000'000;
  constexpr std::size_t kMinAcceptedPerWindow = 100;  // rate 1e-4

  LabeledDataset ds(cfg.q_classes, cfg.dim);
  std::vector<double> scores(cfg.q_classes);
  std::size_t window_draws = 0;
  std::size_t window_accepted = 0;
  while (ds.size() < count) {
    auto x = sample_unit_sphere(cfg.dim, rng);
    reference.scores(x.span(), scores);
    const ClassIndex label = argmax_lowest(scores);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < scores.size(); ++p)
      if (p != label) margin = std::min(margin, scores[label] - scores[p]);
    if (margin > cfg.margin_theta) {
      ds.push_back({std::move(x), label, std::nullopt});
      ++window_accepted;
    }
    if (++window_draws == kWindow) {
      if (window_accepted < kMinAcceptedPerWindow) {
        throw GenerationStalled(
            "margin " + std::to_string(cfg.margin_theta) + " accepted " +
            std::to_string(window_accepted) + " of " +
            std::to_string(kWindow) + " draws");
      }
      window_draws = 0;
      window_accepted = 0;
    }
  }
  return ds;
}

ClassIndex draw_from_column(const DenseMatrix& c, ClassIndex true_class,
                            double u) {
  double cumulative = 0.0;
  ClassIndex last_positive = true_class;
  for (std::size_t p = 0; p < c.rows(); ++p) {
    const double prob = c(p, true_class);
    if (prob <= 0.0) continue;
    cumulative += prob;
    last_positive = p;
    if (u < cumulative) return p;
  }
  // Column sums can round just below 1.
  return last_positive;
}

LabeledDataset corrupt(const LabeledDataset& ds, const ConfusionMatrix& c,
                       RngStream& rng) {
  if (c.q_classes() != ds.q_classes())
    throw DimensionMismatch("confusion matrix size does not match dataset");
  if (!ds.all_have_true_labels())
    throw MissingLabels("corrupt requires true labels on every example");
  LabeledDataset out = ds;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out.set_noisy_label(i,
                        draw_from_column(c.matrix(), *ds[i].true_label,
                                         rng.uniform()));
  }
  return out;
}

DenseMatrix sweep_level_raw(const DenseMatrix& n, int level) {
  const std::size_t q = n.rows();
  DenseMatrix c(q, q);
  for (std::size_t r = 0; r < q; ++r)
    for (std::size_t k = 0; k < q; ++k)
      c(r, k) = (r == k ? 1.0 : 0.0) + static_cast<double>(level) * n(r, k);
  return c;
}

ConfusionMatrix sweep_level_matrix(const DenseMatrix& n, int level) {
  if (level < 0 || level > 20)
    throw InvalidValue("sweep level must lie in [0, 20]");
  auto raw = sweep_level_raw(n, level);
  const auto diag = validate_confusion(raw);
  if (!diag.ok) {
    std::string what = "sweep level " + std::to_string(level) + " invalid";
    for (const auto& m : diag.messages) what += "; " + m;
    throw InvalidConfusion(what);
  }
  return ConfusionMatrix(std::move(raw));
}

SweepMatrices generate_sweep_matrices(std::size_t q, RngStream& rng) {
  if (q < 2) throw InvalidValue("sweep matrices need q >= 2");
  for (std::size_t attempt = 0; attempt < kSweepAttempts; ++attempt) {
    DenseMatrix m(q, q);
    for (std::size_t col = 0; col < q; ++col) {
      const double diag = rng.uniform(0.55, 0.95);
      std::vector<double> weights(q, 0.0);
      double total = 0.0;
      for (std::size_t r = 0; r < q; ++r) {
        if (r == col) continue;
        weights[r] = rng.uniform();
        total += weights[r];
      }
      for (std::size_t r = 0; r < q; ++r) {
        m(r, col) = r == col ? diag
                             : (total > 0.0 ? (1.0 - diag) * weights[r] / total
                                            : (1.0 - diag) / (q - 1));
      }
    }
    DenseMatrix n(q, q);
    for (std::size_t r = 0; r < q; ++r)
      for (std::size_t c = 0; c < q; ++c)
        n(r, c) = (m(r, c) - (r == c ? 1.0 : 0.0)) / 10.0;

    const auto far_end = sweep_level_raw(n, 20);
    bool nonnegative = true;
    for (double v : far_end.entries()) nonnegative = nonnegative && v >= 0.0;
    if (!nonnegative || condition_estimate(far_end) > kSweepConditionCap)
      continue;

    // Rebuild M from N so that I + 10 N reproduces it bit for bit.
    auto m_exact = sweep_level_raw(n, 10);
    if (!validate_confusion(m_exact).ok) continue;
    return {ConfusionMatrix(std::move(m_exact)), std::move(n)};
  }
  throw GenerationStalled("no acceptable sweep matrix after " +
                          std::to_string(kSweepAttempts) + " attempts");
}

}  // namespace unconfused
