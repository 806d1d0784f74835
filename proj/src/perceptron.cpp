#include "unconfused/perceptron.hpp"

#include <numeric>
#include <utility>

#include "unconfused/error.hpp"
#include "unconfused/rng.hpp"

namespace unconfused {

void PerceptronConfig::validate() const {
  if (max_epochs < 1) throw InvalidValue("max_epochs must be >= 1");
}

PerceptronResult train_perceptron(const LabeledDataset& ds,
                                  const PerceptronConfig& cfg,
                                  const UpdateObserver& observer) {
  cfg.validate();
  const bool use_true = cfg.label_source == LabelSource::true_labels;
  if (use_true ? !ds.all_have_true_labels() : !ds.all_have_noisy_labels()) {
    throw MissingLabels(std::string("perceptron needs ") +
                        (use_true ? "true" : "noisy") +
                        " labels on every example");
  }

  const std::size_t q = ds.q_classes();
  PerceptronResult result{LinearModel(q, ds.dim())};
  RngStream rng = RngStream(cfg.seed, streams::kShuffle);
  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> scores(q);
  std::vector<double> tau(q, 0.0);
  auto& w = result.model.weights();

  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    if (cfg.shuffle) {
      for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.below(i)]);
    }
    std::size_t mistakes = 0;
    for (std::size_t idx : order) {
      const auto& ex = ds[idx];
      const ClassIndex label = use_true ? *ex.true_label : *ex.noisy_label;
      result.model.scores(ex.features.span(), scores);
      const ClassIndex pred = argmax_lowest(scores);
      if (pred == label) continue;
      ++mistakes;
      ++result.updates;
      for (std::size_t j = 0; j < ds.dim(); ++j) {
        w(j, label) += ex.features[j];
        w(j, pred) -= ex.features[j];
      }
      if (observer) {
        tau[label] = 1.0;
        tau[pred] = -1.0;
        observer(result.model, tau);
        tau[label] = 0.0;
        tau[pred] = 0.0;
      }
    }
    result.epochs = epoch + 1;
    if (mistakes == 0) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace unconfused
