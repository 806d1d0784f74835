#pragma once

#include <cstddef>
#include <cstdint>

#include "unconfused/problem.hpp"
#include "unconfused/uma.hpp"

namespace unconfused {

enum class LabelSource { true_labels, noisy_labels };

struct PerceptronConfig {
  std::size_t max_epochs = 50;
  bool shuffle = true;
  std::uint64_t seed = 1;
  LabelSource label_source = LabelSource::noisy_labels;

  void validate() const;
};

struct PerceptronResult {
  LinearModel model;
  std::size_t updates = 0;
  std::size_t epochs = 0;
  bool converged = false;  // finished a mistake-free pass
};

/// Regular multiclass perceptron: on a mistake, w_y += x and w_pred -= x.
/// Throws MissingLabels when the chosen label source is absent.
PerceptronResult train_perceptron(const LabeledDataset& ds,
                                  const PerceptronConfig& cfg,
                                  const UpdateObserver& observer = {});

}  // namespace unconfused
