#include <doctest.h>

#include <cmath>

#include "unconfused/error.hpp"
#include "unconfused/perceptron.hpp"
#include "unconfused/synthgen.hpp"
#include "unconfused/uma.hpp"

using namespace unconfused;

TEST_CASE("separable data within the mistake bound") {
  SynthConfig synth;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    RngStream r(seed, 1);
    const auto w = generate_concept(synth, r);
    const auto ds = generate_dataset(synth, w, 1000, r);
    PerceptronConfig cfg;
    cfg.label_source = LabelSource::true_labels;
    cfg.max_epochs = 1000;
    cfg.seed = seed;
    bool invariant = true;
    const auto res = train_perceptron(
        ds, cfg, [&](const LinearModel& m, std::span<const double>) {
          invariant = invariant && column_sum_invariant_holds(m);
        });
    CHECK(res.converged);
    CHECK(res.updates <= 3200);
    CHECK(invariant);
    for (const auto& ex : ds.examples())
      CHECK(predict(res.model, ex.features) == *ex.true_label);
  }
}

TEST_CASE("single class never updates") {
  LabeledDataset ds(1, 2);
  ds.push_back({DenseVector{1, 0}, 0, 0});
  const auto res = train_perceptron(ds, PerceptronConfig{});
  CHECK(res.updates == 0);
  CHECK(res.converged);
}

TEST_CASE("UMA with identity confusion shares the bound") {
  SynthConfig synth;
  RngStream r(4, 1);
  const auto w = generate_concept(synth, r);
  auto ds = generate_dataset(synth, w, 500, r);
  for (std::size_t i = 0; i < ds.size(); ++i) ds.set_noisy_label(i, ds[i].true_label);
  const double bound = 2.0 / (synth.margin_theta * synth.margin_theta);

  PerceptronConfig pc;
  pc.max_epochs = 1000;
  const auto perc = train_perceptron(ds, pc);
  UmaConfig uc;
  uc.max_iters = UmaConfig::default_max_iters(synth.margin_theta);
  RngStream rng(4, 2);
  const auto uma = train_uma(ds, ConfusionMatrix::identity(10), uc, rng);
  CHECK(perc.converged);
  CHECK(static_cast<double>(perc.updates) <= bound);
  CHECK(uma.reason == StopReason::converged);
  CHECK(static_cast<double>(uma.updates()) <= bound);
}

TEST_CASE("deterministic per seed, label source checked") {
  SynthConfig synth;
  RngStream r(5, 1);
  const auto w = generate_concept(synth, r);
  const auto ds = generate_dataset(synth, w, 200, r);
  PerceptronConfig cfg;
  cfg.label_source = LabelSource::true_labels;
  CHECK(train_perceptron(ds, cfg).model == train_perceptron(ds, cfg).model);

  cfg.label_source = LabelSource::noisy_labels;
  CHECK_THROWS_AS(train_perceptron(ds, cfg), MissingLabels);
  cfg.max_epochs = 0;
  CHECK_THROWS_AS(train_perceptron(ds, cfg), InvalidValue);
}
