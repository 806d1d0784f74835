#include <doctest.h>

#include <cmath>

#include "unconfused/error.hpp"
#include "unconfused/metrics.hpp"
#include "unconfused/rng.hpp"

using namespace unconfused;

namespace {

const LinearModel kAxis(DenseMatrix{{1, 0, -1}, {0, 1, -1}});

LabeledDataset axis_set(std::size_t classes_present) {
  LabeledDataset ds(3, 2);
  const double s = std::sqrt(0.5);
  const DenseVector pts[] = {{1, 0}, {0, 1}, {-s, -s}};
  for (std::size_t c = 0; c < classes_present; ++c)
    for (int k = 0; k < 2; ++k) ds.push_back({pts[c], c, std::nullopt});
  return ds;
}

EvalReport report_with_errors(std::vector<double> per_class) {
  EvalReport r;
  r.confusion_hat = DenseMatrix(per_class.size(), per_class.size());
  r.per_class_error = DenseVector(std::move(per_class));
  return r;
}

}  // namespace

TEST_CASE("perfect classifier") {
  const auto r = evaluate(kAxis, axis_set(2));
  CHECK(r.error_rate == 0.0);
  CHECK(r.confusion_rate == doctest::Approx(std::sqrt(2.0)));
  CHECK(r.offdiag_confusion_rate == 0.0);
  CHECK(r.confusion_hat == DenseMatrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 0}});
  CHECK(r.class_present == std::vector<bool>{true, true, false});
  CHECK(r.per_class_error == DenseVector{0, 0, 0});
}

TEST_CASE("constant classifier") {
  LabeledDataset ds(2, 2);
  ds.push_back({DenseVector{1, 0}, 0, std::nullopt});
  ds.push_back({DenseVector{0, 1}, 1, std::nullopt});
  const auto r = evaluate(LinearModel(2, 2), ds);
  CHECK(r.confusion_hat == DenseMatrix{{1, 1}, {0, 0}});
  CHECK(r.confusion_rate == doctest::Approx(std::sqrt(2.0)));
  CHECK(r.offdiag_confusion_rate == doctest::Approx(1.0));
  CHECK(r.error_rate == 0.5);
  CHECK(r.per_class_error == DenseVector{0, 1});
}

TEST_CASE("error rate is the prior-weighted per-class error") {
  RngStream rng(1, 1);
  LabeledDataset ds(3, 2);
  for (int i = 0; i < 300; ++i) {
    const double a = 6.283185307179586 * rng.uniform();
    ds.push_back({DenseVector{std::cos(a), std::sin(a)}, rng.below(3), std::nullopt});
  }
  const auto r = evaluate(kAxis, ds);
  double weighted = 0.0;
  for (std::size_t c = 0; c < 3; ++c)
    weighted += r.per_class_error[c] * r.class_counts[c] / double(r.n);
  CHECK(r.error_rate == doctest::Approx(weighted).epsilon(1e-12));
}

TEST_CASE("evaluate input checks") {
  CHECK_THROWS_AS(evaluate(kAxis, LabeledDataset(3, 2)), EmptyTestSet);
  LabeledDataset noisy_only(3, 2);
  noisy_only.push_back({DenseVector{1, 0}, std::nullopt, 0});
  CHECK_THROWS_AS(evaluate(kAxis, noisy_only), MissingLabels);
}

TEST_CASE("estimate_confusion_from_pairs") {
  LabeledDataset clean(2, 2);
  clean.push_back({DenseVector{1, 0}, 0, 0});
  clean.push_back({DenseVector{1, 0}, 1, 1});
  const auto id = estimate_confusion_from_pairs(clean);
  REQUIRE(id.ok());
  CHECK(id.matrix->matrix() == DenseMatrix::identity(2));

  LabeledDataset pairs(2, 2);
  pairs.push_back({DenseVector{1, 0}, 0, 0});
  pairs.push_back({DenseVector{1, 0}, 0, 1});
  pairs.push_back({DenseVector{1, 0}, 1, 1});
  pairs.push_back({DenseVector{1, 0}, 1, 1});
  const auto est = estimate_confusion_from_pairs(pairs);
  REQUIRE(est.ok());
  CHECK(est.matrix->matrix() == DenseMatrix{{0.5, 0}, {0.5, 1}});

  LabeledDataset missing(3, 2);
  missing.push_back({DenseVector{1, 0}, 0, 0});
  missing.push_back({DenseVector{1, 0}, 2, 2});
  const auto deg = estimate_confusion_from_pairs(missing);
  CHECK_FALSE(deg.ok());
  CHECK(deg.missing_classes == std::vector<ClassIndex>{1});
  CHECK(deg.diagnostic.find("2") != std::string::npos);

  LabeledDataset singular(2, 2);
  singular.push_back({DenseVector{1, 0}, 0, 0});
  singular.push_back({DenseVector{1, 0}, 1, 0});
  const auto sing = estimate_confusion_from_pairs(singular);
  CHECK_FALSE(sing.ok());
  CHECK(sing.singular);
}

TEST_CASE("distances") {
  const auto two = evaluate(kAxis, axis_set(2));
  const auto three = evaluate(kAxis, axis_set(3));
  CHECK(dist_error(two, two) == 0.0);
  CHECK(dist_confusion(two, two) == 0.0);
  CHECK(dist_confusion(two, three) ==
        doctest::Approx(std::sqrt(3.0) - std::sqrt(2.0)));
  CHECK(dist_confusion(three, two) == dist_confusion(two, three));

  EvalReport a, b;
  a.error_rate = 0.3;
  b.error_rate = 0.1;
  a.confusion_hat = b.confusion_hat = DenseMatrix(2, 2);
  CHECK(dist_error(a, b) == doctest::Approx(0.2));
  CHECK(dist_error(a, b) == dist_error(b, a));

  CHECK(dist_classwise(report_with_errors({0, 0}), report_with_errors({0.6, 0.8})) ==
        doctest::Approx(1.0));

  EvalReport id, anti;
  id.confusion_hat = DenseMatrix::identity(2);
  anti.confusion_hat = DenseMatrix{{0, 1}, {1, 0}};
  CHECK(dist_couplewise(id, id) == 0.0);
  CHECK(dist_couplewise(id, anti) == doctest::Approx(2.0));

  CHECK_THROWS_AS(dist_error(two, report_with_errors({0, 0})), DimensionMismatch);
}

TEST_CASE("distance properties on random reports") {
  RngStream rng(2, 2);
  auto random_report = [&] {
    EvalReport r;
    r.confusion_hat = DenseMatrix(3, 3);
    for (std::size_t c = 0; c < 3; ++c) {
      double total = 0.0;
      for (std::size_t p = 0; p < 3; ++p) total += r.confusion_hat(p, c) = rng.uniform();
      for (std::size_t p = 0; p < 3; ++p) r.confusion_hat(p, c) /= total;
    }
    r.per_class_error = DenseVector(3);
    for (std::size_t c = 0; c < 3; ++c)
      r.per_class_error[c] = 1.0 - r.confusion_hat(c, c);
    r.confusion_rate = frobenius_norm(r.confusion_hat);
    return r;
  };
  for (int i = 0; i < 50; ++i) {
    const auto a = random_report(), b = random_report(), c = random_report();
    CHECK(dist_classwise(a, c) <= dist_classwise(a, b) + dist_classwise(b, c) + 1e-12);
    CHECK(dist_classwise(a, b) <= dist_couplewise(a, b) + 1e-12);
    CHECK(dist_confusion(a, b) >= 0.0);
  }
}
