#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "unconfused/error.hpp"
#include "unconfused/synthgen.hpp"

using namespace unconfused;

TEST_CASE("concept columns are unit norm and reproducible") {
  SynthConfig cfg;
  RngStream a(9, 1), b(9, 1);
  const auto w1 = generate_concept(cfg, a);
  const auto w2 = generate_concept(cfg, b);
  CHECK(w1 == w2);
  for (std::size_t q = 0; q < cfg.q_classes; ++q)
    CHECK(std::abs(w1.column(q).norm() - 1.0) <= 1e-12);

  SynthConfig high = cfg;
  high.dim = 7;
  RngStream c(9, 1);
  const auto w3 = generate_concept(high, c);
  for (std::size_t q = 0; q < high.q_classes; ++q)
    CHECK(std::abs(w3.column(q).norm() - 1.0) <= 1e-12);
}

TEST_CASE("sphere samples are uniform in angle") {
  RngStream r(4, 4);
  int upper = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto v = sample_unit_sphere(2, r);
    if (std::atan2(v[1], v[0]) >= 0.0) ++upper;
  }
  CHECK(std::abs(upper / double(n) - 0.5) <= 0.02);
}

TEST_CASE("generated points respect the margin") {
  SynthConfig cfg;
  RngStream r(1, 1);
  const auto w = generate_concept(cfg, r);
  const auto ds = generate_dataset(cfg, w, 1000, r);
  REQUIRE(ds.size() == 1000);
  for (const auto& ex : ds.examples()) {
    CHECK(std::abs(ex.features.norm() - 1.0) <= 1e-12);
    CHECK(margin_of(w, ex.features, *ex.true_label) > cfg.margin_theta);
    CHECK_FALSE(ex.noisy_label.has_value());
  }
}

TEST_CASE("absent classes are the ones the margin band swallows") {
  // With Q = 10 random directions in the plane, a class whose neighbours sit
  // close to it keeps almost no arc with margin > theta and can vanish from a
  // 1000-point sample. Anything that does survive must show up.
  SynthConfig cfg;
  constexpr int kGrid = 200000;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RngStream r(seed, 1);
    const auto w = generate_concept(cfg, r);
    const auto counts = generate_dataset(cfg, w, 1000, r).true_label_counts();
    std::vector<double> mass(10, 0.0);
    for (int i = 0; i < kGrid; ++i) {
      const double t = 2.0 * std::numbers::pi * (i + 0.5) / kGrid;
      const DenseVector x{std::cos(t), std::sin(t)};
      std::vector<double> s(10);
      for (std::size_t q = 0; q < 10; ++q)
        s[q] = w.weights()(0, q) * x[0] + w.weights()(1, q) * x[1];
      const auto top = static_cast<std::size_t>(
          std::max_element(s.begin(), s.end()) - s.begin());
      double gap = 1e300;
      for (std::size_t q = 0; q < 10; ++q)
        if (q != top) gap = std::min(gap, s[top] - s[q]);
      if (gap > cfg.margin_theta) mass[top] += 1.0 / kGrid;
    }
    double total = 0.0;
    for (double m : mass) total += m;
    for (std::size_t q = 0; q < 10; ++q) {
      if (counts[q] == 0) CHECK(mass[q] / total < 0.01);
      if (mass[q] / total > 0.01) CHECK(counts[q] > 0);
    }
  }
}

TEST_CASE("sweep matrices") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    RngStream r(seed, streams::kSweep);
    const auto s = generate_sweep_matrices(10, r);
    for (std::size_t col = 0; col < 10; ++col) {
      double sm = 0.0, sn = 0.0;
      for (std::size_t row = 0; row < 10; ++row) {
        sm += s.m(row, col);
        sn += s.n(row, col);
      }
      CHECK(std::abs(sm - 1.0) <= 1e-12);
      CHECK(std::abs(sn) <= 1e-12);
      CHECK(s.m(col, col) >= 0.55 - 1e-12);
      CHECK(s.m(col, col) <= 0.95 + 1e-12);
    }
    CHECK(sweep_level_raw(s.n, 10) == s.m.matrix());
    const auto far_end = sweep_level_raw(s.n, 20);
    for (double v : far_end.entries()) CHECK(v >= 0.0);

    CHECK(sweep_level_matrix(s.n, 0).matrix() == DenseMatrix::identity(10));
    CHECK(sweep_level_matrix(s.n, 10).matrix() == s.m.matrix());
    for (int i = 0; i <= 20; ++i)
      CHECK(validate_confusion(sweep_level_matrix(s.n, i)).ok);
  }
  RngStream r(1, 1);
  const auto s = generate_sweep_matrices(3, r);
  CHECK_THROWS_AS(sweep_level_matrix(s.n, 21), InvalidValue);
}
