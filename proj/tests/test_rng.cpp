#include <doctest.h>

#include <cmath>
#include <vector>

#include "unconfused/rng.hpp"

using namespace unconfused;

TEST_CASE("same key, same sequence") {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different keys diverge") {
  RngStream a(42, 7), b(42, 8), c(43, 7);
  const auto x = a.next_u64();
  CHECK(x != b.next_u64());
  CHECK(x != c.next_u64());
}

TEST_CASE("split is a pure function of parent key and child id") {
  const RngStream parent(5, 1);
  RngStream c1 = parent.split(3), c2 = parent.split(3), c3 = parent.split(4);
  CHECK(c1.stream_id() == c2.stream_id());
  CHECK(c1.stream_id() != c3.stream_id());
  CHECK(c1.next_u64() == c2.next_u64());
  // Splitting does not consume the parent.
  RngStream p1(5, 1), p2(5, 1);
  (void)p1.split(9);
  CHECK(p1.next_u64() == p2.next_u64());
}

TEST_CASE("uniform moments") {
  RngStream r(1, 1);
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(sum2 / n - (sum / n) * (sum / n) ==
        doctest::Approx(1.0 / 12).epsilon(0.02));
}

TEST_CASE("below is unbiased and in range") {
  RngStream r(2, 2);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto k = r.below(7);
    REQUIRE(k < 7);
    ++counts[k];
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
  CHECK(r.below(1) == 0);
  CHECK(r.below(0) == 0);
}

TEST_CASE("normal moments") {
  RngStream r(3, 3);
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.02));
}
