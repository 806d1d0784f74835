#include <doctest.h>

#include <cmath>
#include <limits>

#include "unconfused/error.hpp"
#include "unconfused/matrix.hpp"

using namespace unconfused;

namespace {

bool near(const DenseMatrix& a, const DenseMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (std::abs(a(r, c) - b(r, c)) > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("vector construction rejects non-finite entries") {
  CHECK_THROWS_AS(DenseVector({1.0, std::nan("")}), InvalidValue);
  CHECK_THROWS_AS(
      DenseVector({std::numeric_limits<double>::infinity()}), InvalidValue);
  DenseVector v{3.0, 4.0};
  CHECK(v.norm() == doctest::Approx(5.0));
  CHECK(dot(v.span(), v.span()) == doctest::Approx(25.0));
}

TEST_CASE("matrix shape checks") {
  CHECK_THROWS_AS(DenseMatrix(2, 2, std::vector<double>{1, 2, 3}),
                  DimensionMismatch);
  CHECK_THROWS_AS(DenseMatrix({{1, 2}, {3}}), DimensionMismatch);
  DenseMatrix a{{1, 2, 3}, {4, 5, 6}};
  CHECK(a.transpose() == DenseMatrix{{1, 4}, {2, 5}, {3, 6}});
  CHECK(a.column(1) == DenseVector{2, 5});
}

TEST_CASE("invert") {
  CHECK(invert(DenseMatrix::identity(3)) == DenseMatrix::identity(3));

  const DenseMatrix c{{0.9, 0.2}, {0.1, 0.8}};
  const DenseMatrix expected{{8.0 / 7, -2.0 / 7}, {-1.0 / 7, 9.0 / 7}};
  CHECK(near(invert(c), expected, 1e-12));

  CHECK_THROWS_AS(invert(DenseMatrix{{1, 1}, {1, 1}}), SingularMatrix);
  CHECK_THROWS_AS(invert(DenseMatrix(2, 3)), DimensionMismatch);

  // Needs a row swap: the leading entry is zero.
  const DenseMatrix p{{0, 1}, {1, 0}};
  CHECK(near(invert(p), p, 0.0));

  const DenseMatrix m{{4, 1, 0.5}, {1, 3, 0.2}, {0.5, 0.2, 2}};
  CHECK(near(matmul(m, invert(m)), DenseMatrix::identity(3), 1e-12));
}

TEST_CASE("matmul and matvec") {
  const DenseMatrix b{{1, 2}, {3, 4}};
  CHECK(matmul(DenseMatrix::identity(2), b) == b);
  CHECK(matmul(DenseMatrix{{1, 0}, {0, 0}}, DenseMatrix{{5, 6}, {7, 8}}) ==
        DenseMatrix{{5, 6}, {0, 0}});
  CHECK_THROWS_AS(matmul(DenseMatrix(2, 3), DenseMatrix(2, 2)),
                  DimensionMismatch);
  CHECK(matvec(b, DenseVector{1, 1}) == DenseVector{3, 7});
  CHECK_THROWS_AS(matvec(b, DenseVector{1, 1, 1}), DimensionMismatch);
}

TEST_CASE("frobenius norm") {
  CHECK(frobenius_norm(DenseMatrix::zero(2, 2)) == 0.0);
  CHECK(frobenius_norm(DenseMatrix::identity(3)) ==
        doctest::Approx(std::sqrt(3.0)));
  CHECK(frobenius_norm(DenseMatrix{{3, 4}, {0, 0}}) == doctest::Approx(5.0));
  CHECK(max_abs(DenseMatrix{{-7, 2}, {3, 1}}) == 7.0);
}

TEST_CASE("condition estimate") {
  CHECK(condition_estimate(DenseMatrix::identity(2)) == doctest::Approx(2.0));
  CHECK(std::isinf(condition_estimate(DenseMatrix{{1, 1}, {1, 1}})));
  CHECK(condition_estimate(DenseMatrix{{1, 0}, {0, 1e-6}}) >= 1e6);
}

TEST_CASE("arithmetic operators") {
  DenseMatrix a{{1, 2}, {3, 4}};
  CHECK(a + a == 2.0 * a);
  CHECK(a - a == DenseMatrix::zero(2, 2));
  CHECK_THROWS_AS(a += DenseMatrix(3, 3), DimensionMismatch);
}
