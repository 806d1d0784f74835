#include "unconfused/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "unconfused/error.hpp"

namespace unconfused {
namespace {

void require_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidValue("non-finite entry");
  }
}

std::string shape(const DenseMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

DenseVector::DenseVector(std::size_t dim, double fill) : data_(dim, fill) {
  require_finite(data_);
}

DenseVector::DenseVector(std::vector<double> entries)
    : data_(std::move(entries)) {
  require_finite(data_);
}

DenseVector::DenseVector(std::initializer_list<double> entries)
    : data_(entries) {
  require_finite(data_);
}

double DenseVector::norm() const { return std::sqrt(dot(data_, data_)); }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  require_finite(data_);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw DimensionMismatch("matrix entries do not match " +
                            std::to_string(rows) + "x" + std::to_string(cols));
  }
  require_finite(data_);
}

DenseMatrix::DenseMatrix(
    std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(data_);
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseVector DenseMatrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return DenseVector(std::move(out));
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw DimensionMismatch("add: " + shape(*this) + " vs " + shape(other));
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw DimensionMismatch("sub: " + shape(*this) + " vs " + shape(other));
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

DenseMatrix invert(const DenseMatrix& m) {
  if (!m.is_square()) throw DimensionMismatch("invert: " + shape(m));
  const std::size_t n = m.rows();
  DenseMatrix a = m;
  DenseMatrix inv = DenseMatrix::identity(n);

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > best) {
        best = std::abs(a(r, col));
        pivot = r;
      }
    }
    if (best < kPivotThreshold) {
      throw SingularMatrix("singular matrix: pivot " + std::to_string(best) +
                           " in column " + std::to_string(col + 1));
    }
    if (pivot != col) {
      std::swap_ranges(a.row(col).begin(), a.row(col).end(),
                       a.row(pivot).begin());
      std::swap_ranges(inv.row(col).begin(), inv.row(col).end(),
                       inv.row(pivot).begin());
    }
    const double scale = 1.0 / a(col, col);
    for (double& v : a.row(col)) v *= scale;
    for (double& v : inv.row(col)) v *= scale;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionMismatch("matmul: " + shape(a) + " * " + shape(b));
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

DenseVector matvec(const DenseMatrix& a, const DenseVector& x) {
  if (a.cols() != x.dim())
    throw DimensionMismatch("matvec: " + shape(a) + " * " +
                            std::to_string(x.dim()));
  std::vector<double> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x.span());
  return DenseVector(std::move(out));
}

double frobenius_norm(const DenseMatrix& m) {
  double s = 0.0;
  for (double v : m.entries()) s += v * v;
  return std::sqrt(s);
}

double max_abs(const DenseMatrix& m) {
  double best = 0.0;
  for (double v : m.entries()) best = std::max(best, std::abs(v));
  return best;
}

double condition_estimate(const DenseMatrix& m) {
  if (!m.is_square()) throw DimensionMismatch("condition_estimate: " + shape(m));
  try {
    return frobenius_norm(m) * frobenius_norm(invert(m));
  } catch (const SingularMatrix&) {
    return std::numeric_limits<double>::infinity();
  } catch (const InvalidValue&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace unconfused
