#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace unconfused {

/// Dense vector of doubles. Entries must be finite on construction.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t dim, double fill = 0.0);
  explicit DenseVector(std::vector<double> entries);
  DenseVector(std::initializer_list<double> entries);

  std::size_t dim() const { return data_.size(); }
  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  std::span<const double> span() const { return data_; }
  std::span<double> span() { return data_; }
  const std::vector<double>& entries() const { return data_; }

  double norm() const;

  bool operator==(const DenseVector&) const = default;

 private:
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);

/// Row-major dense matrix. Sized for confusion matrices (Q up to ~100) and
/// weight matrices (d x Q).
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix zero(std::size_t rows, std::size_t cols) {
    return DenseMatrix(rows, cols);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }

  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }
  std::span<double> row(std::size_t r) {
    return std::span<double>(data_).subspan(r * cols_, cols_);
  }
  DenseVector column(std::size_t c) const;

  const std::vector<double>& entries() const { return data_; }

  DenseMatrix transpose() const;
  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double s);

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double s, DenseMatrix a);

/// Pivot magnitude below which a matrix is declared singular.
inline constexpr double kPivotThreshold = 1e-12;

/// Gauss-Jordan inversion with partial pivoting. Throws SingularMatrix.
DenseMatrix invert(const DenseMatrix& m);

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseVector matvec(const DenseMatrix& a, const DenseVector& x);

double frobenius_norm(const DenseMatrix& m);
double max_abs(const DenseMatrix& m);

/// ||M||_F * ||M^-1||_F; +inf when inversion fails.
double condition_estimate(const DenseMatrix& m);

}  // namespace unconfused
