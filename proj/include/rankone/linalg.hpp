#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankone {

// Base class for everything this library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid or malformed input: asymmetric matrices, non-finite entries,
// unparsable scenarios, lambda0 not in the spectrum.
struct InputError : Error {
  using Error::Error;
};

// Numerically ill-posed request: resolvent at the spectrum, secular
// evaluation at a pole, ambiguous cluster match.
struct NumericalError : Error {
  using Error::Error;
};

// Dense row-major matrix over double or complex<double>.
template <typename T>
class BasicMatrix {
 public:
  BasicMatrix() = default;
  BasicMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {
    if (rows < 0 || cols < 0) throw InputError("matrix dimensions must be non-negative");
  }

  static BasicMatrix identity(int n) {
    BasicMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const T& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  std::span<T> row(int i) { return {data_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)}; }
  std::span<const T> row(int i) const {
    return {data_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)};
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using Matrix = BasicMatrix<double>;
using CMatrix = BasicMatrix<std::complex<double>>;
using Vector = std::vector<double>;
using CVector = std::vector<std::complex<double>>;

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

// u v^T
Matrix outer(std::span<const double> u, std::span<const double> v);

Vector matvec(const Matrix& a, std::span<const double> x);

double max_abs(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);
double frobenius_diff(const Matrix& a, const Matrix& b);

}  // namespace rankone
