#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace eigbound {

using cdouble = std::complex<double>;

inline double conj(double x) { return x; }
inline cdouble conj(const cdouble& z) { return std::conj(z); }

/// Row-major dense matrix.
template <typename T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix adjoint() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = conj((*this)(i, j));
    return r;
  }

  /// Copy of rows [r0, r0+nr) x cols [c0, c0+nc).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("Matrix::block out of range");
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RMatrix = Matrix<double>;
using CMatrix = Matrix<cdouble>;

template <typename T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: inner dimensions differ");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const T ail = a(i, l);
      if (ail == T{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += ail * b(l, j);
    }
  return c;
}

template <typename T>
Matrix<T> operator+(Matrix<T> a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix sum: shapes differ");
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) += b(i, j);
  return a;
}

template <typename T>
Matrix<T> operator-(Matrix<T> a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix difference: shapes differ");
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= b(i, j);
  return a;
}

template <typename T>
Matrix<T> operator*(double s, Matrix<T> a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) *= s;
  return a;
}

inline CMatrix to_complex(const RMatrix& m) {
  CMatrix c(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = m(i, j);
  return c;
}

template <typename T>
bool is_zero(const Matrix<T>& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != T{}) return false;
  return true;
}

template <typename T>
double max_abs(const Matrix<T>& m) {
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r = std::max(r, std::abs(m(i, j)));
  return r;
}

template <typename T>
double frobenius_norm(const Matrix<T>& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

/// Square complex Hermitian matrix. The lower triangle of the input is
/// authoritative; the upper triangle is its mirror and the diagonal is real.
class DenseHermitian {
 public:
  DenseHermitian() = default;

  explicit DenseHermitian(CMatrix entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("DenseHermitian: matrix must be square");
    if (m_.rows() == 0) throw std::invalid_argument("DenseHermitian: order must be positive");
    const std::size_t n = m_.rows();
    for (std::size_t i = 0; i < n; ++i) {
      m_(i, i) = m_(i, i).real();
      for (std::size_t j = 0; j < i; ++j) m_(j, i) = std::conj(m_(i, j));
    }
  }

  explicit DenseHermitian(const RMatrix& entries) : DenseHermitian(to_complex(entries)) {}

  static DenseHermitian zero(std::size_t n) { return DenseHermitian(CMatrix(n, n)); }
  static DenseHermitian identity(std::size_t n) { return DenseHermitian(CMatrix::identity(n)); }
  static DenseHermitian diagonal(std::span<const double> d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return DenseHermitian(std::move(m));
  }

  std::size_t order() const { return m_.rows(); }
  const CMatrix& entries() const { return m_; }
  const cdouble& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  /// Principal submatrix on [first, first+size).
  DenseHermitian principal(std::size_t first, std::size_t size) const {
    return DenseHermitian(m_.block(first, first, size, size));
  }

  friend DenseHermitian operator+(const DenseHermitian& a, const DenseHermitian& b) {
    return DenseHermitian(a.m_ + b.m_);
  }
  friend DenseHermitian operator*(double s, const DenseHermitian& a) { return DenseHermitian(s * a.m_); }

  friend bool operator==(const DenseHermitian&, const DenseHermitian&) = default;

 private:
  CMatrix m_;
};

/// Trailing-block partition: A11 is the leading (n-k)x(n-k) block, A22 the
/// trailing k x k block and A21 the k x (n-k) coupling below A11.
struct BlockSplit {
  std::size_t k = 1;

  void validate(std::size_t n) const {
    if (k < 1 || k + 1 > n) throw std::invalid_argument("BlockSplit: need 1 <= k <= n-1");
  }
  std::size_t leading(std::size_t n) const { return n - k; }
};

inline DenseHermitian leading_block(const DenseHermitian& a, BlockSplit s) {
  s.validate(a.order());
  return a.principal(0, s.leading(a.order()));
}

inline DenseHermitian trailing_block(const DenseHermitian& a, BlockSplit s) {
  s.validate(a.order());
  return a.principal(s.leading(a.order()), s.k);
}

inline CMatrix coupling_block(const DenseHermitian& a, BlockSplit s) {
  s.validate(a.order());
  const std::size_t m = s.leading(a.order());
  return a.entries().block(m, 0, s.k, m);
}

/// Real symmetric tridiagonal matrix. Off-diagonals may carry any sign.
class SymTridiagonal {
 public:
  SymTridiagonal() = default;
  SymTridiagonal(std::vector<double> diag, std::vector<double> offdiag)
      : diag_(std::move(diag)), off_(std::move(offdiag)) {
    if (diag_.empty()) throw std::invalid_argument("SymTridiagonal: order must be positive");
    if (off_.size() + 1 != diag_.size())
      throw std::invalid_argument("SymTridiagonal: offdiag length must be diag length - 1");
  }

  std::size_t order() const { return diag_.size(); }
  const std::vector<double>& diag() const { return diag_; }
  const std::vector<double>& offdiag() const { return off_; }

  /// 0-based accessors. off(i) couples rows i and i+1; out-of-range
  /// neighbours read as zero.
  double diag(std::size_t i) const { return diag_.at(i); }
  double off(std::size_t i) const { return i < off_.size() ? off_[i] : 0.0; }
  double off_before(std::size_t i) const { return i == 0 ? 0.0 : off_[i - 1]; }

  SymTridiagonal principal(std::size_t first, std::size_t size) const {
    if (size == 0 || first + size > order()) throw std::out_of_range("SymTridiagonal::principal");
    std::vector<double> d(diag_.begin() + first, diag_.begin() + first + size);
    std::vector<double> e(off_.begin() + first, off_.begin() + first + size - 1);
    return {std::move(d), std::move(e)};
  }

  RMatrix to_real_dense() const {
    const std::size_t n = order();
    RMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      m(i, i) = diag_[i];
      if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = off_[i];
    }
    return m;
  }

  DenseHermitian to_dense() const { return DenseHermitian(to_real_dense()); }

  friend SymTridiagonal operator+(const SymTridiagonal& a, const SymTridiagonal& b) {
    if (a.order() != b.order()) throw std::invalid_argument("SymTridiagonal sum: orders differ");
    SymTridiagonal r = a;
    for (std::size_t i = 0; i < r.diag_.size(); ++i) r.diag_[i] += b.diag_[i];
    for (std::size_t i = 0; i < r.off_.size(); ++i) r.off_[i] += b.off_[i];
    return r;
  }

  friend bool operator==(const SymTridiagonal&, const SymTridiagonal&) = default;

 private:
  std::vector<double> diag_;
  std::vector<double> off_;
};

/// Ascending eigenvalues, optionally with eigenvectors stored as columns.
template <typename T>
struct Spectrum {
  std::vector<double> values;
  std::optional<Matrix<T>> vectors;

  std::size_t size() const { return values.size(); }
  std::vector<T> vector(std::size_t i) const { return vectors.value().column(i); }
};

}  // namespace eigbound
