#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "otk/errors.hpp"

namespace otk {

using Complex = std::complex<double>;

/**
 * @brief Dense row-major complex matrix. Column vectors are n x 1 matrices.
 */
class CMatrix {
 public:
  CMatrix() = default;

  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Complex{}) {}

  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw InputError("matrix data length " + std::to_string(data_.size()) + " does not match " +
                       std::to_string(rows_) + "x" + std::to_string(cols_));
    }
  }

  /** @brief Build from nested rows; all rows must have equal length. */
  static CMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r ? rows.begin()->size() : 0;
    std::vector<Complex> d;
    d.reserve(r * c);
    for (const auto& row : rows) {
      if (row.size() != c) throw InputError("ragged row list");
      d.insert(d.end(), row.begin(), row.end());
    }
    return CMatrix(r, c, std::move(d));
  }

  static CMatrix zeros(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static CMatrix diag(const std::vector<Complex>& d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static CMatrix column(const std::vector<Complex>& v) { return CMatrix(v.size(), 1, v); }

  /** @brief Standard basis vector e_i in C^n (0-based). */
  static CMatrix basis(std::size_t n, std::size_t i) {
    CMatrix v(n, 1);
    v(i, 0) = 1.0;
    return v;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Complex& operator[](std::size_t k) { return data_[k]; }
  const Complex& operator[](std::size_t k) const { return data_[k]; }

  const std::vector<Complex>& data() const noexcept { return data_; }
  std::vector<Complex>& data() noexcept { return data_; }

  CMatrix adjoint() const {
    CMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  CMatrix transpose() const {
    CMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  CMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw InputError("block out of range");
    CMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const CMatrix& b) {
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw InputError("set_block out of range");
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  CMatrix col(std::size_t j) const { return block(0, j, rows_, 1); }

  CMatrix& operator+=(const CMatrix& o) {
    check_same(o, "+");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    check_same(o, "-");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  CMatrix& operator*=(Complex s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  double frobenius_norm() const {
    double s = 0;
    for (const auto& x : data_) s += std::norm(x);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0;
    for (const auto& x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  bool all_finite() const {
    for (const auto& x : data_)
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return true;
  }

  Complex trace() const {
    Complex t{};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

 private:
  void check_same(const CMatrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw InputError(std::string("shape mismatch in ") + op + ": " + std::to_string(rows_) + "x" +
                       std::to_string(cols_) + " vs " + std::to_string(o.rows_) + "x" + std::to_string(o.cols_));
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

inline CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
inline CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
inline CMatrix operator-(CMatrix a) { return a *= -1.0; }
inline CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
inline CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
inline CMatrix operator/(CMatrix a, Complex s) { return a *= (1.0 / s); }

inline CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw InputError("shape mismatch in *: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                     std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  CMatrix c(a.rows(), b.cols());
  const std::size_t n = a.cols(), m = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex* ci = &c(i, 0);
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      const Complex* bk = &b(k, 0);
      for (std::size_t j = 0; j < m; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

/** @brief Matrix power M^n for square M, n >= 0. */
inline CMatrix mpow(const CMatrix& m, int n) {
  if (!m.is_square()) throw InputError("power of non-square matrix");
  if (n < 0) throw InputError("negative matrix power");
  CMatrix r = CMatrix::identity(m.rows());
  CMatrix base = m;
  while (n > 0) {
    if (n & 1) r = r * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return r;
}

/** @brief Inner product linear in the first argument: sum x_i conj(y_i). */
inline Complex inner(const CMatrix& x, const CMatrix& y) {
  if (x.size() != y.size()) throw InputError("inner product of vectors with different lengths");
  Complex s{};
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * std::conj(y[k]);
  return s;
}

/** @brief Quadratic form <Bx, x>. */
inline Complex quad_form(const CMatrix& b, const CMatrix& x) { return inner(b * x, x); }

inline double vnorm(const CMatrix& x) { return x.frobenius_norm(); }

inline CMatrix normalized(const CMatrix& x) {
  double n = vnorm(x);
  if (n == 0.0) throw InputError("cannot normalize the zero vector");
  return x / Complex(n);
}

/** @brief Block diagonal A (+) B. */
inline CMatrix direct_sum(const CMatrix& a, const CMatrix& b) {
  CMatrix r(a.rows() + b.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), a.cols(), b);
  return r;
}

/** @brief Hermitian part Re(e^{-i theta} B) = (e^{-i theta} B + e^{i theta} B*) / 2. */
inline CMatrix rotated_real_part(const CMatrix& b, double theta) {
  const Complex w = std::polar(1.0, -theta);
  const std::size_t n = b.rows();
  CMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (w * b(i, j) + std::conj(w * b(j, i)));
  return h;
}

}  // namespace otk
