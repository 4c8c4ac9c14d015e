#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "mirec/errors.hpp"
#include "mirec/rational.hpp"

namespace mirec {

/// Dense matrix over Rational (row major).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Rational(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) {
    return a_[i * cols_ + j];
  }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  friend Matrix operator+(const Matrix& x, const Matrix& y) {
    Matrix r = x;
    for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += y.a_[i];
    return r;
  }
  friend Matrix operator-(const Matrix& x, const Matrix& y) {
    Matrix r = x;
    for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= y.a_[i];
    return r;
  }
  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols_ != y.rows_) throw Error("matrix shape mismatch");
    Matrix r(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        const Rational& v = x(i, k);
        if (v.is_zero()) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) r(i, j) += v * y(k, j);
      }
    return r;
  }
  friend Matrix operator*(const Matrix& x, const Rational& s) {
    Matrix r = x;
    for (auto& v : r.a_) v *= s;
    return r;
  }

  std::vector<Rational> apply(const std::vector<Rational>& v) const {
    if (v.size() != cols_) throw Error("matrix/vector shape mismatch");
    std::vector<Rational> r(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        if ((*this)(i, j).is_zero()) continue;
        r[i] += (*this)(i, j) * v[j];
      }
    return r;
  }

  bool is_zero() const {
    for (const auto& v : a_)
      if (!v.is_zero()) return false;
    return true;
  }

  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

/// Exact determinant by fraction-free (Bareiss) elimination with row pivoting
/// on nonzero entries.
inline Rational det(Matrix m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw Error("determinant of a non-square matrix");
  if (n == 0) return Rational(1);
  int sign = 1;
  Rational prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k).is_zero()) {
      std::size_t p = k + 1;
      while (p < n && m(p, k).is_zero()) ++p;
      if (p == n) return Rational(0);
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m(i, j) = (m(k, k) * m(i, j) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  Rational d = m(n - 1, n - 1);
  return sign < 0 ? -d : d;
}

/// Exact solution of A x = b by Gaussian elimination with pivoting on nonzero
/// entries. Throws SingularSystem (carrying the rank) when A is singular.
inline std::vector<Rational> solve_linear(Matrix a, std::vector<Rational> b) {
  const std::size_t n = a.rows();
  if (n != a.cols() || b.size() != n) throw Error("solve shape mismatch");
  std::size_t rank = 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k).is_zero()) ++p;
    if (p == n) continue;  // rank deficiency; keep eliminating to count rank
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(b[k], b[p]);
    }
    ++rank;
    const Rational inv = a(k, k).inv();
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k).is_zero()) continue;
      const Rational f = a(i, k) * inv;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  if (rank < n) throw SingularSystem("singular linear system", rank);
  std::vector<Rational> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a(i, j) * x[j];
    x[i] = acc / a(i, i);
  }
  return x;
}

/// Exact solution of A X = B for square invertible A.
inline Matrix solve_linear(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.rows();
  if (b.rows() != n) throw Error("solve shape mismatch");
  Matrix x(n, b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    std::vector<Rational> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = b(i, j);
    std::vector<Rational> sol = solve_linear(a, std::move(col));
    for (std::size_t i = 0; i < n; ++i) x(i, j) = sol[i];
  }
  return x;
}

}  // namespace mirec
