#pragma once

// Dense row-major matrix over any scalar with scalar_traits.

#include <cassert>
#include <initializer_list>
#include <utility>
#include <vector>

#include "symplecta/scalars.hpp"

namespace symplecta {

template <class S>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, S(0)) {
    assert(rows >= 0 && cols >= 0);
  }
  Matrix(int rows, int cols, std::initializer_list<S> entries)
      : rows_(rows), cols_(cols), a_(entries) {
    assert(static_cast<int>(a_.size()) == rows * cols);
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }
  static Matrix zero(int rows, int cols) { return Matrix(rows, cols); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  S& operator()(int i, int j) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return a_[static_cast<size_t>(i) * cols_ + j];
  }
  const S& operator()(int i, int j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return a_[static_cast<size_t>(i) * cols_ + j];
  }

  friend Matrix operator+(const Matrix& x, const Matrix& y) {
    assert(x.rows_ == y.rows_ && x.cols_ == y.cols_);
    Matrix r(x.rows_, x.cols_);
    for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] + y.a_[k];
    return r;
  }
  friend Matrix operator-(const Matrix& x, const Matrix& y) {
    assert(x.rows_ == y.rows_ && x.cols_ == y.cols_);
    Matrix r(x.rows_, x.cols_);
    for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] - y.a_[k];
    return r;
  }
  Matrix operator-() const {
    Matrix r(rows_, cols_);
    for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = -a_[k];
    return r;
  }
  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    assert(x.cols_ == y.rows_);
    Matrix r(x.rows_, y.cols_);
    for (int i = 0; i < x.rows_; ++i)
      for (int k = 0; k < x.cols_; ++k) {
        const S& xik = x(i, k);
        if (scalar_traits<S>::is_exact && xik == S(0)) continue;
        for (int j = 0; j < y.cols_; ++j) r(i, j) += xik * y(k, j);
      }
    return r;
  }
  friend Matrix operator*(const S& c, const Matrix& x) {
    Matrix r(x.rows_, x.cols_);
    for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = c * x.a_[k];
    return r;
  }
  Matrix& operator+=(const Matrix& y) { return *this = *this + y; }
  Matrix& operator-=(const Matrix& y) { return *this = *this - y; }

  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }
  friend bool operator!=(const Matrix& x, const Matrix& y) { return !(x == y); }

  Matrix transpose() const {
    Matrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }
  // Conjugate transpose; equals transpose() on real scalars.
  Matrix ct() const {
    Matrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        r(j, i) = scalar_traits<S>::conj((*this)(i, j));
    return r;
  }
  Matrix conj() const {
    Matrix r(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        r(i, j) = scalar_traits<S>::conj((*this)(i, j));
    return r;
  }

  Matrix block(int i0, int j0, int rows, int cols) const {
    assert(i0 + rows <= rows_ && j0 + cols <= cols_);
    Matrix r(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) r(i, j) = (*this)(i0 + i, j0 + j);
    return r;
  }
  void set_block(int i0, int j0, const Matrix& m) {
    assert(i0 + m.rows_ <= rows_ && j0 + m.cols_ <= cols_);
    for (int i = 0; i < m.rows_; ++i)
      for (int j = 0; j < m.cols_; ++j) (*this)(i0 + i, j0 + j) = m(i, j);
  }
  Matrix col(int j) const { return block(0, j, rows_, 1); }
  Matrix row(int i) const { return block(i, 0, 1, cols_); }

  S trace() const {
    assert(rows_ == cols_);
    S t(0);
    for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

 private:
  int rows_, cols_;
  std::vector<S> a_;
};

template <class S>
Matrix<S> hcat(const Matrix<S>& x, const Matrix<S>& y) {
  if (x.empty() && x.rows() == 0) return y;
  if (y.empty() && y.rows() == 0) return x;
  assert(x.rows() == y.rows());
  Matrix<S> r(x.rows(), x.cols() + y.cols());
  r.set_block(0, 0, x);
  r.set_block(0, x.cols(), y);
  return r;
}

template <class S>
Matrix<S> vcat(const Matrix<S>& x, const Matrix<S>& y) {
  assert(x.cols() == y.cols());
  Matrix<S> r(x.rows() + y.rows(), x.cols());
  r.set_block(0, 0, x);
  r.set_block(x.rows(), 0, y);
  return r;
}

// Frobenius norm, approximated through double for the exact backends.
template <class S>
double fro_norm(const Matrix<S>& m) {
  double s = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      double a = scalar_traits<S>::abs_approx(m(i, j));
      s += a * a;
    }
  return std::sqrt(s);
}

template <class S>
double max_abs(const Matrix<S>& m) {
  double s = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      s = std::max(s, scalar_traits<S>::abs_approx(m(i, j)));
  return s;
}

template <class S>
bool is_zero_matrix(const Matrix<S>& m, double tol = 0.0) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!scalar_traits<S>::is_zero(m(i, j), tol)) return false;
  return true;
}

// Entrywise backend conversions.
template <class To, class From>
Matrix<To> convert_matrix(const Matrix<From>& m);

inline Matrix<double> to_float_matrix(const Matrix<Rational>& m) {
  Matrix<double> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = to_double(m(i, j));
  return r;
}

inline Matrix<std::complex<double>> to_float_matrix(const Matrix<Gaussian>& m) {
  Matrix<std::complex<double>> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      r(i, j) = scalar_traits<Gaussian>::to_float(m(i, j));
  return r;
}

inline Matrix<std::complex<double>> complexify(const Matrix<double>& m) {
  Matrix<std::complex<double>> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = {m(i, j), 0.0};
  return r;
}

inline Matrix<Gaussian> complexify(const Matrix<Rational>& m) {
  Matrix<Gaussian> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = Gaussian(m(i, j));
  return r;
}

inline Matrix<double> real_part(const Matrix<std::complex<double>>& m) {
  Matrix<double> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).real();
  return r;
}

inline Matrix<double> imag_part(const Matrix<std::complex<double>>& m) {
  Matrix<double> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).imag();
  return r;
}

inline Matrix<Rational> real_part(const Matrix<Gaussian>& m) {
  Matrix<Rational> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).re;
  return r;
}

inline Matrix<Rational> imag_part(const Matrix<Gaussian>& m) {
  Matrix<Rational> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).im;
  return r;
}

}  // namespace symplecta
