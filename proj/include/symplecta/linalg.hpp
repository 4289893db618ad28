#pragma once

// Elimination-based linear algebra shared by the exact and floating backends.
//
// Pivoting policy: exact backends take the first nonzero candidate (keeps
// results bit-reproducible); floating backends take the largest magnitude
// and compare against rank_tol scaled by the largest entry of the input.
// No eigenvalue computations happen here; signatures come from symmetric /
// hermitian congruence elimination.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "symplecta/matrix.hpp"

namespace symplecta {

template <class S>
struct EchelonResult {
  Matrix<S> rref;                // row-reduced echelon form
  std::vector<int> pivot_cols;   // column index of each pivot, by row
  int rank = 0;
};

namespace detail {

template <class S>
double rank_threshold(const Matrix<S>& m, double rank_tol) {
  if constexpr (is_exact_v<S>) {
    (void)m;
    (void)rank_tol;
    return 0.0;
  } else {
    return rank_tol * std::max(1.0, max_abs(m));
  }
}

// Picks the pivot row in column j among rows [row0, rows): first nonzero for
// exact scalars, max magnitude above threshold otherwise. Returns -1 if the
// column is (numerically) zero below row0.
template <class S>
int pick_pivot(const Matrix<S>& m, int row0, int j, double threshold) {
  if constexpr (is_exact_v<S>) {
    for (int i = row0; i < m.rows(); ++i)
      if (!(m(i, j) == S(0))) return i;
    return -1;
  } else {
    int best = -1;
    double best_abs = threshold;
    for (int i = row0; i < m.rows(); ++i) {
      double a = scalar_traits<S>::abs_approx(m(i, j));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    return best;
  }
}

template <class S>
void swap_rows(Matrix<S>& m, int i, int k) {
  if (i == k) return;
  for (int j = 0; j < m.cols(); ++j) std::swap(m(i, j), m(k, j));
}

}  // namespace detail

template <class S>
EchelonResult<S> rref(Matrix<S> m, double rank_tol = 1e-9) {
  const double threshold = detail::rank_threshold(m, rank_tol);
  EchelonResult<S> out;
  int row = 0;
  for (int j = 0; j < m.cols() && row < m.rows(); ++j) {
    int piv = detail::pick_pivot(m, row, j, threshold);
    if (piv < 0) continue;
    detail::swap_rows(m, row, piv);
    S inv = S(1) / m(row, j);
    for (int c = j; c < m.cols(); ++c) m(row, c) = inv * m(row, c);
    m(row, j) = S(1);  // exact one even on the floating backends
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row) continue;
      S f = m(i, j);
      if (scalar_traits<S>::is_zero(f, 0.0)) continue;
      for (int c = j; c < m.cols(); ++c) m(i, c) = m(i, c) - f * m(row, c);
      m(i, j) = S(0);
    }
    out.pivot_cols.push_back(j);
    ++row;
  }
  out.rank = row;
  out.rref = std::move(m);
  return out;
}

template <class S>
int rank_of(const Matrix<S>& m, double rank_tol = 1e-9) {
  return rref(m, rank_tol).rank;
}

// Basis of the kernel {x : m x = 0}, one column per free variable.
template <class S>
Matrix<S> nullspace(const Matrix<S>& m, double rank_tol = 1e-9) {
  EchelonResult<S> e = rref(m, rank_tol);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : e.pivot_cols) is_pivot[c] = true;
  int nullity = m.cols() - e.rank;
  Matrix<S> basis(m.cols(), nullity);
  int k = 0;
  for (int j = 0; j < m.cols(); ++j) {
    if (is_pivot[j]) continue;
    basis(j, k) = S(1);
    for (int r = 0; r < e.rank; ++r)
      basis(e.pivot_cols[r], k) = -e.rref(r, j);
    ++k;
  }
  return basis;
}

// Columns of m indexed by the pivots of its RREF: a basis of the column
// space drawn from the original columns.
template <class S>
Matrix<S> column_basis(const Matrix<S>& m, double rank_tol = 1e-9) {
  EchelonResult<S> e = rref(m, rank_tol);
  Matrix<S> b(m.rows(), e.rank);
  for (int k = 0; k < e.rank; ++k)
    for (int i = 0; i < m.rows(); ++i) b(i, k) = m(i, e.pivot_cols[k]);
  return b;
}

// Unique reduced column echelon form of the column space. Two matrices have
// equal column spans iff their canonical forms are equal (exact backends).
template <class S>
Matrix<S> canonical_colspan(const Matrix<S>& m, double rank_tol = 1e-9) {
  EchelonResult<S> e = rref(m.transpose(), rank_tol);
  Matrix<S> r(m.rows(), e.rank);
  for (int k = 0; k < e.rank; ++k)
    for (int i = 0; i < m.rows(); ++i) r(i, k) = e.rref(k, i);
  return r;
}

template <class S>
bool same_colspan_exact(const Matrix<S>& a, const Matrix<S>& b) {
  static_assert(is_exact_v<S>, "exact-backend subspace equality");
  return canonical_colspan(a) == canonical_colspan(b);
}

// Basis of colspan(a) ∩ colspan(b): kernel vectors (x; y) of [a | -b]
// satisfy a x = b y, and the a x form the intersection.
template <class S>
Matrix<S> intersect_columns(const Matrix<S>& a, const Matrix<S>& b,
                            double rank_tol = 1e-9) {
  assert(a.rows() == b.rows());
  Matrix<S> stacked = hcat(a, -b);
  Matrix<S> ker = nullspace(stacked, rank_tol);
  Matrix<S> xs = ker.block(0, 0, a.cols(), ker.cols());
  Matrix<S> inter = a * xs;
  return column_basis(inter, rank_tol);
}

template <class S>
Matrix<S> sum_columns(const Matrix<S>& a, const Matrix<S>& b,
                      double rank_tol = 1e-9) {
  return column_basis(hcat(a, b), rank_tol);
}

template <class S>
Matrix<S> inverse(const Matrix<S>& m, double rank_tol = 1e-9) {
  if (m.rows() != m.cols()) throw std::domain_error("inverse: not square");
  EchelonResult<S> e = rref(hcat(m, Matrix<S>::identity(m.rows())), rank_tol);
  if (e.rank < m.rows()) throw std::domain_error("inverse: singular matrix");
  for (int r = 0; r < m.rows(); ++r)
    if (e.pivot_cols[r] != r) throw std::domain_error("inverse: singular matrix");
  return e.rref.block(0, m.cols(), m.rows(), m.cols());
}

// Solves a x = b for square a; throws on singular a.
template <class S>
Matrix<S> solve(const Matrix<S>& a, const Matrix<S>& b,
                double rank_tol = 1e-9) {
  return inverse(a, rank_tol) * b;
}

// Coordinates of the columns of b in the column basis a (a has full column
// rank; the system must be consistent). Returns x with a x = b.
template <class S>
Matrix<S> coords_in_basis(const Matrix<S>& a, const Matrix<S>& b,
                          double rank_tol = 1e-9) {
  assert(a.rows() == b.rows());
  EchelonResult<S> e = rref(hcat(a, b), rank_tol);
  Matrix<S> x(a.cols(), b.cols());
  for (int r = 0; r < e.rank; ++r) {
    int pc = e.pivot_cols[r];
    if (pc >= a.cols())
      throw std::domain_error("coords_in_basis: columns not in span");
    for (int j = 0; j < b.cols(); ++j) x(pc, j) = e.rref(r, a.cols() + j);
  }
  // Pivots must exhaust the basis columns, otherwise a was rank-deficient.
  if (e.rank != a.cols())
    throw std::domain_error("coords_in_basis: basis is rank-deficient");
  return x;
}

struct Inertia {
  int zero = 0;
  int pos = 0;
  int neg = 0;
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

// Sylvester inertia of a symmetric (hermitian on complex scalars) matrix by
// congruence elimination. Diagonal-free steps use the classic basis move
// v_j += v_l (or v_j += i v_l when the real part vanishes).
template <class S>
Inertia signature_by_congruence(Matrix<S> h, double rank_tol = 1e-9) {
  using T = scalar_traits<S>;
  if (h.rows() != h.cols())
    throw std::domain_error("signature_by_congruence: not square");
  const double threshold = detail::rank_threshold(h, rank_tol);
  {
    Matrix<S> asym = h - h.ct();
    double scale = std::max(1.0, max_abs(h));
    if (!is_zero_matrix(asym, is_exact_v<S> ? 0.0 : rank_tol * scale))
      throw std::domain_error("signature_by_congruence: input not hermitian");
  }
  const int k = h.rows();
  std::vector<bool> done(k, false);
  Inertia sig;

  auto eliminate_with = [&](int i) {
    // Congruence clears row and column i using the nonzero diagonal h(i,i).
    for (int j = 0; j < k; ++j) {
      if (j == i || done[j]) continue;
      S f = h(j, i) / h(i, i);
      if (T::is_zero(f, 0.0)) continue;
      for (int c = 0; c < k; ++c) h(j, c) = h(j, c) - f * h(i, c);
    }
    for (int j = 0; j < k; ++j) {
      if (j == i || done[j]) continue;
      S f = T::conj(h(i, j) / h(i, i));
      if (T::is_zero(f, 0.0)) continue;
      for (int c = 0; c < k; ++c) h(c, j) = h(c, j) - f * h(c, i);
    }
  };

  for (int step = 0; step < k; ++step) {
    // Prefer a usable diagonal entry.
    int pick = -1;
    if constexpr (is_exact_v<S>) {
      for (int i = 0; i < k && pick < 0; ++i)
        if (!done[i] && !T::is_zero(h(i, i), 0.0)) pick = i;
    } else {
      double best = threshold;
      for (int i = 0; i < k; ++i)
        if (!done[i] && T::abs_approx(h(i, i)) > best) {
          best = T::abs_approx(h(i, i));
          pick = i;
        }
    }
    if (pick < 0) {
      // All remaining diagonal entries vanish; look for an off-diagonal
      // coupling and fold it onto the diagonal.
      int bi = -1, bj = -1;
      if constexpr (is_exact_v<S>) {
        for (int i = 0; i < k && bi < 0; ++i) {
          if (done[i]) continue;
          for (int j = i + 1; j < k && bi < 0; ++j)
            if (!done[j] && !T::is_zero(h(i, j), 0.0)) {
              bi = i;
              bj = j;
            }
        }
      } else {
        double best = threshold;
        for (int i = 0; i < k; ++i) {
          if (done[i]) continue;
          for (int j = i + 1; j < k; ++j)
            if (!done[j] && T::abs_approx(h(i, j)) > best) {
              best = T::abs_approx(h(i, j));
              bi = i;
              bj = j;
            }
        }
      }
      if (bi < 0) break;  // remaining block is zero
      // v_bi += alpha v_bj with alpha in {1, i} so the new diagonal entry
      // 2 Re(conj(alpha) h(bi,bj)) is nonzero.
      S alpha = S(1);
      if constexpr (is_complex_v<S>) {
        bool use_i;
        if constexpr (is_exact_v<S>) {
          use_i = T::is_zero(S(h(bi, bj) + T::conj(h(bi, bj))), 0.0);
        } else {
          use_i = std::abs(T::real(h(bi, bj))) < std::abs(T::imag(h(bi, bj)));
        }
        if (use_i) {
          if constexpr (std::is_same_v<S, Gaussian>)
            alpha = Gaussian::i();
          else
            alpha = S(0.0, 1.0);
        }
      }
      for (int c = 0; c < k; ++c) h(bi, c) = h(bi, c) + alpha * h(bj, c);
      S ac = T::conj(alpha);
      for (int c = 0; c < k; ++c) h(c, bi) = h(c, bi) + ac * h(c, bj);
      --step;  // retry with a usable diagonal present
      continue;
    }
    auto d = T::real(h(pick, pick));
    if (d > 0)
      ++sig.pos;
    else
      ++sig.neg;
    eliminate_with(pick);
    done[pick] = true;
  }
  int counted = sig.pos + sig.neg;
  sig.zero = k - counted;
  return sig;
}

}  // namespace symplecta
