#pragma once

// Shared test utilities: seeded random generators for exact and floating
// inputs, and constructions with independently known answers (known-rank
// factorizations, congruence transports of known diagonal signatures,
// symplectic matrices assembled from generator families).
//
// Conventions: the expected values in tests are either frozen literals or
// produced by the constructions here, never by the code path under test.

#include <complex>
#include <random>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "symplecta/linalg.hpp"
#include "symplecta/matrix.hpp"
#include "symplecta/numeric.hpp"
#include "symplecta/scalars.hpp"

namespace oracles {

using symplecta::Gaussian;
using symplecta::Matrix;
using symplecta::Rational;

using Rng = std::mt19937_64;

inline int rand_int(Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return d(rng);
}

inline Rational rand_rational(Rng& rng, int max_num = 6, int max_den = 4) {
  int num = rand_int(rng, -max_num, max_num);
  int den = rand_int(rng, 1, max_den);
  return Rational(num, den);
}

inline double rand_double(Rng& rng, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

template <class S>
S rand_scalar(Rng& rng);

template <>
inline Rational rand_scalar<Rational>(Rng& rng) {
  return rand_rational(rng);
}
template <>
inline Gaussian rand_scalar<Gaussian>(Rng& rng) {
  return Gaussian(rand_rational(rng), rand_rational(rng));
}
template <>
inline double rand_scalar<double>(Rng& rng) {
  return rand_double(rng);
}
template <>
inline std::complex<double> rand_scalar<std::complex<double>>(Rng& rng) {
  return {rand_double(rng), rand_double(rng)};
}

template <class S>
Matrix<S> rand_matrix(Rng& rng, int rows, int cols) {
  Matrix<S> m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rand_scalar<S>(rng);
  return m;
}

// Unit lower-triangular with random strictly-lower entries: invertible by
// construction.
template <class S>
Matrix<S> rand_unit_lower(Rng& rng, int n) {
  Matrix<S> m = Matrix<S>::identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) m(i, j) = rand_scalar<S>(rng);
  return m;
}

// Invertible by construction: L * U * (row swap-free) with unit triangular
// factors plus a permutation for genericity.
template <class S>
Matrix<S> rand_invertible(Rng& rng, int n) {
  Matrix<S> l = rand_unit_lower<S>(rng, n);
  Matrix<S> u = rand_unit_lower<S>(rng, n).transpose();
  Matrix<S> p(n, n);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (int i = 0; i < n; ++i) p(perm[i], i) = S(1);
  return l * u * p;
}

// rows x cols matrix of rank exactly r, as a product of full-rank factors.
template <class S>
Matrix<S> rand_known_rank(Rng& rng, int rows, int cols, int r) {
  Matrix<S> a = rand_invertible<S>(rng, rows).block(0, 0, rows, r);
  Matrix<S> b = rand_invertible<S>(rng, cols).block(0, 0, r, cols);
  return a * b;
}

// Symmetric (hermitian) matrix with known inertia, via congruence transport
// of a fixed diagonal: H = B^H D B with invertible B.
template <class S>
Matrix<S> rand_known_signature(Rng& rng, int n, int pos, int neg) {
  Matrix<S> d(n, n);
  for (int i = 0; i < pos; ++i) d(i, i) = S(1);
  for (int i = pos; i < pos + neg; ++i) d(i, i) = S(-1);
  Matrix<S> b = rand_invertible<S>(rng, n);
  return b.ct() * d * b;
}

// Standard symplectic form on R^{2n} in the {e_1..e_n, f_1..f_n} order.
template <class S>
Matrix<S> standard_omega(int n) {
  Matrix<S> omega(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    omega(i, n + i) = S(-1);
    omega(n + i, i) = S(1);
  }
  return omega;
}

// Random symplectic matrix as a word in the generator families
//   [[I, B], [0, I]], [[I, 0], [C, I]], [[A, 0], [0, A^{-T}]]
// with symmetric B, C and invertible A.
template <class S>
Matrix<S> rand_symplectic(Rng& rng, int n, int words = 3) {
  Matrix<S> g = Matrix<S>::identity(2 * n);
  for (int w = 0; w < words; ++w) {
    int kind = rand_int(rng, 0, 2);
    Matrix<S> step = Matrix<S>::identity(2 * n);
    if (kind == 0 || kind == 1) {
      Matrix<S> raw = rand_matrix<S>(rng, n, n);
      Matrix<S> sym = raw + raw.transpose();
      if (kind == 0)
        step.set_block(0, n, sym);
      else
        step.set_block(n, 0, sym);
    } else {
      Matrix<S> a = rand_invertible<S>(rng, n);
      step.set_block(0, 0, a);
      step.set_block(n, n, symplecta::inverse(a.transpose()));
    }
    g = g * step;
  }
  return g;
}

// Random element of the unitary subgroup U(n) inside Sp(2n; R): u = exp(iH)
// for hermitian H, realified as [[X, -Y], [Y, X]] for u = X + iY. These are
// orthogonal and symplectic, so conjugating by them keeps conditioning tight.
inline Matrix<double> rand_unitary_symplectic(Rng& rng, int n) {
  using C = std::complex<double>;
  Matrix<C> h(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = C(rand_double(rng, -1.5, 1.5), 0.0);
    for (int j = i + 1; j < n; ++j) {
      C v(rand_double(rng, -1.0, 1.0), rand_double(rng, -1.0, 1.0));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  symplecta::HermEig e = symplecta::jacobi_eig_herm(h);
  Matrix<C> u(n, n);
  for (int k = 0; k < n; ++k) {
    C phase(std::cos(e.values[k]), std::sin(e.values[k]));
    Matrix<C> vk = e.vectors.col(k);
    u = u + phase * (vk * vk.ct());
  }
  Matrix<double> m(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m(i, j) = u(i, j).real();
      m(i, n + j) = -u(i, j).imag();
      m(n + i, j) = u(i, j).imag();
      m(n + i, n + j) = u(i, j).real();
    }
  return m;
}

// Random symplectic with controlled condition number: u1 * diag * u2 with
// unitary-symplectic factors and a diagonal [[A, 0], [0, A^{-1}]] whose
// entries stay in [0.6, 1.8]. Conjugating the standard complex structure by
// these gives genuinely non-standard compatible J without blowup.
inline Matrix<double> rand_tame_symplectic(Rng& rng, int n) {
  Matrix<double> d(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    double a = rand_double(rng, 0.6, 1.8);
    d(i, i) = a;
    d(n + i, n + i) = 1.0 / a;
  }
  return rand_unitary_symplectic(rng, n) * d * rand_unitary_symplectic(rng, n);
}

// Subspace sampling: small-entry dim x k matrix, rejection-sampled until the
// exact rank is k. Small entries keep the columns well conditioned, so the
// floating backends see the same structure as the exact ones.
template <class S>
Matrix<S> rand_subspace_basis(Rng& rng, int dim, int k) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Matrix<Rational> m(dim, k);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < k; ++j)
        m(i, j) = Rational(rand_int(rng, -3, 3), rand_int(rng, 1, 2));
    if (symplecta::rank_of(m) != k) continue;
    if constexpr (std::is_same_v<S, Rational>) return m;
    else if constexpr (std::is_same_v<S, double>) return symplecta::to_float_matrix(m);
    else {
      // Complex scalars: independent small imaginary parts, re-checked.
      Matrix<Gaussian> g(dim, k);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < k; ++j)
          g(i, j) = Gaussian(m(i, j),
                             Rational(rand_int(rng, -3, 3), rand_int(rng, 1, 2)));
      if (symplecta::rank_of(g) != k) continue;
      if constexpr (std::is_same_v<S, Gaussian>) return g;
      else return symplecta::to_float_matrix(g);
    }
  }
  throw std::logic_error("rand_subspace_basis: rejection sampling failed");
}

}  // namespace oracles
