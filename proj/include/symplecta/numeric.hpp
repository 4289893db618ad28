#pragma once

// Floating-backend numerics: cyclic Jacobi eigensolvers, exp/log of
// symmetric matrices, polar decomposition, orthonormalization, projector
// distances. Matrix exp/log go through eigendecompositions, not series.

#include <complex>
#include <stdexcept>
#include <vector>

#include "symplecta/linalg.hpp"
#include "symplecta/matrix.hpp"

namespace symplecta {

struct SymEig {
  std::vector<double> values;  // ascending
  Matrix<double> vectors;      // orthogonal, columns aligned with values
};

// Cyclic Jacobi for a real symmetric matrix.
inline SymEig jacobi_eig_sym(Matrix<double> a) {
  const int n = a.rows();
  if (n != a.cols()) throw std::domain_error("jacobi_eig_sym: not square");
  Matrix<double> v = Matrix<double>::identity(n);
  const double scale = std::max(1.0, max_abs(a));
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-15 * scale * n) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::abs(apq) <= 1e-18 * scale) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  // Sort ascending, permuting the eigenvector columns along.
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](int x, int y) { return a(x, x) < a(y, y); });
  SymEig out;
  out.values.resize(n);
  out.vectors = Matrix<double>(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = a(idx[j], idx[j]);
    for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, idx[j]);
  }
  return out;
}

// Modified Gram-Schmidt; drops columns whose residual falls below
// rank_tol * scale. Works on both floating scalars.
template <class S>
Matrix<S> orthonormalize_columns(const Matrix<S>& m, double rank_tol = 1e-9) {
  static_assert(!is_exact_v<S>, "floating backends only");
  const double scale = std::max(1.0, max_abs(m));
  std::vector<Matrix<S>> kept;
  for (int j = 0; j < m.cols(); ++j) {
    Matrix<S> x = m.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (const Matrix<S>& q : kept) x -= (q.ct() * x)(0, 0) * q;
    double nrm = fro_norm(x);
    if (nrm <= rank_tol * scale) continue;
    kept.push_back(S(1.0 / nrm) * x);
  }
  Matrix<S> q(m.rows(), static_cast<int>(kept.size()));
  for (int j = 0; j < q.cols(); ++j) q.set_block(0, j, kept[j]);
  return q;
}

template <class S>
Matrix<S> projector_onto(const Matrix<S>& m, double rank_tol = 1e-9) {
  Matrix<S> q = orthonormalize_columns(m, rank_tol);
  return q * q.ct();
}

// Gap-style distance between column spans: Frobenius distance of the
// orthogonal projectors.
template <class S>
double subspace_distance(const Matrix<S>& a, const Matrix<S>& b,
                         double rank_tol = 1e-9) {
  return fro_norm(projector_onto(a, rank_tol) - projector_onto(b, rank_tol));
}

struct HermEig {
  std::vector<double> values;            // ascending
  Matrix<std::complex<double>> vectors;  // unitary
};

// Hermitian eigendecomposition through the real symmetric embedding
// H = A + iB  ->  [[A, -B], [B, A]]; each eigenvalue of H appears twice in
// the embedding and the complex eigenvectors are recovered as x + iy.
inline HermEig jacobi_eig_herm(const Matrix<std::complex<double>>& h) {
  const int n = h.rows();
  if (n != h.cols()) throw std::domain_error("jacobi_eig_herm: not square");
  Matrix<double> big(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      big(i, j) = h(i, j).real();
      big(n + i, n + j) = h(i, j).real();
      big(i, n + j) = -h(i, j).imag();
      big(n + i, j) = h(i, j).imag();
    }
  SymEig e = jacobi_eig_sym(big);
  HermEig out;
  out.values.reserve(n);
  std::vector<Matrix<std::complex<double>>> kept;
  const double drop_tol = 1e-7;
  for (int j = 0; j < 2 * n && static_cast<int>(kept.size()) < n; ++j) {
    Matrix<std::complex<double>> z(n, 1);
    for (int i = 0; i < n; ++i)
      z(i, 0) = {e.vectors(i, j), e.vectors(n + i, j)};
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : kept) z -= (q.ct() * z)(0, 0) * q;
    double nrm = fro_norm(z);
    if (nrm <= drop_tol) continue;  // i * (previous vector), skip
    kept.push_back(std::complex<double>(1.0 / nrm, 0.0) * z);
    out.values.push_back(e.values[j]);
  }
  if (static_cast<int>(kept.size()) != n)
    throw std::domain_error("jacobi_eig_herm: embedding extraction failed");
  out.vectors = Matrix<std::complex<double>>(n, n);
  for (int j = 0; j < n; ++j) out.vectors.set_block(0, j, kept[j]);
  return out;
}

// Rank, kernel, and inertia decisions for the floating backends go through
// eigenvalues rather than elimination pivots: the singular values of m are
// the square roots of the eigenvalues of m^dagger m, and columns with
// sigma <= rank_tol * max(1, sigma_max) count as null.
template <class S>
Matrix<S> float_kernel(const Matrix<S>& m, double rank_tol = 1e-9) {
  static_assert(!is_exact_v<S>, "float_kernel: floating backends only");
  if (m.cols() == 0) return Matrix<S>(0, 0);
  Matrix<S> normal = m.ct() * m;
  std::vector<double> values;
  Matrix<S> vectors(0, 0);
  if constexpr (is_complex_v<S>) {
    HermEig e = jacobi_eig_herm(normal);
    values = e.values;
    vectors = e.vectors;
  } else {
    SymEig e = jacobi_eig_sym(normal);
    values = e.values;
    vectors = e.vectors;
  }
  const double smax = std::sqrt(std::max(0.0, values.back()));
  // Squaring in m^* m limits singular value resolution to sqrt(machine
  // epsilon) relative to smax; clamp the cutoff to that floor.
  const double thr = std::max(rank_tol, 1e-7) * std::max(1.0, smax);
  Matrix<S> ker(m.cols(), 0);
  for (int j = 0; j < static_cast<int>(values.size()); ++j)
    if (std::sqrt(std::max(0.0, values[j])) <= thr)
      ker = hcat(ker, vectors.col(j));
  return ker;
}

template <class S>
int float_rank(const Matrix<S>& m, double rank_tol = 1e-9) {
  if (m.cols() == 0) return 0;
  return m.cols() - float_kernel(m, rank_tol).cols();
}

// Inertia of a hermitian floating matrix by eigenvalue signs, with the zero
// band rank_tol * max(1, |lambda|_max) wide.
template <class S>
Inertia float_inertia(const Matrix<S>& h, double rank_tol = 1e-9) {
  static_assert(!is_exact_v<S>, "float_inertia: floating backends only");
  if (h.rows() != h.cols()) throw std::domain_error("float_inertia: not square");
  if (h.rows() == 0) return Inertia{0, 0, 0};
  std::vector<double> values;
  if constexpr (is_complex_v<S>) values = jacobi_eig_herm(h).values;
  else values = jacobi_eig_sym(h).values;
  double lmax = 0;
  for (double v : values) lmax = std::max(lmax, std::abs(v));
  const double thr = rank_tol * std::max(1.0, lmax);
  Inertia in{0, 0, 0};
  for (double v : values) {
    if (v > thr) ++in.pos;
    else if (v < -thr) ++in.neg;
    else ++in.zero;
  }
  return in;
}

inline Matrix<double> sym_apply(const Matrix<double>& a,
                                double (*f)(double)) {
  SymEig e = jacobi_eig_sym(a);
  const int n = a.rows();
  Matrix<double> d(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = f(e.values[i]);
  return e.vectors * d * e.vectors.transpose();
}

// exp of a symmetric matrix.
inline Matrix<double> sym_exp(const Matrix<double>& a) {
  {
    Matrix<double> asym = a - a.transpose();
    if (fro_norm(asym) > 1e-8 * std::max(1.0, max_abs(a)))
      throw std::domain_error("sym_exp: input not symmetric");
  }
  return sym_apply(a, [](double x) { return std::exp(x); });
}

// log of a symmetric positive definite matrix; rejects non-PD input.
inline Matrix<double> spd_log(const Matrix<double>& a, double tol = 1e-12) {
  {
    Matrix<double> asym = a - a.transpose();
    if (fro_norm(asym) > 1e-8 * std::max(1.0, max_abs(a)))
      throw std::domain_error("spd_log: input not symmetric");
  }
  SymEig e = jacobi_eig_sym(a);
  const int n = a.rows();
  if (n > 0 && e.values.front() <= tol * std::max(1.0, max_abs(a)))
    throw std::domain_error("spd_log: input not positive definite");
  Matrix<double> d(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = std::log(e.values[i]);
  return e.vectors * d * e.vectors.transpose();
}

struct PolarFactors {
  Matrix<double> u;  // orthogonal
  Matrix<double> p;  // symmetric, g = u * exp(p)
};

// Polar decomposition g = u * exp(p) with p = (1/2) log(g^T g). When g is
// symplectic, u is orthogonal-symplectic and p is a symmetric Hamiltonian;
// callers that rely on this should pass check_symplectic = true.
inline PolarFactors polar_decompose(const Matrix<double>& g,
                                    double residual_tol = 1e-10,
                                    bool check_symplectic = false) {
  if (g.rows() != g.cols()) throw std::domain_error("polar_decompose: not square");
  PolarFactors out;
  out.p = 0.5 * spd_log(g.transpose() * g);
  out.u = g * sym_exp(-out.p);
  const int n = g.rows();
  double scale = std::max(1.0, max_abs(g));
  if (fro_norm(out.u.transpose() * out.u - Matrix<double>::identity(n)) >
      1e3 * residual_tol * scale)
    throw std::domain_error("polar_decompose: orthogonal factor check failed");
  if (check_symplectic) {
    if (n % 2 != 0)
      throw std::domain_error("polar_decompose: odd dimension cannot be symplectic");
    int half = n / 2;
    Matrix<double> omega(n, n);
    for (int i = 0; i < half; ++i) {
      omega(i, half + i) = -1.0;
      omega(half + i, i) = 1.0;
    }
    if (fro_norm(out.u.transpose() * omega * out.u - omega) >
        1e3 * residual_tol * scale)
      throw std::domain_error("polar_decompose: factor left the symplectic group");
    if (fro_norm(omega * out.p + out.p.transpose() * omega) >
        1e3 * residual_tol * scale)
      throw std::domain_error("polar_decompose: exponent left sp(2n)");
  }
  return out;
}

// Lower-triangular L with m = L L^dagger; rejects non-PD hermitian input.
inline Matrix<std::complex<double>> cholesky_herm(
    const Matrix<std::complex<double>>& m, double tol = 1e-12) {
  const int n = m.rows();
  if (n != m.cols()) throw std::domain_error("cholesky_herm: not square");
  Matrix<std::complex<double>> l(n, n);
  const double scale = std::max(1.0, max_abs(m));
  for (int j = 0; j < n; ++j) {
    std::complex<double> d = m(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * std::conj(l(j, k));
    if (d.real() <= tol * scale || std::abs(d.imag()) > 1e-8 * scale)
      throw std::domain_error("cholesky_herm: input not positive definite");
    double piv = std::sqrt(d.real());
    l(j, j) = piv;
    for (int i = j + 1; i < n; ++i) {
      std::complex<double> s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / piv;
    }
  }
  return l;
}

}  // namespace symplecta
