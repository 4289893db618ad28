#pragma once

// Standard symplectic vector space (R^2n, omega), subspace classification,
// and compatible complex structures.
//
// Conventions, fixed once for the whole library:
//   basis order {e_1..e_n, f_1..f_n},
//   Omega = [[0, -1_n], [1_n, 0]],
//   omega(v, w) = w^t Omega v,  so omega(e_j, f_j) = +1,
//   kappa(v, w) = -i * conj(w)^t Omega v  on complexified vectors,
//   g_J(v, w) = omega(v, J w).

#include <stdexcept>
#include <string>

#include "symplecta/linalg.hpp"
#include "symplecta/matrix.hpp"
#include "symplecta/numeric.hpp"

namespace symplecta {

namespace detail {

// Structural decisions dispatch on the backend: exact elimination for the
// rational scalars, eigenvalue thresholds for the floating ones.
template <class S>
Matrix<S> kernel_of(const Matrix<S>& m, double rank_tol) {
  if constexpr (is_exact_v<S>) return nullspace(m, rank_tol);
  else return float_kernel(m, rank_tol);
}

template <class S>
int rank_dispatch(const Matrix<S>& m, double rank_tol) {
  if constexpr (is_exact_v<S>) return rank_of(m, rank_tol);
  else return float_rank(m, rank_tol);
}

template <class S>
Inertia inertia_dispatch(const Matrix<S>& h, double rank_tol) {
  if constexpr (is_exact_v<S>) return signature_by_congruence(h, rank_tol);
  else return float_inertia(h, rank_tol);
}

}  // namespace detail

template <class S>
Matrix<S> omega_matrix(int n) {
  Matrix<S> om(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    om(j, n + j) = S(0) - S(1);
    om(n + j, j) = S(1);
  }
  return om;
}

// Standard compatible complex structure: e_j -> f_j, f_j -> -e_j.
// Its matrix coincides with Omega in the standard basis.
template <class S>
Matrix<S> standard_j(int n) {
  return omega_matrix<S>(n);
}

template <class S>
S omega_form(const Matrix<S>& v, const Matrix<S>& w) {
  if (v.cols() != 1 || w.cols() != 1 || v.rows() != w.rows() || v.rows() % 2 != 0)
    throw std::invalid_argument("omega_form: expects column vectors in R^2n");
  const int n = v.rows() / 2;
  S acc(0);
  for (int j = 0; j < n; ++j)
    acc = acc + w(n + j, 0) * v(j, 0) - w(j, 0) * v(n + j, 0);
  return acc;
}

// Gram matrix G(j, l) = omega(a_j, b_l) of two column families.
template <class S>
Matrix<S> omega_gram(const Matrix<S>& a, const Matrix<S>& b) {
  if (a.rows() != b.rows() || a.rows() % 2 != 0)
    throw std::invalid_argument("omega_gram: row mismatch");
  Matrix<S> om = omega_matrix<S>(a.rows() / 2);
  return (b.transpose() * om * a).transpose();
}

// Gram matrix G(j, l) = g_J(a_j, b_l) = omega(a_j, J b_l).
template <class S>
Matrix<S> metric_gram(const Matrix<S>& a, const Matrix<S>& b, const Matrix<S>& j) {
  return omega_gram(a, j * b);
}

// Gram G(j, l) = kappa(a_j, b_l) = -i conj(b_l)^t Omega a_j; hermitian
// when b = a.
template <class S>
Matrix<S> kappa_gram(const Matrix<S>& a, const Matrix<S>& b) {
  static_assert(is_complex_v<S>, "kappa_gram: complexified vectors required");
  if (a.rows() != b.rows() || a.rows() % 2 != 0)
    throw std::invalid_argument("kappa_gram: row mismatch");
  Matrix<S> om = omega_matrix<S>(a.rows() / 2);
  S minus_i = -unit_imag<S>();
  return minus_i * (b.ct() * om * a).transpose();
}

template <class S>
Matrix<S> kappa_gram(const Matrix<S>& a) {
  return kappa_gram(a, a);
}

// Basis of W^omega = {v : omega(w, v) = 0 for all w in W}.
template <class S>
Matrix<S> symplectic_complement(const Matrix<S>& w, double rank_tol = 1e-9) {
  if (w.rows() % 2 != 0)
    throw std::invalid_argument("symplectic_complement: rows must be even");
  Matrix<S> om = omega_matrix<S>(w.rows() / 2);
  return detail::kernel_of(Matrix<S>((om * w).transpose()), rank_tol);
}

// Basis of the radical W cap W^omega. Requires independent columns; the
// radical is W * ker(Gram), which avoids intersecting ambient subspaces.
template <class S>
Matrix<S> radical(const Matrix<S>& w, double rank_tol = 1e-9) {
  Matrix<S> ker = detail::kernel_of(omega_gram(w, w), rank_tol);
  return w * ker;
}

// Orbit invariants (n0, n+, n-) of a subspace or complex Lagrangian:
// n0 the radical dimension, n+ and n- the symplectic/positivity counts,
// with n0 + n+ + n- = n always.
struct OrbitType {
  int n0 = 0;
  int nplus = 0;
  int nminus = 0;

  friend bool operator==(const OrbitType&, const OrbitType&) = default;

  int n() const { return n0 + nplus + nminus; }
  int subspace_dim() const { return n0 + 2 * nplus; }
  bool isotropic() const { return nplus == 0; }
  bool coisotropic() const { return nminus == 0; }
  bool lagrangian() const { return nplus == 0 && nminus == 0; }
  bool symplectic() const { return n0 == 0; }
};

// Type of a real subspace given by a basis matrix (2n x k, full column rank).
template <class S>
OrbitType subspace_type(const Matrix<S>& w, double rank_tol = 1e-9) {
  static_assert(!is_complex_v<S>, "subspace_type: real subspaces only");
  if (w.rows() % 2 != 0)
    throw std::invalid_argument("subspace_type: rows must be even");
  const int n = w.rows() / 2;
  if (detail::rank_dispatch(w, rank_tol) != w.cols())
    throw std::domain_error("subspace_type: basis columns are dependent");
  const int n0 = radical(w, rank_tol).cols();
  if ((w.cols() - n0) % 2 != 0)
    throw std::domain_error("subspace_type: inconsistent radical dimension");
  const int nplus = (w.cols() - n0) / 2;
  return OrbitType{n0, nplus, n - n0 - nplus};
}

// A complex Lagrangian is an n-dimensional omega-isotropic subspace of C^2n,
// given by a 2n x n frame.
template <class S>
bool is_lagrangian_frame(const Matrix<S>& f, double rank_tol = 1e-9) {
  static_assert(is_complex_v<S>, "is_lagrangian_frame: complex frames required");
  if (f.rows() % 2 != 0 || f.cols() != f.rows() / 2) return false;
  if (detail::rank_dispatch(f, rank_tol) != f.cols()) return false;
  Matrix<S> om = omega_matrix<S>(f.rows() / 2);
  Matrix<S> gram = f.transpose() * om * f;
  if constexpr (is_exact_v<S>) return is_zero_matrix(gram);
  else return max_abs(gram) <= rank_tol * std::max(1.0, max_abs(f));
}

// Type of a complex Lagrangian: inertia of the hermitian form kappa on it.
template <class S>
OrbitType lag_type(const Matrix<S>& f, double rank_tol = 1e-9) {
  if (!is_lagrangian_frame(f, rank_tol))
    throw std::domain_error("lag_type: frame is not Lagrangian");
  Inertia in = detail::inertia_dispatch(kappa_gram(f), rank_tol);
  return OrbitType{in.zero, in.pos, in.neg};
}

template <class S>
bool is_symplectic_matrix(const Matrix<S>& g, double tol = 1e-9) {
  if (g.rows() != g.cols() || g.rows() % 2 != 0) return false;
  Matrix<S> om = omega_matrix<S>(g.rows() / 2);
  Matrix<S> res = g.transpose() * om * g - om;
  if constexpr (is_exact_v<S>) return is_zero_matrix(res);
  else return max_abs(res) <= tol * std::max(1.0, max_abs(g));
}

// Compatible complex structure: J^2 = -1, J symplectic, g_J positive definite.
template <class S>
bool is_compatible_j(const Matrix<S>& j, double tol = 1e-9) {
  static_assert(!is_complex_v<S>, "is_compatible_j: real matrices only");
  if (j.rows() != j.cols() || j.rows() % 2 != 0) return false;
  const int n = j.rows() / 2;
  Matrix<S> jj = j * j + Matrix<S>::identity(2 * n);
  if constexpr (is_exact_v<S>) {
    if (!is_zero_matrix(jj)) return false;
  } else {
    if (max_abs(jj) > tol * std::max(1.0, max_abs(j))) return false;
  }
  if (!is_symplectic_matrix(j, tol)) return false;
  Matrix<S> gram = metric_gram(Matrix<S>::identity(2 * n),
                               Matrix<S>::identity(2 * n), j);
  Inertia in = detail::inertia_dispatch(gram, tol);
  return in.pos == 2 * n;
}

// Checked variant: throws naming the first failed invariant.
template <class S>
void check_compatible_j(const Matrix<S>& j, double tol = 1e-9) {
  static_assert(!is_complex_v<S>, "check_compatible_j: real matrices only");
  if (j.rows() != j.cols() || j.rows() % 2 != 0)
    throw std::domain_error("compatible J: matrix is not 2n x 2n");
  const int two_n = j.rows();
  Matrix<S> jj = j * j + Matrix<S>::identity(two_n);
  bool square_ok = is_exact_v<S>
                       ? is_zero_matrix(jj)
                       : max_abs(jj) <= tol * std::max(1.0, max_abs(j));
  if (!square_ok) throw std::domain_error("compatible J: J^2 != -1");
  if (!is_symplectic_matrix(j, tol))
    throw std::domain_error("compatible J: J is not symplectic");
  Matrix<S> id = Matrix<S>::identity(two_n);
  Inertia in = detail::inertia_dispatch(metric_gram(id, id, j), tol);
  if (in.pos != two_n)
    throw std::domain_error(
        "compatible J: omega(., J.) is not positive definite");
}

// Span equality of two column families: canonical echelon comparison on the
// exact backends, orthogonal projector distance on the floating ones.
template <class S>
bool same_span(const Matrix<S>& a, const Matrix<S>& b, double tol = 1e-9) {
  if (a.rows() != b.rows()) return false;
  if constexpr (is_exact_v<S>) {
    return same_colspan_exact(a, b);
  } else {
    if (detail::rank_dispatch(a, tol) != detail::rank_dispatch(b, tol))
      return false;
    return subspace_distance(a, b, tol) <= 1e3 * tol;
  }
}

// (1 -+ iJ) applied to a real basis: frames of the (+-i)-eigenspaces of J.
template <class RealS, class CS = typename scalar_traits<RealS>::complex_type>
Matrix<CS> j_eigenframe(const Matrix<RealS>& w, const Matrix<RealS>& j, int sign) {
  static_assert(!is_complex_v<RealS>, "j_eigenframe: real input");
  if (sign != +1 && sign != -1)
    throw std::invalid_argument("j_eigenframe: sign must be +-1");
  Matrix<CS> wc = complexify(w);
  Matrix<CS> jwc = complexify(Matrix<RealS>(j * w));
  CS unit_i = unit_imag<CS>();
  // sign=+1 projects onto the +i eigenspace: v - i J v.
  if (sign == +1) return wc - unit_i * jwc;
  return wc + unit_i * jwc;
}

}  // namespace symplecta
