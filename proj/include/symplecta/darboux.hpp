#pragma once

// Constructive adapted bases: Darboux extension of an arbitrary subspace,
// J-unitary Darboux bases of coisotropic subspaces, J-invariant complements
// and splittings, symplectomorphism transporters, and reduction at an
// isotropic subspace.
//
// All constructions are deterministic: complements are chosen by elimination
// in input column order, and Gram-Schmidt processes columns in input order.

#include <optional>
#include <stdexcept>
#include <utility>

#include "symplecta/space.hpp"

namespace symplecta {

// Darboux basis of V adapted to a subspace W of type (n0, n+, n-).
// Columns are {e_1..e_n, f_1..f_n} with the blocks
//   e0 = e_1..e_{n0}, e+ = next n+, e- = next n-,
//   f0, f+, f- aligned the same way in the second half, such that
//   W = span{e0, e+, f+} and W^omega = span{e0, e-, f-}.
template <class S>
struct DarbouxBasis {
  OrbitType labels;
  Matrix<S> vectors;

  int n() const { return vectors.rows() / 2; }
  Matrix<S> e0() const { return vectors.block(0, 0, 2 * n(), labels.n0); }
  Matrix<S> eplus() const {
    return vectors.block(0, labels.n0, 2 * n(), labels.nplus);
  }
  Matrix<S> eminus() const {
    return vectors.block(0, labels.n0 + labels.nplus, 2 * n(), labels.nminus);
  }
  Matrix<S> f0() const { return vectors.block(0, n(), 2 * n(), labels.n0); }
  Matrix<S> fplus() const {
    return vectors.block(0, n() + labels.n0, 2 * n(), labels.nplus);
  }
  Matrix<S> fminus() const {
    return vectors.block(0, n() + labels.n0 + labels.nplus, 2 * n(),
                         labels.nminus);
  }
  Matrix<S> subspace_w() const { return hcat(hcat(e0(), eplus()), fplus()); }
  Matrix<S> subspace_womega() const {
    return hcat(hcat(e0(), eminus()), fminus());
  }
};

// A splitting associated to W: complements W+ of W0 in W, W- of W0 in
// W^omega, and an isotropic complement W0comp of W0 in (W+ + W-)^omega.
template <class S>
struct AssociatedSplitting {
  Matrix<S> wplus;
  Matrix<S> wminus;
  Matrix<S> w0comp;
};

// Inverse of a symplectic matrix: g^{-1} = -Omega g^t Omega.
template <class S>
Matrix<S> symplectic_inverse(const Matrix<S>& g) {
  Matrix<S> om = omega_matrix<S>(g.rows() / 2);
  return -(om * g.transpose() * om);
}

namespace detail {

// Columns of `pool`, taken in input order, that extend span(base) to
// span(base) + span(pool). Independence decisions use the same rank
// primitive as the classification code so dimensions stay consistent.
template <class S>
Matrix<S> greedy_complement(const Matrix<S>& base, const Matrix<S>& pool,
                            double rank_tol = 1e-9) {
  Matrix<S> picked(pool.rows(), 0);
  Matrix<S> cur = base;
  int cur_rank = rank_dispatch(cur, rank_tol);
  for (int j = 0; j < pool.cols(); ++j) {
    Matrix<S> cand = hcat(cur, pool.col(j));
    int r = rank_dispatch(cand, rank_tol);
    if (r > cur_rank) {
      picked = hcat(picked, pool.col(j));
      cur = cand;
      cur_rank = r;
    }
  }
  return picked;
}

// Given an isotropic basis w0 and a complement c of span(w0) inside a
// symplectic space Z in which span(w0) is Lagrangian, return f0 with
//   omega(w0_i, f0_j) = delta_ij,  omega(f0_i, f0_j) = 0,
// and span{w0, f0} = span{w0, c}. The isotropy correction is
// f0 = c' - (1/2) sum B(j,l) w0 with B the omega-Gram of the paired c'.
template <class S>
Matrix<S> lagrangian_pair(const Matrix<S>& w0, const Matrix<S>& c,
                          double rank_tol = 1e-9) {
  if (w0.cols() == 0) return Matrix<S>(w0.rows(), 0);
  if (c.cols() != w0.cols())
    throw std::domain_error("lagrangian_pair: complement dimension mismatch");
  Matrix<S> pairing = omega_gram(w0, c);
  Matrix<S> cp = c * inverse(pairing, rank_tol);
  Matrix<S> b = omega_gram(cp, cp);
  Matrix<S> m = (S(-1) / S(2)) * b;
  return cp + w0 * m.transpose();
}

// Split a basis of a symplectic subspace into Darboux pairs (e_i, f_i):
// take the first column as e, pair it with the first partner of nonzero
// omega, normalize, and reduce the rest against the pair.
template <class S>
std::pair<Matrix<S>, Matrix<S>> symplectic_pairs(Matrix<S> cols,
                                                 double rank_tol = 1e-9) {
  const int rows = cols.rows();
  Matrix<S> es(rows, 0), fs(rows, 0);
  const double thr = rank_tol * std::max(1.0, max_abs(cols));
  while (cols.cols() > 0) {
    if (cols.cols() == 1)
      throw std::domain_error("symplectic_pairs: odd leftover column");
    Matrix<S> e = cols.col(0);
    int partner = -1;
    for (int j = 1; j < cols.cols(); ++j) {
      S val = omega_form(e, cols.col(j));
      bool nonzero = is_exact_v<S> ? !scalar_traits<S>::is_zero(val, 0.0)
                                   : scalar_traits<S>::abs_approx(val) > thr;
      if (nonzero) {
        partner = j;
        break;
      }
    }
    if (partner < 0)
      throw std::domain_error("symplectic_pairs: degenerate restriction");
    Matrix<S> f = (S(1) / omega_form(e, cols.col(partner))) * cols.col(partner);
    Matrix<S> rest(rows, 0);
    for (int j = 1; j < cols.cols(); ++j) {
      if (j == partner) continue;
      Matrix<S> x = cols.col(j);
      x = x + omega_form(f, x) * e - omega_form(e, x) * f;
      rest = hcat(rest, x);
    }
    es = hcat(es, e);
    fs = hcat(fs, f);
    cols = rest;
  }
  return {es, fs};
}

// Modified Gram-Schmidt under the positive definite form g_J = omega(., J.).
// Floating backends only: normalization takes square roots.
template <class S>
Matrix<S> gj_orthonormalize(const Matrix<S>& x, const Matrix<S>& j,
                            double rank_tol = 1e-9) {
  static_assert(!is_exact_v<S>, "gj_orthonormalize: floating backends only");
  const double thr = rank_tol * std::max(1.0, max_abs(x));
  Matrix<S> us(x.rows(), 0);
  for (int c = 0; c < x.cols(); ++c) {
    Matrix<S> r = x.col(c);
    for (int i = 0; i < us.cols(); ++i) {
      Matrix<S> u = us.col(i);
      r = r - omega_form(u, Matrix<S>(j * r)) * u;
    }
    double nrm2 = scalar_traits<S>::real(omega_form(r, Matrix<S>(j * r)));
    if (nrm2 <= thr * thr) continue;
    us = hcat(us, Matrix<S>((S(1) / S(std::sqrt(nrm2))) * r));
  }
  return us;
}

// g_J-orthonormal family u_1..u_m inside a J-invariant subspace of
// dimension 2m: each accepted u also eliminates J u from the pool.
template <class S>
Matrix<S> unitary_gs(const Matrix<S>& x, const Matrix<S>& j,
                     double rank_tol = 1e-9) {
  static_assert(!is_exact_v<S>, "unitary_gs: floating backends only");
  const double thr = rank_tol * std::max(1.0, max_abs(x));
  Matrix<S> us(x.rows(), 0);
  for (int c = 0; c < x.cols(); ++c) {
    Matrix<S> r = x.col(c);
    for (int i = 0; i < us.cols(); ++i) {
      Matrix<S> u = us.col(i);
      Matrix<S> ju = j * u;
      r = r - omega_form(u, Matrix<S>(j * r)) * u;
      r = r - omega_form(ju, Matrix<S>(j * r)) * ju;
    }
    double nrm2 = scalar_traits<S>::real(omega_form(r, Matrix<S>(j * r)));
    if (nrm2 <= thr * thr) continue;
    us = hcat(us, Matrix<S>((S(1) / S(std::sqrt(nrm2))) * r));
  }
  return us;
}

}  // namespace detail

// Adapted Darboux basis for an arbitrary subspace W. If a splitting is
// supplied its invariants are validated; otherwise one is constructed by
// elimination in input column order.
template <class S>
DarbouxBasis<S> darboux_extend(
    const Matrix<S>& w,
    const std::optional<AssociatedSplitting<S>>& split = std::nullopt,
    double rank_tol = 1e-9) {
  static_assert(!is_complex_v<S>, "darboux_extend: real subspaces only");
  const OrbitType type = subspace_type(w, rank_tol);
  Matrix<S> w0 = radical(w, rank_tol);
  Matrix<S> womega = symplectic_complement(w, rank_tol);

  auto complements = [&](const Matrix<S>& supplied, const Matrix<S>& ambient,
                         int want, const char* which) {
    if (detail::rank_dispatch(Matrix<S>(hcat(w0, supplied)), rank_tol) !=
            type.n0 + supplied.cols() ||
        supplied.cols() != want ||
        detail::rank_dispatch(Matrix<S>(hcat(ambient, supplied)), rank_tol) !=
            ambient.cols())
      throw std::domain_error(std::string("darboux_extend: supplied ") + which +
                              " is not a complement of W0");
    return supplied;
  };

  Matrix<S> wplus =
      split ? complements(split->wplus, w, 2 * type.nplus, "Wplus")
            : detail::greedy_complement(w0, w, rank_tol);
  Matrix<S> wminus =
      split ? complements(split->wminus, womega, 2 * type.nminus, "Wminus")
            : detail::greedy_complement(w0, womega, rank_tol);

  Matrix<S> z = symplectic_complement(hcat(wplus, wminus), rank_tol);
  Matrix<S> c;
  if (split) {
    if (!is_zero_matrix(omega_gram(split->w0comp, split->w0comp),
                        is_exact_v<S> ? 0.0 : rank_tol))
      throw std::domain_error("darboux_extend: supplied W0comp not isotropic");
    c = complements(split->w0comp, z, type.n0, "W0comp");
  } else {
    c = detail::greedy_complement(w0, z, rank_tol);
  }
  Matrix<S> f0 = detail::lagrangian_pair(w0, c, rank_tol);

  auto [eplus, fplus] = detail::symplectic_pairs(wplus, rank_tol);
  auto [eminus, fminus] = detail::symplectic_pairs(wminus, rank_tol);

  Matrix<S> vectors = hcat(hcat(hcat(w0, eplus), eminus),
                           hcat(hcat(f0, fplus), fminus));
  if (!is_symplectic_matrix(vectors, is_exact_v<S> ? 0.0 : 1e3 * rank_tol))
    throw std::logic_error("darboux_extend: assembled basis is not Darboux");
  return DarbouxBasis<S>{type, vectors};
}

// J-unitary Darboux basis {e, Je} of a coisotropic subspace: the first n0
// columns span W^omega and the whole e-block together with the trailing
// J e-block spans W. Floating backends only (normalization).
template <class S>
DarbouxBasis<S> coisotropic_unitary_darboux(const Matrix<S>& w,
                                            const Matrix<S>& j,
                                            double rank_tol = 1e-9) {
  static_assert(!is_exact_v<S>, "coisotropic_unitary_darboux: float only");
  const OrbitType type = subspace_type(w, rank_tol);
  if (type.nminus != 0)
    throw std::domain_error("coisotropic_unitary_darboux: W not coisotropic");
  Matrix<S> w0 = radical(w, rank_tol);
  Matrix<S> e0 = detail::gj_orthonormalize(w0, j, rank_tol);
  // g_J-orthocomplement of W0 in W; J-invariant because W = W0^omega.
  Matrix<S> ker = detail::kernel_of(metric_gram(w0, w, j), rank_tol);
  Matrix<S> p = w * ker;
  Matrix<S> us = detail::unitary_gs(p, j, rank_tol);
  Matrix<S> e = hcat(e0, us);
  Matrix<S> vectors = hcat(e, Matrix<S>(j * e));
  if (!is_symplectic_matrix(vectors, 1e3 * rank_tol))
    throw std::logic_error("coisotropic_unitary_darboux: basis not Darboux");
  return DarbouxBasis<S>{type, vectors};
}

// The unique J-invariant complement of W0 in W, namely the omega(., J.)-
// orthocomplement. Requires W + J W0 to be J-invariant.
template <class S>
Matrix<S> j_invariant_complement(const Matrix<S>& w, const Matrix<S>& j,
                                 double rank_tol = 1e-9) {
  Matrix<S> w0 = radical(w, rank_tol);
  Matrix<S> s = hcat(w, Matrix<S>(j * w0));
  if (detail::rank_dispatch(Matrix<S>(hcat(s, Matrix<S>(j * s))), rank_tol) !=
      detail::rank_dispatch(s, rank_tol))
    throw std::domain_error("j_invariant_complement: W + JW0 not J-invariant");
  Matrix<S> ker = detail::kernel_of(metric_gram(w0, w, j), rank_tol);
  Matrix<S> comp = w * ker;
  if (detail::rank_dispatch(Matrix<S>(hcat(comp, Matrix<S>(j * comp))),
                            rank_tol) != comp.cols() ||
      detail::rank_dispatch(Matrix<S>(hcat(w0, comp)), rank_tol) !=
          w0.cols() + comp.cols())
    throw std::logic_error("j_invariant_complement: complement check failed");
  return comp;
}

// The omega(., J.)-orthogonal splitting (W0 + JW0, W+^J, W-^J) together
// with the adapted basis {e0, e+, e-, J e0, J e+, J e-}.
template <class S>
struct JSplitting {
  Matrix<S> w0_plus_jw0;
  Matrix<S> wplusJ;
  Matrix<S> wminusJ;
  DarbouxBasis<S> basis;
};

template <class S>
JSplitting<S> j_splitting(const Matrix<S>& w, const Matrix<S>& j,
                          double rank_tol = 1e-9) {
  static_assert(!is_exact_v<S>, "j_splitting: floating backends only");
  const OrbitType type = subspace_type(w, rank_tol);
  Matrix<S> w0 = radical(w, rank_tol);
  Matrix<S> p = j_invariant_complement(w, j, rank_tol);
  Matrix<S> t = hcat(hcat(w0, Matrix<S>(j * w0)), p);
  // g_J-orthocomplement of W0 + JW0 + W+^J in V.
  Matrix<S> conditions =
      metric_gram(t, Matrix<S>::identity(w.rows()), j);
  Matrix<S> r = detail::kernel_of(conditions, rank_tol);
  Matrix<S> e0 = detail::gj_orthonormalize(w0, j, rank_tol);
  Matrix<S> eplus = detail::unitary_gs(p, j, rank_tol);
  Matrix<S> eminus = detail::unitary_gs(r, j, rank_tol);
  Matrix<S> e = hcat(hcat(e0, eplus), eminus);
  Matrix<S> vectors = hcat(e, Matrix<S>(j * e));
  if (!is_symplectic_matrix(vectors, 1e3 * rank_tol))
    throw std::logic_error("j_splitting: adapted basis not Darboux");
  return JSplitting<S>{hcat(w0, Matrix<S>(j * w0)), p, r,
                       DarbouxBasis<S>{type, vectors}};
}

// Symplectomorphism carrying W onto W2, as the change of adapted bases.
template <class S>
Matrix<S> transporter(const Matrix<S>& w, const Matrix<S>& w2,
                      double rank_tol = 1e-9) {
  if (!(subspace_type(w, rank_tol) == subspace_type(w2, rank_tol)))
    throw std::domain_error("transporter: type mismatch");
  Matrix<S> b1 =
      darboux_extend(w, std::optional<AssociatedSplitting<S>>{}, rank_tol)
          .vectors;
  Matrix<S> b2 =
      darboux_extend(w2, std::optional<AssociatedSplitting<S>>{}, rank_tol)
          .vectors;
  return b2 * symplectic_inverse(b1);
}

// Reduction at an isotropic subspace W0: the reduced symplectic space
// W0^omega / W0 realized on a concrete Darboux complement, so that project
// and lift are plain matrix maps and the induced form is standard. When J
// is supplied the complement is the g_J-orthocomplement of W0 + JW0, the
// complement basis is {u, Ju}, and the induced complex structure is the
// standard one in reduced coordinates.
template <class S>
struct ReducedSpace {
  Matrix<S> w0;
  Matrix<S> complement;  // 2n x 2m Darboux basis of the complement
  bool with_j = false;
  double rank_tol = 1e-9;

  int n() const { return w0.rows() / 2; }
  int m() const { return complement.cols() / 2; }
  Matrix<S> omega_tilde() const { return omega_matrix<S>(m()); }
  Matrix<S> j_tilde() const {
    if (!with_j)
      throw std::domain_error("ReducedSpace: no complex structure supplied");
    return standard_j<S>(m());
  }
  // Coordinates of vectors from W0^omega in the complement, modulo W0.
  Matrix<S> project(const Matrix<S>& vecs) const {
    Matrix<S> x = coords_in_basis(hcat(w0, complement), vecs, rank_tol);
    return x.block(w0.cols(), 0, complement.cols(), vecs.cols());
  }
  Matrix<S> lift(const Matrix<S>& coords) const { return complement * coords; }
};

template <class S>
ReducedSpace<S> reduce_at(const Matrix<S>& w0,
                          const std::optional<Matrix<S>>& j = std::nullopt,
                          double rank_tol = 1e-9) {
  static_assert(!is_complex_v<S>, "reduce_at: real isotropic subspaces only");
  if (!is_zero_matrix(omega_gram(w0, w0), is_exact_v<S> ? 0.0 : rank_tol))
    throw std::domain_error("reduce_at: subspace is not isotropic");
  if (detail::rank_dispatch(w0, rank_tol) != w0.cols())
    throw std::domain_error("reduce_at: basis columns are dependent");
  if (j) {
    if constexpr (is_exact_v<S>) {
      throw std::domain_error(
          "reduce_at: J-orthonormal reduction runs on the float backend");
    } else {
      Matrix<S> t = hcat(w0, Matrix<S>((*j) * w0));
      Matrix<S> conditions =
          metric_gram(t, Matrix<S>::identity(w0.rows()), *j);
      Matrix<S> cspace = detail::kernel_of(conditions, rank_tol);
      Matrix<S> us = detail::unitary_gs(cspace, *j, rank_tol);
      Matrix<S> complement = hcat(us, Matrix<S>((*j) * us));
      return ReducedSpace<S>{w0, complement, true, rank_tol};
    }
  }
  DarbouxBasis<S> db =
      darboux_extend(w0, std::optional<AssociatedSplitting<S>>{}, rank_tol);
  Matrix<S> complement = hcat(db.eminus(), db.fminus());
  return ReducedSpace<S>{w0, complement, false, rank_tol};
}

}  // namespace symplecta
