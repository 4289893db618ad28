#pragma once

// Heisenberg groups H(n) of subspace stabilizers: structural elements with
// three matrix forms, the group law, Levi factorization of stabilizer
// elements, splitting homomorphisms, and the transporter acting on
// associated splittings.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symplecta/darboux.hpp"
#include "symplecta/space.hpp"

namespace symplecta {

// Element of H(n0, n+, n-), stored by its five parameter blocks. The matrix
// forms below are views of this one representation. Shapes: eplus, fplus are
// n0 x n+; eminus, fminus are n0 x n-; y is n0 x n0 subject to
// y - eplus fplus^t - eminus fminus^t being symmetric.
template <class S>
struct HeisenbergElement {
  Matrix<S> eplus;
  Matrix<S> eminus;
  Matrix<S> fplus;
  Matrix<S> fminus;
  Matrix<S> y;

  OrbitType shape() const {
    return OrbitType{y.rows(), eplus.cols(), eminus.cols()};
  }

  bool operator==(const HeisenbergElement& o) const {
    return eplus == o.eplus && eminus == o.eminus && fplus == o.fplus &&
           fminus == o.fminus && y == o.y;
  }
};

enum class HeisenbergForm { darboux, triangular, ziegler };

template <class S>
HeisenbergElement<S> make_heisenberg(const Matrix<S>& eplus,
                                     const Matrix<S>& eminus,
                                     const Matrix<S>& fplus,
                                     const Matrix<S>& fminus,
                                     const Matrix<S>& y,
                                     double rank_tol = 1e-9) {
  const int n0 = y.rows();
  if (y.cols() != n0 || eplus.rows() != n0 || eminus.rows() != n0 ||
      fplus.rows() != n0 || fminus.rows() != n0 ||
      fplus.cols() != eplus.cols() || fminus.cols() != eminus.cols())
    throw std::domain_error("heisenberg element: block shape mismatch");
  Matrix<S> defect = y - eplus * fplus.transpose() -
                     eminus * fminus.transpose();
  Matrix<S> skew = defect - defect.transpose();
  bool symmetric = is_exact_v<S>
                       ? is_zero_matrix(skew)
                       : max_abs(skew) <=
                             1e2 * rank_tol * std::max(1.0, max_abs(defect));
  if (!symmetric)
    throw std::domain_error(
        "heisenberg element: y - eplus fplus^t - eminus fminus^t "
        "must be symmetric");
  return HeisenbergElement<S>{eplus, eminus, fplus, fminus, y};
}

template <class S>
HeisenbergElement<S> heisenberg_identity(const OrbitType& shape) {
  return HeisenbergElement<S>{
      Matrix<S>(shape.n0, shape.nplus), Matrix<S>(shape.n0, shape.nminus),
      Matrix<S>(shape.n0, shape.nplus), Matrix<S>(shape.n0, shape.nminus),
      Matrix<S>(shape.n0, shape.n0)};
}

inline int heisenberg_dim(const OrbitType& shape) {
  return 2 * shape.n0 * shape.nplus + 2 * shape.n0 * shape.nminus +
         shape.n0 * (shape.n0 + 1) / 2;
}

namespace detail {

// Block offsets in the triangular basis order (e0, e+, f+, e-, f-, f0).
struct TriangularLayout {
  int n0, np, nm;
  int e0() const { return 0; }
  int ep() const { return n0; }
  int fp() const { return n0 + np; }
  int em() const { return n0 + 2 * np; }
  int fm() const { return n0 + 2 * np + nm; }
  int f0() const { return n0 + 2 * np + 2 * nm; }
  int total() const { return 2 * (n0 + np + nm); }
};

// Permutation with M_form = P M_triangular P^t; rows index the target
// ordering, columns the triangular one.
template <class S>
Matrix<S> form_permutation(const OrbitType& shape, HeisenbergForm form) {
  TriangularLayout lay{shape.n0, shape.nplus, shape.nminus};
  std::vector<std::pair<int, int>> ranges;  // (triangular offset, size)
  switch (form) {
    case HeisenbergForm::triangular:
      ranges = {{lay.e0(), lay.n0}, {lay.ep(), lay.np}, {lay.fp(), lay.np},
                {lay.em(), lay.nm}, {lay.fm(), lay.nm}, {lay.f0(), lay.n0}};
      break;
    case HeisenbergForm::darboux:
      ranges = {{lay.e0(), lay.n0}, {lay.ep(), lay.np}, {lay.em(), lay.nm},
                {lay.f0(), lay.n0}, {lay.fp(), lay.np}, {lay.fm(), lay.nm}};
      break;
    case HeisenbergForm::ziegler:
      ranges = {{lay.ep(), lay.np}, {lay.em(), lay.nm}, {lay.e0(), lay.n0},
                {lay.fp(), lay.np}, {lay.fm(), lay.nm}, {lay.f0(), lay.n0}};
      break;
  }
  Matrix<S> p(lay.total(), lay.total());
  int row = 0;
  for (const auto& [off, size] : ranges)
    for (int j = 0; j < size; ++j) p(row++, off + j) = S(1);
  return p;
}

template <class S>
Matrix<S> heisenberg_triangular(const HeisenbergElement<S>& h) {
  OrbitType t = h.shape();
  TriangularLayout lay{t.n0, t.nplus, t.nminus};
  Matrix<S> m = Matrix<S>::identity(lay.total());
  m.set_block(lay.e0(), lay.ep(), h.eplus);
  m.set_block(lay.e0(), lay.fp(), h.fplus);
  m.set_block(lay.e0(), lay.em(), h.eminus);
  m.set_block(lay.e0(), lay.fm(), h.fminus);
  m.set_block(lay.e0(), lay.f0(), h.y);
  m.set_block(lay.ep(), lay.f0(), h.fplus.transpose());
  m.set_block(lay.fp(), lay.f0(), Matrix<S>(-h.eplus.transpose()));
  m.set_block(lay.em(), lay.f0(), h.fminus.transpose());
  m.set_block(lay.fm(), lay.f0(), Matrix<S>(-h.eminus.transpose()));
  return m;
}

}  // namespace detail

template <class S>
Matrix<S> heisenberg_to_matrix(const HeisenbergElement<S>& h,
                               HeisenbergForm form = HeisenbergForm::darboux) {
  Matrix<S> tri = detail::heisenberg_triangular(h);
  if (form == HeisenbergForm::triangular) return tri;
  Matrix<S> p = detail::form_permutation<S>(h.shape(), form);
  return p * tri * p.transpose();
}

// Group law, read off from multiplying triangular matrix forms.
template <class S>
HeisenbergElement<S> heisenberg_compose(const HeisenbergElement<S>& a,
                                        const HeisenbergElement<S>& b) {
  if (!(a.shape() == b.shape()))
    throw std::domain_error("heisenberg compose: shape mismatch");
  Matrix<S> y = a.y + b.y + a.eplus * b.fplus.transpose() -
                a.fplus * b.eplus.transpose() +
                a.eminus * b.fminus.transpose() -
                a.fminus * b.eminus.transpose();
  return HeisenbergElement<S>{a.eplus + b.eplus, a.eminus + b.eminus,
                              a.fplus + b.fplus, a.fminus + b.fminus, y};
}

template <class S>
HeisenbergElement<S> heisenberg_inverse(const HeisenbergElement<S>& h) {
  Matrix<S> y = -h.y + h.eplus * h.fplus.transpose() -
                h.fplus * h.eplus.transpose() +
                h.eminus * h.fminus.transpose() -
                h.fminus * h.eminus.transpose();
  return HeisenbergElement<S>{Matrix<S>(-h.eplus), Matrix<S>(-h.eminus),
                              Matrix<S>(-h.fplus), Matrix<S>(-h.fminus), y};
}

// Coordinates lambda = (E+ E-), mu = (F+ F-), x = -Y used for Jacobi forms
// of higher degree.
template <class S>
struct ZieglerCoordinates {
  Matrix<S> lambda;
  Matrix<S> mu;
  Matrix<S> x;
};

template <class S>
ZieglerCoordinates<S> ziegler_convert(const HeisenbergElement<S>& h) {
  return ZieglerCoordinates<S>{hcat(h.eplus, h.eminus),
                               hcat(h.fplus, h.fminus), Matrix<S>(-h.y)};
}

template <class S>
HeisenbergElement<S> heisenberg_from_ziegler(const ZieglerCoordinates<S>& z,
                                             int nplus,
                                             double rank_tol = 1e-9) {
  const int n0 = z.x.rows();
  const int nminus = z.lambda.cols() - nplus;
  if (nminus < 0 || z.mu.cols() != z.lambda.cols() ||
      z.lambda.rows() != n0 || z.mu.rows() != n0 || z.x.cols() != n0)
    throw std::domain_error("ziegler coordinates: block shape mismatch");
  return make_heisenberg(z.lambda.block(0, 0, n0, nplus),
                         z.lambda.block(0, nplus, n0, nminus),
                         z.mu.block(0, 0, n0, nplus),
                         z.mu.block(0, nplus, n0, nminus), Matrix<S>(-z.x),
                         rank_tol);
}

// Levi factor of the stabilizer: a general-linear block on the radical and
// independent symplectic blocks on the two symplectic pieces.
template <class S>
struct LeviElement {
  Matrix<S> x;
  Matrix<S> gplus;
  Matrix<S> gminus;

  OrbitType shape() const {
    return OrbitType{x.rows(), gplus.rows() / 2, gminus.rows() / 2};
  }
};

template <class S>
LeviElement<S> make_levi(const Matrix<S>& x, const Matrix<S>& gplus,
                         const Matrix<S>& gminus, double rank_tol = 1e-9) {
  if (x.rows() != x.cols() || gplus.rows() != gplus.cols() ||
      gminus.rows() != gminus.cols() || gplus.rows() % 2 != 0 ||
      gminus.rows() % 2 != 0)
    throw std::domain_error("levi element: block shape mismatch");
  if (detail::rank_dispatch(x, rank_tol) != x.rows())
    throw std::domain_error("levi element: radical block is singular");
  double tol = 1e3 * rank_tol;
  if (!is_symplectic_matrix(gplus, tol) || !is_symplectic_matrix(gminus, tol))
    throw std::domain_error("levi element: symplectic block condition fails");
  return LeviElement<S>{x, gplus, gminus};
}

namespace detail {

template <class S>
Matrix<S> levi_triangular(const LeviElement<S>& l, double rank_tol = 1e-9) {
  OrbitType t = l.shape();
  TriangularLayout lay{t.n0, t.nplus, t.nminus};
  Matrix<S> m(lay.total(), lay.total());
  m.set_block(lay.e0(), lay.e0(), l.x);
  m.set_block(lay.f0(), lay.f0(),
              Matrix<S>(inverse(l.x, rank_tol).transpose()));
  const int np = t.nplus, nm = t.nminus;
  m.set_block(lay.ep(), lay.ep(), l.gplus.block(0, 0, np, np));
  m.set_block(lay.ep(), lay.fp(), l.gplus.block(0, np, np, np));
  m.set_block(lay.fp(), lay.ep(), l.gplus.block(np, 0, np, np));
  m.set_block(lay.fp(), lay.fp(), l.gplus.block(np, np, np, np));
  m.set_block(lay.em(), lay.em(), l.gminus.block(0, 0, nm, nm));
  m.set_block(lay.em(), lay.fm(), l.gminus.block(0, nm, nm, nm));
  m.set_block(lay.fm(), lay.em(), l.gminus.block(nm, 0, nm, nm));
  m.set_block(lay.fm(), lay.fm(), l.gminus.block(nm, nm, nm, nm));
  return m;
}

}  // namespace detail

// Splitting homomorphism into Sp(V), in the standard Darboux basis order.
template <class S>
Matrix<S> levi_embed(const LeviElement<S>& l, double rank_tol = 1e-9) {
  Matrix<S> p =
      detail::form_permutation<S>(l.shape(), HeisenbergForm::darboux);
  return p * detail::levi_triangular(l, rank_tol) * p.transpose();
}

template <class S>
LeviElement<S> levi_identity(const OrbitType& shape) {
  return LeviElement<S>{Matrix<S>::identity(shape.n0),
                        Matrix<S>::identity(2 * shape.nplus),
                        Matrix<S>::identity(2 * shape.nminus)};
}

namespace detail {

// Factor a stabilizer matrix, given in triangular-order coordinates of an
// adapted basis, as levi * heisenberg (heis_left = false) or
// heisenberg * levi (heis_left = true). Validates the stabilizer block
// structure. `exact_checks` is passed explicitly because the float
// entrypoint rationalizes its input: the arithmetic is then exact but the
// data carries the rationalization error, so checks stay tolerance-based.
template <class S>
std::pair<LeviElement<S>, HeisenbergElement<S>> factor_triangular(
    const Matrix<S>& gt, const OrbitType& t, bool heis_left, double rank_tol,
    bool exact_checks, const char* who) {
  const double scale = exact_checks ? 1.0 : std::max(1.0, max_abs(gt));
  auto small = [&](const Matrix<S>& b) {
    return exact_checks ? is_zero_matrix(b)
                        : max_abs(b) <= 1e3 * rank_tol * scale;
  };
  TriangularLayout lay{t.n0, t.nplus, t.nminus};
  const int np = t.nplus, nm = t.nminus, n0 = t.n0;
  // Columns of the W-pieces may not leave their allowed spans.
  bool stable =
      small(gt.block(lay.ep(), lay.e0(), 2 * np + 2 * nm + n0, n0)) &&
      small(gt.block(lay.em(), lay.ep(), 2 * nm + n0, 2 * np)) &&
      small(gt.block(lay.ep(), lay.em(), 2 * np, 2 * nm)) &&
      small(gt.block(lay.f0(), lay.em(), n0, 2 * nm));
  if (!stable)
    throw std::domain_error(std::string(who) +
                            ": g does not stabilize the subspace");
  Matrix<S> x = gt.block(lay.e0(), lay.e0(), n0, n0);
  Matrix<S> gplus(2 * np, 2 * np), gminus(2 * nm, 2 * nm);
  gplus.set_block(0, 0, gt.block(lay.ep(), lay.ep(), np, np));
  gplus.set_block(0, np, gt.block(lay.ep(), lay.fp(), np, np));
  gplus.set_block(np, 0, gt.block(lay.fp(), lay.ep(), np, np));
  gplus.set_block(np, np, gt.block(lay.fp(), lay.fp(), np, np));
  gminus.set_block(0, 0, gt.block(lay.em(), lay.em(), nm, nm));
  gminus.set_block(0, nm, gt.block(lay.em(), lay.fm(), nm, nm));
  gminus.set_block(nm, 0, gt.block(lay.fm(), lay.em(), nm, nm));
  gminus.set_block(nm, nm, gt.block(lay.fm(), lay.fm(), nm, nm));
  LeviElement<S> levi{x, gplus, gminus};
  Matrix<S> linv = levi_triangular(
      LeviElement<S>{inverse(x, rank_tol), symplectic_inverse(gplus),
                     symplectic_inverse(gminus)},
      rank_tol);
  Matrix<S> ht = heis_left ? gt * linv : linv * gt;
  HeisenbergElement<S> h{ht.block(lay.e0(), lay.ep(), n0, np),
                         ht.block(lay.e0(), lay.em(), n0, nm),
                         ht.block(lay.e0(), lay.fp(), n0, np),
                         ht.block(lay.e0(), lay.fm(), n0, nm),
                         ht.block(lay.e0(), lay.f0(), n0, n0)};
  Matrix<S> defect = h.y - h.eplus * h.fplus.transpose() -
                     h.eminus * h.fminus.transpose();
  Matrix<S> residual = ht - heisenberg_triangular(h);
  if (!small(residual) || !small(Matrix<S>(defect - defect.transpose())))
    throw std::domain_error(std::string(who) + ": g is not symplectic");
  return {levi, h};
}

inline Matrix<Rational> rationalize_matrix(const Matrix<double>& m,
                                           double tol) {
  Matrix<Rational> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = rationalize(m(i, j), tol);
  return out;
}

}  // namespace detail

// Factor g, a symplectic matrix stabilizing the subspace of the adapted
// basis, as g = levi_embed(levi) * heisenberg_to_matrix(heis, darboux) in
// the coordinates of that basis. The factorization is triangular and runs
// in exact arithmetic; float inputs are rationalized first.
template <class S>
std::pair<LeviElement<S>, HeisenbergElement<S>> factor_stabilizer(
    const Matrix<S>& g, const DarbouxBasis<S>& basis,
    double rank_tol = 1e-9) {
  static_assert(!is_complex_v<S>, "factor_stabilizer: real backends only");
  if constexpr (is_exact_v<S>) {
    if (!is_symplectic_matrix(g))
      throw std::domain_error("factor_stabilizer: g is not symplectic");
    Matrix<S> in_basis = symplectic_inverse(basis.vectors) * g * basis.vectors;
    Matrix<S> p =
        detail::form_permutation<S>(basis.labels, HeisenbergForm::darboux);
    Matrix<S> gt = p.transpose() * in_basis * p;
    return detail::factor_triangular(gt, basis.labels, false, rank_tol, true,
                                     "factor_stabilizer");
  } else {
    if (!is_symplectic_matrix(g, 1e3 * rank_tol))
      throw std::domain_error("factor_stabilizer: g is not symplectic");
    Matrix<Rational> gq = detail::rationalize_matrix(g, rank_tol);
    Matrix<Rational> bq =
        detail::rationalize_matrix(basis.vectors, rank_tol);
    Matrix<Rational> in_basis = inverse(bq) * gq * bq;
    Matrix<Rational> p = detail::form_permutation<Rational>(
        basis.labels, HeisenbergForm::darboux);
    Matrix<Rational> gt = p.transpose() * in_basis * p;
    auto [lq, hq] = detail::factor_triangular(gt, basis.labels, false,
                                              rank_tol, false,
                                              "factor_stabilizer");
    LeviElement<S> levi{to_float_matrix(lq.x), to_float_matrix(lq.gplus),
                        to_float_matrix(lq.gminus)};
    HeisenbergElement<S> heis{
        to_float_matrix(hq.eplus), to_float_matrix(hq.eminus),
        to_float_matrix(hq.fplus), to_float_matrix(hq.fminus),
        to_float_matrix(hq.y)};
    return {levi, heis};
  }
}

// The unique Heisenberg element carrying splitting s1 of W to splitting s2,
// through the basis-change transporter factored as heisenberg * levi: the
// Levi factor fixes the coordinate pieces of s1, so the Heisenberg part
// alone moves the splitting.
template <class S>
HeisenbergElement<S> splitting_transporter(const Matrix<S>& w,
                                           const AssociatedSplitting<S>& s1,
                                           const AssociatedSplitting<S>& s2,
                                           double rank_tol = 1e-9) {
  DarbouxBasis<S> b1 = darboux_extend(
      w, std::optional<AssociatedSplitting<S>>(s1), rank_tol);
  DarbouxBasis<S> b2 = darboux_extend(
      w, std::optional<AssociatedSplitting<S>>(s2), rank_tol);
  Matrix<S> in_basis = symplectic_inverse(b1.vectors) * b2.vectors;
  Matrix<S> p =
      detail::form_permutation<S>(b1.labels, HeisenbergForm::darboux);
  Matrix<S> gt = p.transpose() * in_basis * p;
  return detail::factor_triangular(gt, b1.labels, true, rank_tol,
                                   is_exact_v<S>, "splitting_transporter")
      .second;
}

// Splitting homomorphism through the indefinite unitary group: (x, u) with
// u preserving the signature form diag(1, -1) lands in Sp(V) stabilizing
// the basepoint complex Lagrangian of the matching type.
template <class RealS, class CS = typename scalar_traits<RealS>::complex_type>
Matrix<RealS> unitary_embed(const Matrix<RealS>& x, const Matrix<CS>& u,
                            int nplus, int nminus, double rank_tol = 1e-9) {
  static_assert(!is_complex_v<RealS>, "unitary_embed: real output backend");
  const int n0 = x.rows();
  if (x.cols() != n0 || u.rows() != nplus + nminus || u.cols() != u.rows())
    throw std::domain_error("unitary_embed: block shape mismatch");
  if (detail::rank_dispatch(x, rank_tol) != n0)
    throw std::domain_error("unitary_embed: radical block is singular");
  Matrix<CS> sig(nplus + nminus, nplus + nminus);
  for (int j = 0; j < nplus; ++j) sig(j, j) = CS(1);
  for (int j = nplus; j < nplus + nminus; ++j) sig(j, j) = CS(-1);
  Matrix<CS> defect = u.ct() * sig * u - sig;
  bool unitary = is_exact_v<CS> ? is_zero_matrix(defect)
                                : max_abs(defect) <= 1e3 * rank_tol;
  if (!unitary)
    throw std::domain_error("unitary_embed: u is not indefinite-unitary");
  Matrix<RealS> re = real_part(u), im = imag_part(u);
  auto rb = [&](int r0, int c0, int rows, int cols, const Matrix<RealS>& src,
                bool negate) {
    Matrix<RealS> b = src.block(r0, c0, rows, cols);
    return negate ? Matrix<RealS>(-b) : b;
  };
  const int n = n0 + nplus + nminus;
  Matrix<RealS> m(2 * n, 2 * n);
  m.set_block(0, 0, x);
  m.set_block(n, n, Matrix<RealS>(inverse(x, rank_tol).transpose()));
  // Row/column offsets in the Darboux order (e0, e+, e-, f0, f+, f-).
  const int ep = n0, em = n0 + nplus;
  const int fp = n + n0, fm = n + n0 + nplus;
  m.set_block(ep, ep, rb(0, 0, nplus, nplus, re, false));
  m.set_block(ep, em, rb(0, nplus, nplus, nminus, re, false));
  m.set_block(ep, fp, rb(0, 0, nplus, nplus, im, true));
  m.set_block(ep, fm, rb(0, nplus, nplus, nminus, im, false));
  m.set_block(em, ep, rb(nplus, 0, nminus, nplus, re, false));
  m.set_block(em, em, rb(nplus, nplus, nminus, nminus, re, false));
  m.set_block(em, fp, rb(nplus, 0, nminus, nplus, im, true));
  m.set_block(em, fm, rb(nplus, nplus, nminus, nminus, im, false));
  m.set_block(fp, ep, rb(0, 0, nplus, nplus, im, false));
  m.set_block(fp, em, rb(0, nplus, nplus, nminus, im, false));
  m.set_block(fp, fp, rb(0, 0, nplus, nplus, re, false));
  m.set_block(fp, fm, rb(0, nplus, nplus, nminus, re, true));
  m.set_block(fm, ep, rb(nplus, 0, nminus, nplus, im, true));
  m.set_block(fm, em, rb(nplus, nplus, nminus, nminus, im, true));
  m.set_block(fm, fp, rb(nplus, 0, nminus, nplus, re, true));
  m.set_block(fm, fm, rb(nplus, nplus, nminus, nminus, re, false));
  return m;
}

}  // namespace symplecta
