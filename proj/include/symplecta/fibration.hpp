#pragma once

// Orbit fibrations over isotropic subspaces, and the retractions that project
// a stratum onto the orbit of the unitary group K_J inside it.
//
// The three total spaces fibered over the same base:
//   - subspaces of a fixed type, via their radical,
//   - complex Lagrangians, via the symplectic complement of their real trace,
//   - split Lagrangians, via the radical of the real trace of the upper half.
// membership_J decides whether a point already lies on the K_J-orbit of the
// model of its type; psi_J / iota_J identify the subspace orbit with split
// Lagrangians and embed the Lagrangian orbit into them.
//
// On the reduced symplectic space attached to a basepoint, compatible_involution
// produces the reflection I whose +-eigenspace recovers the basepoint, and
// mostow_decompose factors a symplectic matrix as k * exp(a) * exp(b) with k
// unitary and a, b in the I-parallel / I-reversing symmetric summands, in
// either order. gamma_J, beta_J and eta_J are the resulting retractions;
// chi_correction reorders the exponential factors of a split Lagrangian so
// that the two routes around the orbit square agree.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "symplecta/complex_lagrangian.hpp"
#include "symplecta/darboux.hpp"
#include "symplecta/linalg.hpp"
#include "symplecta/matrix.hpp"
#include "symplecta/numeric.hpp"
#include "symplecta/scalars.hpp"
#include "symplecta/space.hpp"

namespace symplecta {

namespace detail {

// Basis of span(a) cap span(b); empty-width matrix when the intersection is
// trivial. Works over every backend through the shared kernel dispatch.
template <class S>
Matrix<S> intersect_spans(const Matrix<S>& a, const Matrix<S>& b,
                          double rank_tol = 1e-9) {
  if (a.rows() != b.rows())
    throw std::invalid_argument("intersect_spans: row mismatch");
  if (a.cols() == 0 || b.cols() == 0) return Matrix<S>(a.rows(), 0);
  Matrix<S> k = kernel_of(hcat(a, b), rank_tol);
  if (k.cols() == 0) return Matrix<S>(a.rows(), 0);
  Matrix<S> combos = k.block(0, 0, a.cols(), k.cols());
  return column_basis(Matrix<S>(a * combos), rank_tol);
}

// dim(span(a) cap span(b)) for frames with independent columns.
template <class S>
int intersection_dim(const Matrix<S>& a, const Matrix<S>& b,
                     double rank_tol = 1e-9) {
  if (a.cols() == 0 || b.cols() == 0) return 0;
  return a.cols() + b.cols() - rank_dispatch(hcat(a, b), rank_tol);
}

// Frame of the J-eigenspace of eigenvalue sign * i inside the complexified
// space; the +i eigenspace is the Lagrangian on which kappa is positive.
template <class S>
Matrix<typename scalar_traits<S>::complex_type> j_eigenspace_span(
    const Matrix<S>& j, int sign, double rank_tol = 1e-9) {
  static_assert(!is_complex_v<S>, "j_eigenspace_span: real J required");
  using CS = typename scalar_traits<S>::complex_type;
  const int d = j.rows();
  Matrix<CS> shift = sign > 0
                         ? Matrix<CS>(Matrix<CS>::identity(d) -
                                      Matrix<CS>(unit_imag<CS>() * complexify(j)))
                         : Matrix<CS>(Matrix<CS>::identity(d) +
                                      Matrix<CS>(unit_imag<CS>() * complexify(j)));
  return column_basis(shift, rank_tol);
}

// Real span of a complex frame: columns of Re and Im together.
template <class CS>
Matrix<typename scalar_traits<CS>::real_type> real_span_of(
    const Matrix<CS>& frame, double rank_tol = 1e-9) {
  static_assert(is_complex_v<CS>, "real_span_of: complex frames required");
  using R = typename scalar_traits<CS>::real_type;
  return column_basis(Matrix<R>(hcat(real_part(frame), imag_part(frame))),
                      rank_tol);
}

// Reflection with +1 on span(plus) and -1 on span(minus); the two frames must
// fill the space.
template <class S>
Matrix<S> involution_from_pair(const Matrix<S>& plus, const Matrix<S>& minus,
                               double rank_tol = 1e-9) {
  const int d = plus.rows();
  if (minus.rows() != d || plus.cols() + minus.cols() != d)
    throw std::domain_error("involution_from_pair: eigenspaces do not fill");
  Matrix<S> u = hcat(plus, minus);
  Matrix<S> dd = Matrix<S>::identity(d);
  for (int l = plus.cols(); l < d; ++l) dd(l, l) = S(-1);
  return Matrix<S>(u * dd * inverse(u, rank_tol));
}

template <class S>
void validate_involution(const Matrix<S>& ii, const Matrix<S>& jt,
                         int plus_dim, double rank_tol) {
  const int d = ii.rows();
  const double scale = is_exact_v<S> ? 0.0 : 1e3 * rank_tol;
  if (!is_zero_matrix(Matrix<S>(ii * ii - Matrix<S>::identity(d)), scale))
    throw std::logic_error("compatible_involution: square is not the identity");
  if (!is_symplectic_matrix(ii, is_exact_v<S> ? 1e-9 : 1e3 * rank_tol))
    throw std::logic_error("compatible_involution: reflection not symplectic");
  if (!is_zero_matrix(Matrix<S>(ii * jt - jt * ii), scale))
    throw std::logic_error("compatible_involution: does not commute with J");
  if (rank_dispatch(Matrix<S>(ii - Matrix<S>::identity(d)), rank_tol) !=
      d - plus_dim)
    throw std::logic_error("compatible_involution: eigenspace dimensions");
}

// Gram-Schmidt for the hermitian form sign * kappa / 2, which must be
// positive definite on the frame.
inline Matrix<std::complex<double>> kappa_orthonormalize(
    const Matrix<std::complex<double>>& frame, double sign,
    double rank_tol = 1e-9) {
  using CD = std::complex<double>;
  Matrix<CD> out(frame.rows(), frame.cols());
  for (int j = 0; j < frame.cols(); ++j) {
    Matrix<CD> v = frame.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < j; ++k) {
        Matrix<CD> uk = out.col(k);
        CD c = CD(0.5 * sign) * kappa_gram(v, uk)(0, 0);
        v = Matrix<CD>(v - c * uk);
      }
    }
    double nn = 0.5 * sign * kappa_gram(v, v)(0, 0).real();
    if (nn < rank_tol)
      throw std::logic_error("kappa_orthonormalize: form is not definite");
    out.set_block(0, j, Matrix<CD>(CD(1.0 / std::sqrt(nn)) * v));
  }
  return out;
}

// Darboux basis adapted to a kernel-free split Lagrangian: the upper half
// contributes pairs (Re u, -Im u), the lower half (Re u, +Im u).
inline Matrix<double> split_adapted_basis(
    const SplitLagrangian<std::complex<double>>& s, double rank_tol = 1e-9) {
  Matrix<std::complex<double>> gp = kappa_orthonormalize(s.geq0, 1.0, rank_tol);
  Matrix<std::complex<double>> gm = kappa_orthonormalize(s.leq0, -1.0, rank_tol);
  Matrix<double> vectors =
      hcat(Matrix<double>(hcat(real_part(gp), real_part(gm))),
           Matrix<double>(hcat(Matrix<double>(-1.0 * imag_part(gp)),
                               imag_part(gm))));
  if (!is_symplectic_matrix(vectors, 1e3 * rank_tol))
    throw std::logic_error("split_adapted_basis: basis is not Darboux");
  return vectors;
}

// Model fiber points in the reduced space of dimension 2m: the symplectic
// subspace spanned by the first nplus pairs, and the Lagrangian / split
// frames with kappa positive on the first nplus columns.
template <class S>
Matrix<S> model_symplectic(int m, int nplus) {
  Matrix<S> w(2 * m, 2 * nplus);
  for (int k = 0; k < nplus; ++k) {
    w(k, k) = S(1);
    w(m + k, nplus + k) = S(1);
  }
  return w;
}

template <class CS>
Matrix<CS> model_lag_frame(int m, int nplus) {
  Matrix<CS> f(2 * m, m);
  for (int k = 0; k < m; ++k) {
    f(k, k) = CS(1);
    f(m + k, k) = k < nplus ? CS(-unit_imag<CS>()) : unit_imag<CS>();
  }
  return f;
}

template <class CS>
std::pair<Matrix<CS>, Matrix<CS>> model_split_frames(int m, int nplus) {
  Matrix<CS> bg(2 * m, nplus);
  Matrix<CS> bl(2 * m, m - nplus);
  for (int k = 0; k < nplus; ++k) {
    bg(k, k) = CS(1);
    bg(m + k, k) = CS(-unit_imag<CS>());
  }
  for (int k = 0; k < m - nplus; ++k) {
    bl(nplus + k, k) = CS(1);
    bl(m + nplus + k, k) = unit_imag<CS>();
  }
  return {bg, bl};
}

}  // namespace detail

// Real trace of the nonnegative half of a split Lagrangian; coisotropic of
// type (n0, n+, 0).
template <class CS>
Matrix<typename scalar_traits<CS>::real_type> real_upper(
    const SplitLagrangian<CS>& s, double rank_tol = 1e-9) {
  return detail::real_span_of(s.geq0, rank_tol);
}

// Drops the splitting; the halves overlap exactly in the kappa-kernel.
template <class CS>
ComplexLagrangian<CS> forget_splitting(const SplitLagrangian<CS>& s,
                                       double rank_tol = 1e-9) {
  return make_lagrangian(column_basis(hcat(s.geq0, s.leq0), rank_tol),
                         rank_tol);
}

// The three bundle projections onto isotropic subspaces. They commute with
// the forgetful maps: a split Lagrangian, its underlying Lagrangian and the
// real trace of its upper half all sit over the same base point.
template <class S>
Matrix<S> radical_maps(const Matrix<S>& w, double rank_tol = 1e-9) {
  static_assert(!is_complex_v<S>, "radical_maps: real subspaces only");
  return radical(w, rank_tol);
}

template <class CS>
Matrix<typename scalar_traits<CS>::real_type> radical_maps(
    const ComplexLagrangian<CS>& f, double rank_tol = 1e-9) {
  return real_projection(f, rank_tol).re_f0;
}

template <class CS>
Matrix<typename scalar_traits<CS>::real_type> radical_maps(
    const SplitLagrangian<CS>& s, double rank_tol = 1e-9) {
  return radical(real_upper(s, rank_tol), rank_tol);
}

// Whether W lies on the K_J-orbit of the model of its type: the J-invariant
// part W cap JW must be the full symplectic part.
template <class S>
bool membership_J(const Matrix<S>& w, const Matrix<S>& j,
                  double rank_tol = 1e-9) {
  static_assert(!is_complex_v<S>, "membership_J: real subspaces only");
  check_compatible_j(j, is_exact_v<S> ? 1e-9 : rank_tol);
  if (w.rows() != j.rows())
    throw std::invalid_argument("membership_J: dimension mismatch");
  if (detail::rank_dispatch(w, rank_tol) != w.cols())
    throw std::domain_error("membership_J: basis columns are dependent");
  OrbitType t = subspace_type(w, rank_tol);
  return detail::intersection_dim(w, Matrix<S>(j * w), rank_tol) ==
         2 * t.nplus;
}

// Whether F decomposes into its kappa-kernel and the two J-eigenspace pieces
// with the dimensions its type demands.
template <class CS>
bool membership_J(const ComplexLagrangian<CS>& f,
                  const Matrix<typename scalar_traits<CS>::real_type>& j,
                  double rank_tol = 1e-9) {
  using R = typename scalar_traits<CS>::real_type;
  check_compatible_j(j, is_exact_v<R> ? 1e-9 : rank_tol);
  OrbitType t = lag_type(f.frame, rank_tol);
  Matrix<CS> fj = detail::j_eigenspace_span(j, +1, rank_tol);
  Matrix<CS> fmj = detail::j_eigenspace_span(j, -1, rank_tol);
  return detail::intersection_dim(f.frame, fj, rank_tol) == t.nplus &&
         detail::intersection_dim(f.frame, fmj, rank_tol) == t.nminus;
}

// Whether the two halves of a split Lagrangian are carved out by J: away
// from the kernel, geq0 must sit in the +i eigenspace and leq0 in the -i one.
template <class CS>
bool membership_J(const SplitLagrangian<CS>& s,
                  const Matrix<typename scalar_traits<CS>::real_type>& j,
                  double rank_tol = 1e-9) {
  using R = typename scalar_traits<CS>::real_type;
  check_compatible_j(j, is_exact_v<R> ? 1e-9 : rank_tol);
  OrbitType t = split_type(s, rank_tol);
  Matrix<CS> fj = detail::j_eigenspace_span(j, +1, rank_tol);
  Matrix<CS> fmj = detail::j_eigenspace_span(j, -1, rank_tol);
  return detail::intersection_dim(s.geq0, fj, rank_tol) == t.nplus &&
         detail::intersection_dim(s.leq0, fmj, rank_tol) == t.nminus;
}

// Identifies the subspace orbit with split Lagrangians: the kernel half is
// the complexified radical, the definite halves are cut from W and W^omega by
// the J-eigenspaces. Requires membership.
template <class S>
SplitLagrangian<typename scalar_traits<S>::complex_type> psi_J(
    const Matrix<S>& w, const Matrix<S>& j, double rank_tol = 1e-9) {
  static_assert(!is_complex_v<S>, "psi_J: real subspaces only");
  using CS = typename scalar_traits<S>::complex_type;
  if (!membership_J(w, j, rank_tol))
    throw std::domain_error("psi_J: subspace is not adapted to J");
  Matrix<CS> w0c = complexify(radical(w, rank_tol));
  Matrix<CS> fj = detail::j_eigenspace_span(j, +1, rank_tol);
  Matrix<CS> fmj = detail::j_eigenspace_span(j, -1, rank_tol);
  Matrix<CS> fplus = detail::intersect_spans(complexify(w), fj, rank_tol);
  Matrix<CS> fminus = detail::intersect_spans(
      complexify(symplectic_complement(w, rank_tol)), fmj, rank_tol);
  return make_split(hcat(w0c, fplus), hcat(w0c, fminus), rank_tol);
}

// Splits an adapted complex Lagrangian along the J-eigenspaces; inverse to
// forget_splitting on the adapted locus.
template <class CS>
SplitLagrangian<CS> iota_J(
    const ComplexLagrangian<CS>& f,
    const Matrix<typename scalar_traits<CS>::real_type>& j,
    double rank_tol = 1e-9) {
  if (!membership_J(f, j, rank_tol))
    throw std::domain_error("iota_J: Lagrangian is not adapted to J");
  Matrix<CS> f0 = Matrix<CS>(
      f.frame * detail::kernel_of(Matrix<CS>(kappa_gram(f.frame).transpose()),
                                  rank_tol));
  Matrix<CS> fj = detail::j_eigenspace_span(j, +1, rank_tol);
  Matrix<CS> fmj = detail::j_eigenspace_span(j, -1, rank_tol);
  Matrix<CS> fplus = detail::intersect_spans(f.frame, fj, rank_tol);
  Matrix<CS> fminus = detail::intersect_spans(f.frame, fmj, rank_tol);
  return make_split(hcat(f0, fplus), hcat(f0, fminus), rank_tol);
}

template <class CS>
ComplexLagrangian<CS> iota_J_inv(const SplitLagrangian<CS>& s,
                                 double rank_tol = 1e-9) {
  return forget_splitting(s, rank_tol);
}

// A compatible reflection together with the complex structure and the
// basepoint it reflects around, on a reduced space without radical.
template <class S, class B>
struct CompatibleTriple {
  Matrix<S> involution;
  Matrix<S> jt;
  B basepoint;
};

// Reflection fixing a J-invariant symplectic subspace and reversing its
// metric complement.
template <class S>
CompatibleTriple<S, Matrix<S>> compatible_involution(const Matrix<S>& w,
                                                     const Matrix<S>& jt,
                                                     double rank_tol = 1e-9) {
  static_assert(!is_complex_v<S>, "compatible_involution: real subspaces only");
  check_compatible_j(jt, is_exact_v<S> ? 1e-9 : rank_tol);
  if (w.rows() != jt.rows())
    throw std::invalid_argument("compatible_involution: dimension mismatch");
  if (detail::rank_dispatch(w, rank_tol) != w.cols())
    throw std::domain_error("compatible_involution: basis columns dependent");
  if (radical(w, rank_tol).cols() != 0)
    throw std::domain_error("compatible_involution: subspace has a radical");
  if (!same_span(Matrix<S>(jt * w), w, rank_tol))
    throw std::domain_error("compatible_involution: subspace not J-invariant");
  Matrix<S> comp = detail::kernel_of(
      metric_gram(w, Matrix<S>::identity(w.rows()), jt), rank_tol);
  Matrix<S> ii = detail::involution_from_pair(w, comp, rank_tol);
  detail::validate_involution(ii, jt, w.cols(), rank_tol);
  return {ii, jt, w};
}

// Reflection attached to an adapted kernel-free complex Lagrangian: +1 on the
// real span of F cap F_J, -1 on the real span of F cap F_{-J}.
template <class CS>
CompatibleTriple<typename scalar_traits<CS>::real_type, ComplexLagrangian<CS>>
compatible_involution(const ComplexLagrangian<CS>& f,
                      const Matrix<typename scalar_traits<CS>::real_type>& jt,
                      double rank_tol = 1e-9) {
  using R = typename scalar_traits<CS>::real_type;
  check_compatible_j(jt, is_exact_v<R> ? 1e-9 : rank_tol);
  if (lag_type(f.frame, rank_tol).n0 != 0)
    throw std::domain_error("compatible_involution: Lagrangian has a kernel");
  if (!membership_J(f, jt, rank_tol))
    throw std::domain_error("compatible_involution: Lagrangian not adapted");
  Matrix<CS> fj = detail::j_eigenspace_span(jt, +1, rank_tol);
  Matrix<CS> fmj = detail::j_eigenspace_span(jt, -1, rank_tol);
  Matrix<R> plus = detail::real_span_of(
      detail::intersect_spans(f.frame, fj, rank_tol), rank_tol);
  Matrix<R> minus = detail::real_span_of(
      detail::intersect_spans(f.frame, fmj, rank_tol), rank_tol);
  Matrix<R> ii = detail::involution_from_pair(plus, minus, rank_tol);
  detail::validate_involution(ii, jt, plus.cols(), rank_tol);
  return {ii, jt, f};
}

// Reflection attached to an adapted kernel-free split Lagrangian: +1 on the
// real span of the upper half, -1 on the real span of the lower half.
template <class CS>
CompatibleTriple<typename scalar_traits<CS>::real_type, SplitLagrangian<CS>>
compatible_involution(const SplitLagrangian<CS>& s,
                      const Matrix<typename scalar_traits<CS>::real_type>& jt,
                      double rank_tol = 1e-9) {
  using R = typename scalar_traits<CS>::real_type;
  check_compatible_j(jt, is_exact_v<R> ? 1e-9 : rank_tol);
  if (split_type(s, rank_tol).n0 != 0)
    throw std::domain_error("compatible_involution: splitting has a kernel");
  if (!membership_J(s, jt, rank_tol))
    throw std::domain_error("compatible_involution: splitting not adapted");
  Matrix<R> plus = detail::real_span_of(s.geq0, rank_tol);
  Matrix<R> minus = detail::real_span_of(s.leq0, rank_tol);
  Matrix<R> ii = detail::involution_from_pair(plus, minus, rank_tol);
  detail::validate_involution(ii, jt, plus.cols(), rank_tol);
  return {ii, jt, s};
}

// Factors of g = k * exp(first) * exp(second) with k unitary symplectic and
// the exponents in the symmetric summands that commute with the reflection
// (p_par) respectively anticommute with it (p_perp). perp_first records
// which of the two was written next to k.
struct MostowFactors {
  Matrix<double> k;
  Matrix<double> p_par;
  Matrix<double> p_perp;
  double residual = 0.0;
  int iterations = 0;
  bool perp_first = false;
};

// Two-exponential refinement of the polar decomposition. With S = g^t g the
// second exponent X solves log(exp(-X) S exp(-X)) having no component in the
// second summand; the fixed point is reached by damped Picard iteration from
// the polar initial guess, and the first exponent is then read off the same
// logarithm. Requires the reflection-symmetric setting of the reduced space,
// where the involution is an orthogonal matrix.
template <class B>
MostowFactors mostow_decompose(const Matrix<double>& g,
                               const CompatibleTriple<double, B>& triple,
                               bool perp_first = false,
                               double residual_tol = 1e-12,
                               int max_iter = 200) {
  const int d = g.rows();
  if (g.cols() != d || triple.involution.rows() != d)
    throw std::invalid_argument("mostow_decompose: dimension mismatch");
  MostowFactors out;
  out.perp_first = perp_first;
  if (d == 0) {
    out.k = Matrix<double>(0, 0);
    out.p_par = Matrix<double>(0, 0);
    out.p_perp = Matrix<double>(0, 0);
    return out;
  }
  if (!is_symplectic_matrix(g, 1e-6))
    throw std::domain_error("mostow_decompose: matrix is not symplectic");
  const Matrix<double>& ii = triple.involution;
  if (max_abs(Matrix<double>(ii - ii.transpose())) > 1e-8)
    throw std::domain_error("mostow_decompose: involution is not orthogonal");
  auto conj_part = [&](const Matrix<double>& x, double sgn) {
    return Matrix<double>(0.5 * (x + sgn * Matrix<double>(ii * x * ii)));
  };
  // +1 averages onto the summand commuting with the reflection.
  const double second_sign = perp_first ? 1.0 : -1.0;
  Matrix<double> s = g.transpose() * g;
  s = 0.5 * (s + s.transpose());
  Matrix<double> x = conj_part(Matrix<double>(0.5 * spd_log(s)), second_sign);
  Matrix<double> l(d, d);
  double step = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  double best = prev;
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    Matrix<double> em = sym_exp(Matrix<double>(-1.0 * x));
    Matrix<double> mm = em * s * em;
    mm = 0.5 * (mm + mm.transpose());
    l = 0.5 * spd_log(mm);
    Matrix<double> r = conj_part(l, second_sign);
    double off = max_abs(r);
    best = std::min(best, off);
    if (off <= residual_tol * std::max(1.0, max_abs(l))) {
      converged = true;
      break;
    }
    if (off > 0.9 * prev)
      step = std::max(0.0625, 0.5 * step);
    else
      step = std::min(1.0, 1.5 * step);
    x = Matrix<double>(x + step * r);
    prev = off;
  }
  if (!converged)
    throw std::domain_error(
        "mostow_decompose: no fixed point within iteration budget, best "
        "off-part " +
        std::to_string(best));
  Matrix<double> p = conj_part(l, -second_sign);
  out.k = g * sym_exp(Matrix<double>(-1.0 * x)) *
          sym_exp(Matrix<double>(-1.0 * p));
  out.p_par = perp_first ? x : p;
  out.p_perp = perp_first ? p : x;
  const double scale = std::max(1.0, max_abs(g));
  if (fro_norm(Matrix<double>(out.k.transpose() * out.k) -
               Matrix<double>::identity(d)) > 1e-6 * scale)
    throw std::logic_error("mostow_decompose: unitary factor drifted");
  if (max_abs(Matrix<double>(out.k * triple.jt - triple.jt * out.k)) >
      1e-6 * scale)
    throw std::logic_error(
        "mostow_decompose: unitary factor does not commute with J");
  const Matrix<double>& first = perp_first ? out.p_perp : out.p_par;
  const Matrix<double>& second = perp_first ? out.p_par : out.p_perp;
  out.residual = fro_norm(
      Matrix<double>(out.k * sym_exp(first) * sym_exp(second) - g));
  if (out.residual > 1e-6 * scale)
    throw std::logic_error(
        "mostow_decompose: factors do not reproduce the input");
  return out;
}

// Retraction of a subspace stratum onto the K_J-orbit: reduce at the radical,
// transport the model symplectic subspace onto the reduced image, keep only
// the unitary factor of the perp-first decomposition, and lift back.
template <class S>
Matrix<S> gamma_J(const Matrix<S>& w, const Matrix<S>& j,
                  double rank_tol = 1e-9, double residual_tol = 1e-12,
                  int max_iter = 200) {
  static_assert(!is_complex_v<S> && !is_exact_v<S>,
                "gamma_J: floating backends only");
  check_compatible_j(j, rank_tol);
  OrbitType t = subspace_type(w, rank_tol);
  Matrix<S> w0 = radical(w, rank_tol);
  ReducedSpace<S> red =
      reduce_at(w0, std::optional<Matrix<S>>(j), rank_tol);
  const int m = red.m();
  if (m == 0) return w;
  Matrix<S> wred = column_basis(red.project(w), rank_tol);
  Matrix<S> jt = red.j_tilde();
  Matrix<S> wstar = detail::model_symplectic<S>(m, t.nplus);
  auto triple = compatible_involution(wstar, jt, rank_tol);
  Matrix<S> b1 = darboux_extend(wstar, std::optional<AssociatedSplitting<S>>{},
                                rank_tol)
                     .vectors;
  Matrix<S> b2 = darboux_extend(wred, std::optional<AssociatedSplitting<S>>{},
                                rank_tol)
                     .vectors;
  Matrix<S> gt = b2 * symplectic_inverse(b1);
  MostowFactors mf =
      mostow_decompose(gt, triple, /*perp_first=*/true, residual_tol, max_iter);
  Matrix<S> out = hcat(w0, red.lift(Matrix<S>(mf.k * wstar)));
  if (!(subspace_type(out, rank_tol) == t))
    throw std::logic_error("gamma_J: output changed type");
  if (!same_span(radical(out, rank_tol), w0, rank_tol))
    throw std::logic_error("gamma_J: output moved off the fiber");
  if (!membership_J(out, j, 1e3 * rank_tol))
    throw std::logic_error("gamma_J: output missed the orbit");
  return out;
}

// Retraction of complex Lagrangians: reduce at the complement of the real
// trace, carry the model Lagrangian onto the reduced frame, keep the unitary
// factor of the par-first decomposition, and lift.
template <class CS>
ComplexLagrangian<CS> beta_J(
    const ComplexLagrangian<CS>& f,
    const Matrix<typename scalar_traits<CS>::real_type>& j,
    double rank_tol = 1e-9, double residual_tol = 1e-12, int max_iter = 200) {
  static_assert(!is_exact_v<CS>, "beta_J: floating backends only");
  using R = typename scalar_traits<CS>::real_type;
  check_compatible_j(j, rank_tol);
  OrbitType t = lag_type(f.frame, rank_tol);
  Matrix<R> w0 = real_projection(f, rank_tol).re_f0;
  ReducedSpace<R> red = reduce_at(w0, std::optional<Matrix<R>>(j), rank_tol);
  const int m = red.m();
  if (m == 0) return f;
  Matrix<CS> basis_c = complexify(Matrix<R>(hcat(w0, red.complement)));
  Matrix<CS> coords = coords_in_basis(basis_c, f.frame, rank_tol);
  Matrix<CS> fred_frame = column_basis(
      coords.block(w0.cols(), 0, 2 * m, f.frame.cols()), rank_tol);
  ComplexLagrangian<CS> fred = make_lagrangian(fred_frame, rank_tol);
  Matrix<R> jt = red.j_tilde();
  ComplexLagrangian<CS> fstar =
      make_lagrangian(detail::model_lag_frame<CS>(m, t.nplus), rank_tol);
  auto triple = compatible_involution(fstar, jt, rank_tol);
  Matrix<R> gt = lag_transporter(fstar, fred, rank_tol);
  MostowFactors mf = mostow_decompose(gt, triple, /*perp_first=*/false,
                                      residual_tol, max_iter);
  Matrix<CS> out_red = Matrix<CS>(complexify(mf.k) * fstar.frame);
  Matrix<CS> out_frame =
      hcat(complexify(w0), Matrix<CS>(complexify(red.complement) * out_red));
  ComplexLagrangian<CS> out = make_lagrangian(out_frame, rank_tol);
  if (!(lag_type(out.frame, rank_tol) == t))
    throw std::logic_error("beta_J: output changed type");
  if (!same_span(real_projection(out, rank_tol).re_f0, w0, rank_tol))
    throw std::logic_error("beta_J: output moved off the fiber");
  if (!membership_J(out, j, 1e3 * rank_tol))
    throw std::logic_error("beta_J: output missed the orbit");
  return out;
}

namespace detail {

template <class CS>
struct ReducedSplit {
  Matrix<typename scalar_traits<CS>::real_type> w0;
  ReducedSpace<typename scalar_traits<CS>::real_type> red;
  SplitLagrangian<CS> sred;
};

// Pushes a split Lagrangian into the reduced space of its radical, where the
// splitting loses its kernel.
template <class CS>
ReducedSplit<CS> reduce_split(
    const SplitLagrangian<CS>& s,
    const Matrix<typename scalar_traits<CS>::real_type>& j, double rank_tol) {
  using R = typename scalar_traits<CS>::real_type;
  Matrix<R> w0 = radical_maps(s, rank_tol);
  ReducedSpace<R> red = reduce_at(w0, std::optional<Matrix<R>>(j), rank_tol);
  const int m = red.m();
  Matrix<CS> basis_c = complexify(Matrix<R>(hcat(w0, red.complement)));
  auto project_half = [&](const Matrix<CS>& half) {
    Matrix<CS> coords = coords_in_basis(basis_c, half, rank_tol);
    return column_basis(coords.block(w0.cols(), 0, 2 * m, half.cols()),
                        rank_tol);
  };
  SplitLagrangian<CS> sred = make_split(project_half(s.geq0),
                                        project_half(s.leq0), rank_tol);
  return {w0, red, sred};
}

}  // namespace detail

// Retraction of split Lagrangians: the reduced transporter is cut to its
// orthogonal polar factor, which commutes with J, and both halves are lifted.
template <class CS>
SplitLagrangian<CS> eta_J(
    const SplitLagrangian<CS>& s,
    const Matrix<typename scalar_traits<CS>::real_type>& j,
    double rank_tol = 1e-9, double residual_tol = 1e-10) {
  static_assert(!is_exact_v<CS>, "eta_J: floating backends only");
  using R = typename scalar_traits<CS>::real_type;
  check_compatible_j(j, rank_tol);
  OrbitType t = split_type(s, rank_tol);
  if (s.n() == t.n0) return s;
  detail::ReducedSplit<CS> rs = detail::reduce_split(s, j, rank_tol);
  const int m = rs.red.m();
  auto frames = detail::model_split_frames<CS>(m, t.nplus);
  SplitLagrangian<CS> sstar = make_split(frames.first, frames.second, rank_tol);
  Matrix<R> b1 = detail::split_adapted_basis(sstar, rank_tol);
  Matrix<R> b2 = detail::split_adapted_basis(rs.sred, rank_tol);
  Matrix<R> gt = b2 * symplectic_inverse(b1);
  PolarFactors pf = polar_decompose(gt, residual_tol, /*check_symplectic=*/true);
  Matrix<CS> kc = complexify(pf.u);
  Matrix<CS> liftc = complexify(rs.red.complement);
  Matrix<CS> out_geq = hcat(complexify(rs.w0),
                            Matrix<CS>(liftc * Matrix<CS>(kc * frames.first)));
  Matrix<CS> out_leq = hcat(complexify(rs.w0),
                            Matrix<CS>(liftc * Matrix<CS>(kc * frames.second)));
  SplitLagrangian<CS> out = make_split(out_geq, out_leq, rank_tol);
  if (!(split_type(out, rank_tol) == t))
    throw std::logic_error("eta_J: output changed type");
  if (!same_span(radical_maps(out, rank_tol), rs.w0, rank_tol))
    throw std::logic_error("eta_J: output moved off the fiber");
  if (!membership_J(out, j, 1e3 * rank_tol))
    throw std::logic_error("eta_J: output missed the orbit");
  return out;
}

// Swaps the order of the two exponential factors of the reduced transporter
// of a split Lagrangian. The result lies in the same stratum over the same
// radical, is the identity when either definite half is absent or the input
// already sits on the orbit, and mediates between the two routes around the
// square formed by gamma_J and beta_J.
template <class CS>
SplitLagrangian<CS> chi_correction(
    const SplitLagrangian<CS>& s,
    const Matrix<typename scalar_traits<CS>::real_type>& j,
    double rank_tol = 1e-9, double residual_tol = 1e-12, int max_iter = 200) {
  static_assert(!is_exact_v<CS>, "chi_correction: floating backends only");
  using R = typename scalar_traits<CS>::real_type;
  check_compatible_j(j, rank_tol);
  OrbitType t = split_type(s, rank_tol);
  if (s.n() == t.n0) return s;
  detail::ReducedSplit<CS> rs = detail::reduce_split(s, j, rank_tol);
  const int m = rs.red.m();
  auto frames = detail::model_split_frames<CS>(m, t.nplus);
  SplitLagrangian<CS> sstar = make_split(frames.first, frames.second, rank_tol);
  Matrix<R> jt = rs.red.j_tilde();
  auto triple = compatible_involution(sstar, jt, rank_tol);
  Matrix<R> b1 = detail::split_adapted_basis(sstar, rank_tol);
  Matrix<R> b2 = detail::split_adapted_basis(rs.sred, rank_tol);
  Matrix<R> gt = b2 * symplectic_inverse(b1);
  MostowFactors mf = mostow_decompose(gt, triple, /*perp_first=*/false,
                                      residual_tol, max_iter);
  Matrix<R> reordered =
      mf.k * sym_exp(mf.p_perp) * sym_exp(mf.p_par);
  Matrix<CS> gc = complexify(reordered);
  Matrix<CS> liftc = complexify(rs.red.complement);
  Matrix<CS> out_geq = hcat(complexify(rs.w0),
                            Matrix<CS>(liftc * Matrix<CS>(gc * frames.first)));
  Matrix<CS> out_leq = hcat(complexify(rs.w0),
                            Matrix<CS>(liftc * Matrix<CS>(gc * frames.second)));
  SplitLagrangian<CS> out = make_split(out_geq, out_leq, rank_tol);
  if (!(split_type(out, rank_tol) == t))
    throw std::logic_error("chi_correction: output changed type");
  if (!same_span(radical_maps(out, rank_tol), rs.w0, rank_tol))
    throw std::logic_error("chi_correction: output moved off the fiber");
  return out;
}

}  // namespace symplecta
