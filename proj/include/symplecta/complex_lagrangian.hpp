#pragma once

// Complex Lagrangian subspaces of V^C: frames, kappa-type classification,
// Moebius action, splittings by the sign of kappa, adapted real Darboux
// bases, real projections, the eigenspaces of a compatible J, and the
// twistor correspondence for definite splittings.

#include <optional>
#include <stdexcept>
#include <utility>

#include "symplecta/darboux.hpp"
#include "symplecta/space.hpp"

namespace symplecta {

// An n-dimensional omega-isotropic subspace of C^2n, stored as a frame of
// n independent columns. Frames are considered up to right GL(n, C) action;
// make_lagrangian canonicalizes (reduced column echelon on the exact
// backends, orthonormal columns on the floating ones).
template <class S>
struct ComplexLagrangian {
  Matrix<S> frame;

  int n() const { return frame.rows() / 2; }
};

template <class S>
ComplexLagrangian<S> make_lagrangian(const Matrix<S>& frame,
                                     double rank_tol = 1e-9) {
  static_assert(is_complex_v<S>, "make_lagrangian: complex frames required");
  if (frame.rows() % 2 != 0 || frame.cols() != frame.rows() / 2)
    throw std::domain_error("make_lagrangian: frame must be 2n x n");
  if (detail::rank_dispatch(frame, rank_tol) != frame.cols())
    throw std::domain_error("make_lagrangian: frame columns are dependent");
  Matrix<S> om = omega_matrix<S>(frame.rows() / 2);
  Matrix<S> gram = frame.transpose() * om * frame;
  bool isotropic = is_exact_v<S>
                       ? is_zero_matrix(gram)
                       : max_abs(gram) <=
                             1e2 * rank_tol * std::max(1.0, max_abs(frame));
  if (!isotropic)
    throw std::domain_error("make_lagrangian: frame is not omega-isotropic");
  if constexpr (is_exact_v<S>)
    return ComplexLagrangian<S>{canonical_colspan(frame, rank_tol)};
  else
    return ComplexLagrangian<S>{orthonormalize_columns(frame, rank_tol)};
}

// Moebius action of (complexified) symplectic matrices on frames.
template <class S>
ComplexLagrangian<S> mobius_act(const Matrix<S>& g,
                                const ComplexLagrangian<S>& f,
                                double rank_tol = 1e-9) {
  return make_lagrangian(Matrix<S>(g * f.frame), rank_tol);
}

// A Lagrangian together with the two halves of a kappa-sign splitting:
// geq0 carries kappa positive semidefinite, leq0 negative semidefinite,
// they are kappa-orthogonal, and they intersect exactly in the kappa-kernel.
template <class S>
struct SplitLagrangian {
  Matrix<S> geq0;
  Matrix<S> leq0;

  int n() const { return geq0.rows() / 2; }
};

template <class S>
OrbitType split_type(const SplitLagrangian<S>& s, double rank_tol = 1e-9) {
  Inertia plus = detail::inertia_dispatch(kappa_gram(s.geq0), rank_tol);
  return OrbitType{plus.zero, plus.pos,
                   s.n() - plus.zero - plus.pos};
}

// Basis of the common kernel F0 = geq0 cap leq0.
template <class S>
Matrix<S> split_kernel(const SplitLagrangian<S>& s, double rank_tol = 1e-9) {
  Matrix<S> ker =
      detail::kernel_of(Matrix<S>(kappa_gram(s.geq0).transpose()), rank_tol);
  return s.geq0 * ker;
}

template <class S>
SplitLagrangian<S> make_split(const Matrix<S>& geq0, const Matrix<S>& leq0,
                              double rank_tol = 1e-9) {
  static_assert(is_complex_v<S>, "make_split: complex frames required");
  if (geq0.rows() != leq0.rows() || geq0.rows() % 2 != 0)
    throw std::domain_error("make_split: row mismatch");
  const int n = geq0.rows() / 2;
  Matrix<S> whole = hcat(geq0, leq0);
  if (detail::rank_dispatch(geq0, rank_tol) != geq0.cols() ||
      detail::rank_dispatch(leq0, rank_tol) != leq0.cols())
    throw std::domain_error("make_split: half frames must be independent");
  Matrix<S> om = omega_matrix<S>(n);
  Matrix<S> gram = whole.transpose() * om * whole;
  bool isotropic = is_exact_v<S>
                       ? is_zero_matrix(gram)
                       : max_abs(gram) <=
                             1e2 * rank_tol * std::max(1.0, max_abs(whole));
  if (!isotropic || detail::rank_dispatch(whole, rank_tol) != n)
    throw std::domain_error("make_split: halves must span a Lagrangian");
  Inertia plus = detail::inertia_dispatch(kappa_gram(geq0), rank_tol);
  if (plus.neg != 0)
    throw std::domain_error("make_split: kappa on geq0 is not >= 0");
  Inertia minus = detail::inertia_dispatch(kappa_gram(leq0), rank_tol);
  if (minus.pos != 0)
    throw std::domain_error("make_split: kappa on leq0 is not <= 0");
  Matrix<S> cross = kappa_gram(geq0, leq0);
  bool cross_zero = is_exact_v<S>
                        ? is_zero_matrix(cross)
                        : max_abs(cross) <=
                              1e2 * rank_tol * std::max(1.0, max_abs(whole));
  if (!cross_zero)
    throw std::domain_error("make_split: halves are not kappa-orthogonal");
  if (plus.zero != minus.zero ||
      detail::rank_dispatch(whole, rank_tol) !=
          geq0.cols() + leq0.cols() - plus.zero)
    throw std::domain_error(
        "make_split: intersection does not match the kappa kernels");
  return SplitLagrangian<S>{geq0, leq0};
}

// Canonical splitting of F by the sign of the kappa-selfadjoint operator
// measured against the positive definite hermitian form omega(., J conj(.)).
// Returns the splitting (F0 + F_{kappa>0}, F0 + F_{kappa<0}).
template <class S>
SplitLagrangian<S> j_split(const ComplexLagrangian<S>& f,
                           const Matrix<typename scalar_traits<S>::real_type>& j,
                           double rank_tol = 1e-9) {
  static_assert(!is_exact_v<S>, "j_split: floating backends only");
  const Matrix<S>& fr = f.frame;
  Matrix<S> jc = complexify(j);
  Matrix<S> om = omega_matrix<S>(f.n());
  // h(v, w) = omega(v, J conj(w)), hermitian PD. Gram matrices here store
  // the form at (j, l) with the row index linear; the operator acting on
  // coordinate vectors (v, w -> w^* M v) is the transpose of that Gram.
  Matrix<S> hmat = -(fr.ct() * om * jc * fr);
  Matrix<S> kmat = kappa_gram(fr).transpose();
  Matrix<S> l = cholesky_herm(hmat);
  Matrix<S> li = inverse(l, rank_tol);
  Matrix<S> middle = li * kmat * li.ct();
  HermEig eig = jacobi_eig_herm(Matrix<std::complex<double>>(middle));
  double lmax = 0.0;
  for (double v : eig.values) lmax = std::max(lmax, std::abs(v));
  const double band = rank_tol * std::max(1.0, lmax);
  Matrix<S> plus(fr.cols(), 0), minus(fr.cols(), 0);
  for (int k = 0; k < static_cast<int>(eig.values.size()); ++k) {
    Matrix<S> x = li.ct() * eig.vectors.col(k);
    if (eig.values[k] >= -band) plus = hcat(plus, x);
    if (eig.values[k] <= band) minus = hcat(minus, x);
  }
  return make_split(Matrix<S>(fr * plus), Matrix<S>(fr * minus), rank_tol);
}

// Real Darboux basis adapted to a complex Lagrangian: F decomposes
// kappa-orthogonally into kernel, positive, and negative parts; positive
// vectors scaled to kappa = 2 give Darboux pairs (Re v, -Im v), negative
// ones scaled to kappa = -2 give (Re v, Im v), and the kernel is the
// complexification of a real isotropic span completed by Lagrangian pairing.
template <class S>
DarbouxBasis<typename scalar_traits<S>::real_type> adapted_basis_lagrangianC(
    const ComplexLagrangian<S>& f, double rank_tol = 1e-9) {
  static_assert(is_complex_v<S> && !is_exact_v<S>,
                "adapted_basis_lagrangianC: complex float frames");
  using R = typename scalar_traits<S>::real_type;
  const Matrix<S>& fr = f.frame;
  const int n = f.n();
  // Transpose: the coordinate operator of the form, not its Gram.
  HermEig eig = jacobi_eig_herm(
      Matrix<std::complex<double>>(kappa_gram(fr).transpose()));
  double lmax = 0.0;
  for (double v : eig.values) lmax = std::max(lmax, std::abs(v));
  const double band = rank_tol * std::max(1.0, lmax);
  Matrix<R> eplus(2 * n, 0), fplus(2 * n, 0);
  Matrix<R> eminus(2 * n, 0), fminus(2 * n, 0);
  Matrix<S> zero_part(2 * n, 0);
  for (int k = 0; k < static_cast<int>(eig.values.size()); ++k) {
    Matrix<S> v = fr * eig.vectors.col(k);
    double lambda = eig.values[k];
    if (lambda > band) {
      v = S(std::sqrt(2.0 / lambda)) * v;
      eplus = hcat(eplus, real_part(v));
      fplus = hcat(fplus, Matrix<R>(-imag_part(v)));
    } else if (lambda < -band) {
      v = S(std::sqrt(2.0 / (-lambda))) * v;
      eminus = hcat(eminus, real_part(v));
      fminus = hcat(fminus, imag_part(v));
    } else {
      zero_part = hcat(zero_part, v);
    }
  }
  const int n0 = zero_part.cols();
  // The kappa-kernel is conjugation stable: its real trace has dimension n0.
  Matrix<R> e0 = column_basis(
      Matrix<R>(hcat(real_part(zero_part), imag_part(zero_part))), rank_tol);
  if (e0.cols() != n0)
    throw std::logic_error("adapted_basis_lagrangianC: kernel realification");
  Matrix<R> symp = hcat(hcat(eplus, fplus), hcat(eminus, fminus));
  Matrix<R> z = symplectic_complement(symp, rank_tol);
  Matrix<R> c = detail::greedy_complement(e0, z, rank_tol);
  Matrix<R> f0 = detail::lagrangian_pair(e0, c, rank_tol);
  Matrix<R> vectors = hcat(hcat(hcat(e0, eplus), eminus),
                           hcat(hcat(f0, fplus), fminus));
  if (!is_symplectic_matrix(vectors, 1e3 * rank_tol))
    throw std::logic_error("adapted_basis_lagrangianC: basis is not Darboux");
  OrbitType type{n0, eplus.cols(), eminus.cols()};
  return DarbouxBasis<R>{type, vectors};
}

// Real symplectic matrix carrying F onto F2 (same type required), as the
// change of adapted real bases.
template <class S>
Matrix<typename scalar_traits<S>::real_type> lag_transporter(
    const ComplexLagrangian<S>& f, const ComplexLagrangian<S>& f2,
    double rank_tol = 1e-9) {
  if (!(lag_type(f.frame, rank_tol) == lag_type(f2.frame, rank_tol)))
    throw std::domain_error("lag_transporter: type mismatch");
  auto b1 = adapted_basis_lagrangianC(f, rank_tol).vectors;
  auto b2 = adapted_basis_lagrangianC(f2, rank_tol).vectors;
  return b2 * symplectic_inverse(b1);
}

// Real trace of a complex Lagrangian: Re F is coisotropic of type
// (n0, n - n0, 0) and its symplectic complement is Re F0.
template <class S>
struct RealProjection {
  Matrix<S> re_f;
  Matrix<S> re_f0;
};

template <class S>
RealProjection<typename scalar_traits<S>::real_type> real_projection(
    const ComplexLagrangian<S>& f, double rank_tol = 1e-9) {
  using R = typename scalar_traits<S>::real_type;
  Matrix<R> spanning =
      hcat(real_part(f.frame), imag_part(f.frame));
  Matrix<R> re_f = column_basis(spanning, rank_tol);
  Matrix<R> re_f0 = symplectic_complement(re_f, rank_tol);
  return RealProjection<R>{re_f, re_f0};
}

// Eigenspaces F_{+-J} = (1 -+ iJ) V^C of a compatible J, with the scaled
// projectors (1 -+ iJ)/sqrt(2).
template <class S>
struct JEigenspaces {
  Matrix<S> plus;
  Matrix<S> minus;
  Matrix<S> pr_plus;
  Matrix<S> pr_minus;
};

template <class RealS, class CS = typename scalar_traits<RealS>::complex_type>
JEigenspaces<CS> f_pm_j(const Matrix<RealS>& j, double rank_tol = 1e-9) {
  static_assert(!is_complex_v<RealS>, "f_pm_j: real J required");
  const int two_n = j.rows();
  Matrix<CS> jc = complexify(j);
  Matrix<CS> id = Matrix<CS>::identity(two_n);
  CS unit_i = unit_imag<CS>();
  Matrix<CS> proj_plus = id - unit_i * jc;
  Matrix<CS> proj_minus = id + unit_i * jc;
  Matrix<CS> plus = column_basis(proj_plus, rank_tol);
  Matrix<CS> minus = column_basis(proj_minus, rank_tol);
  CS inv_sqrt2;
  if constexpr (is_exact_v<CS>) {
    throw std::domain_error("f_pm_j: projector scaling needs sqrt(2)");
  } else {
    inv_sqrt2 = CS(1.0 / std::sqrt(2.0));
  }
  return JEigenspaces<CS>{plus, minus, inv_sqrt2 * proj_plus,
                          inv_sqrt2 * proj_minus};
}

// A twistor point: the symplectic subspace W = Re F+ carrying the complex
// structure J_W v = Re(i (Re|_{F+})^{-1} v), together with the same data on
// W^omega from F-. Matrices jw, jwomega act in the stored basis coordinates.
template <class S>
struct TwistorPoint {
  Matrix<S> w_basis;
  Matrix<S> jw;
  Matrix<S> womega_basis;
  Matrix<S> jwomega;
};

namespace detail {

// J_W in the basis [Re G | Im G]: Re g -> -Im g, Im g -> Re g.
template <class R>
Matrix<R> plus_side_j(int k) {
  Matrix<R> x(2 * k, 2 * k);
  for (int j = 0; j < k; ++j) {
    x(k + j, j) = R(-1);
    x(j, k + j) = R(1);
  }
  return x;
}

}  // namespace detail

template <class S>
TwistorPoint<typename scalar_traits<S>::real_type> make_twistor(
    const SplitLagrangian<S>& s, double rank_tol = 1e-9) {
  using R = typename scalar_traits<S>::real_type;
  OrbitType t = split_type(s, rank_tol);
  if (t.n0 != 0)
    throw std::domain_error("make_twistor: splitting must have n0 = 0");
  Matrix<R> w_basis = hcat(real_part(s.geq0), imag_part(s.geq0));
  Matrix<R> womega_basis = hcat(real_part(s.leq0), imag_part(s.leq0));
  if (detail::rank_dispatch(w_basis, rank_tol) != w_basis.cols() ||
      detail::rank_dispatch(womega_basis, rank_tol) != womega_basis.cols())
    throw std::logic_error("make_twistor: degenerate realification");
  // On the minus side J v = Re(-i (Re|_{F-})^{-1} v): Re g -> Im g.
  Matrix<R> jw = detail::plus_side_j<R>(s.geq0.cols());
  Matrix<R> jwomega = -detail::plus_side_j<R>(s.leq0.cols());
  return TwistorPoint<R>{w_basis, jw, womega_basis, jwomega};
}

// Inverse correspondence: the +i eigenspace of J_W in W^C and the -i
// eigenspace of J_{W^omega}, reassembled as a definite splitting.
template <class R, class CS = typename scalar_traits<R>::complex_type>
SplitLagrangian<CS> twistor_lagrangians(const TwistorPoint<R>& tp,
                                        double rank_tol = 1e-9) {
  CS unit_i = unit_imag<CS>();
  Matrix<CS> wc = complexify(tp.w_basis);
  Matrix<CS> plus_raw =
      wc - unit_i * (wc * complexify(tp.jw));
  Matrix<CS> oc = complexify(tp.womega_basis);
  Matrix<CS> minus_raw =
      oc + unit_i * (oc * complexify(tp.jwomega));
  Matrix<CS> plus = column_basis(plus_raw, rank_tol);
  Matrix<CS> minus = column_basis(minus_raw, rank_tol);
  return make_split(plus, minus, rank_tol);
}

template <class S>
SplitLagrangian<S> twistor_roundtrip(const SplitLagrangian<S>& s,
                                     double rank_tol = 1e-9) {
  return twistor_lagrangians(make_twistor(s, rank_tol), rank_tol);
}

}  // namespace symplecta
