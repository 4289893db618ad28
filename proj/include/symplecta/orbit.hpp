#pragma once
// Orbit-level geometry: closure incidence between strata, closed-form orbit
// dimensions, stabilizer subalgebras computed as kernels of an invariance
// system, and constructive degeneration paths between nearby strata.

#include <stdexcept>
#include <vector>

#include "symplecta/complex_lagrangian.hpp"
#include "symplecta/darboux.hpp"
#include "symplecta/space.hpp"

namespace symplecta {

enum class OrbitFamily { grassmannian, lagrangian, split_lagrangian };

// Does the orbit of type t2 lie in the closure of the orbit of type t?
// Real subspaces additionally need equal subspace dimension for the two
// strata to live in the same ambient Grassmannian.
inline bool incidence(OrbitFamily family, const OrbitType& t,
                      const OrbitType& t2) {
  if (t.n() != t2.n())
    throw std::domain_error("incidence: types live in different dimensions");
  switch (family) {
    case OrbitFamily::grassmannian:
      if (t.n0 + 2 * t.nplus != t2.n0 + 2 * t2.nplus)
        throw std::domain_error("incidence: subspace dimensions differ");
      return t2.nplus <= t.nplus;
    case OrbitFamily::lagrangian:
      return t2.nplus <= t.nplus && t2.nminus <= t.nminus;
    case OrbitFamily::split_lagrangian:
      throw std::invalid_argument(
          "incidence: no closure criterion for split orbits");
  }
  throw std::logic_error("incidence: unknown family");
}

// Closed-form real dimension of the orbit of type t in each family.
inline int orbit_dim(OrbitFamily family, const OrbitType& t) {
  const int n = t.n();
  const int base = n * n + n - t.n0 * (t.n0 + 1) / 2;
  switch (family) {
    case OrbitFamily::split_lagrangian:
      return base + 2 * t.nplus * t.nminus;
    case OrbitFamily::lagrangian:
      return base;
    case OrbitFamily::grassmannian: {
      const int d = t.nplus - t.nminus;
      return base - d * d - t.nplus - t.nminus;
    }
  }
  throw std::logic_error("orbit_dim: unknown family");
}

// Basis of sp(2n; R) = {[[a, b], [c, -a^t]] : b, c symmetric}: the n^2
// a-units first, then the symmetric units of b, then those of c.
template <class S>
std::vector<Matrix<S>> sp_basis(int n) {
  std::vector<Matrix<S>> out;
  out.reserve(n * (2 * n + 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix<S> x(2 * n, 2 * n);
      x(i, j) = S(1);
      x(n + j, n + i) = S(-1);
      out.push_back(x);
    }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Matrix<S> x(2 * n, 2 * n);
      x(i, n + j) = S(1);
      x(j, n + i) = S(1);
      out.push_back(x);
    }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Matrix<S> x(2 * n, 2 * n);
      x(n + i, j) = S(1);
      x(n + j, i) = S(1);
      out.push_back(x);
    }
  return out;
}

template <class S>
struct StabilizerAlgebra {
  std::vector<Matrix<S>> basis;
  int dim = 0;
};

namespace detail {

// Rows annihilating span(w) from the left; empty when w spans everything.
template <class S>
Matrix<S> left_annihilator(const Matrix<S>& w, double rank_tol) {
  return kernel_of(Matrix<S>(w.transpose()), rank_tol).transpose();
}

// Real linear system whose kernel is {X in sp : X span(w) <= span(w)}: one
// column per generator, rows stacking the entries of ann * X * w (split
// into real and imaginary parts when the span is complex).
template <class WS>
Matrix<typename scalar_traits<WS>::real_type> invariance_system(
    const std::vector<Matrix<typename scalar_traits<WS>::real_type>>& gens,
    const Matrix<WS>& w, double rank_tol) {
  using RS = typename scalar_traits<WS>::real_type;
  Matrix<WS> ann = left_annihilator(w, rank_tol);
  const int block = ann.rows() * w.cols();
  Matrix<RS> sys(is_complex_v<WS> ? 2 * block : block,
                 static_cast<int>(gens.size()));
  for (int k = 0; k < static_cast<int>(gens.size()); ++k) {
    Matrix<WS> lifted;
    if constexpr (is_complex_v<WS>)
      lifted = complexify(gens[k]);
    else
      lifted = gens[k];
    Matrix<WS> ob = ann * lifted * w;
    for (int i = 0; i < ob.rows(); ++i)
      for (int j = 0; j < ob.cols(); ++j) {
        sys(i * ob.cols() + j, k) = scalar_traits<WS>::real(ob(i, j));
        if constexpr (is_complex_v<WS>)
          sys(block + i * ob.cols() + j, k) = scalar_traits<WS>::imag(ob(i, j));
      }
  }
  return sys;
}

template <class RS>
StabilizerAlgebra<RS> algebra_from_system(const std::vector<Matrix<RS>>& gens,
                                          const Matrix<RS>& sys, int n,
                                          double rank_tol) {
  Matrix<RS> coeff = kernel_of(sys, rank_tol);
  StabilizerAlgebra<RS> out;
  out.dim = coeff.cols();
  for (int j = 0; j < coeff.cols(); ++j) {
    Matrix<RS> x(2 * n, 2 * n);
    for (int k = 0; k < static_cast<int>(gens.size()); ++k)
      x = x + coeff(k, j) * gens[k];
    out.basis.push_back(x);
  }
  return out;
}

}  // namespace detail

// Subalgebra of sp(2n; R) mapping a real subspace into itself.
template <class S>
StabilizerAlgebra<S> stabilizer_algebra(const Matrix<S>& w,
                                        double rank_tol = 1e-9) {
  static_assert(!is_complex_v<S>,
                "stabilizer_algebra: real subspace basis expected");
  if (w.rows() % 2 != 0)
    throw std::domain_error("stabilizer_algebra: odd ambient dimension");
  const int n = w.rows() / 2;
  std::vector<Matrix<S>> gens = sp_basis<S>(n);
  return detail::algebra_from_system(
      gens, detail::invariance_system(gens, w, rank_tol), n, rank_tol);
}

// Subalgebra whose complexified action preserves a complex Lagrangian.
template <class CS>
StabilizerAlgebra<typename scalar_traits<CS>::real_type> stabilizer_algebra(
    const ComplexLagrangian<CS>& f, double rank_tol = 1e-9) {
  using RS = typename scalar_traits<CS>::real_type;
  const int n = f.n();
  std::vector<Matrix<RS>> gens = sp_basis<RS>(n);
  return detail::algebra_from_system(
      gens, detail::invariance_system(gens, f.frame, rank_tol), n, rank_tol);
}

// Subalgebra preserving both halves of a split complex Lagrangian.
template <class CS>
StabilizerAlgebra<typename scalar_traits<CS>::real_type> stabilizer_algebra(
    const SplitLagrangian<CS>& s, double rank_tol = 1e-9) {
  using RS = typename scalar_traits<CS>::real_type;
  const int n = s.n();
  std::vector<Matrix<RS>> gens = sp_basis<RS>(n);
  Matrix<RS> sys = vcat(detail::invariance_system(gens, s.geq0, rank_tol),
                        detail::invariance_system(gens, s.leq0, rank_tol));
  return detail::algebra_from_system(gens, sys, n, rank_tol);
}

// Frobenius distance between the orthogonal projectors onto two spans;
// representative-independent, so usable as a distance between subspaces.
inline double frame_distance(const ComplexLagrangian<std::complex<double>>& a,
                             const ComplexLagrangian<std::complex<double>>& b) {
  using C = std::complex<double>;
  Matrix<C> pa = a.frame * a.frame.ct();
  Matrix<C> pb = b.frame * b.frame.ct();
  double sum = 0.0;
  for (int i = 0; i < pa.rows(); ++i)
    for (int j = 0; j < pa.cols(); ++j) {
      double d = std::abs(pa(i, j) - pb(i, j));
      sum += d * d;
    }
  return std::sqrt(sum);
}

// Representative of the stratum of type t at distance O(eps) from ftarget:
// null directions of the adapted frame are tilted by -i eps f0 (positive)
// or +i eps f0 (negative). Positives are created first, from the leading
// null columns; the definite directions are kept as they are.
inline ComplexLagrangian<std::complex<double>> degeneration_path(
    const ComplexLagrangian<std::complex<double>>& ftarget, const OrbitType& t,
    double eps, double rank_tol = 1e-9) {
  using C = std::complex<double>;
  if (!(eps > 0))
    throw std::invalid_argument("degeneration_path: eps must be positive");
  const OrbitType from = lag_type(ftarget.frame, rank_tol);
  if (!incidence(OrbitFamily::lagrangian, t, from))
    throw std::domain_error(
        "degeneration_path: requested type is not reachable from the target");
  if (t == from) return ftarget;
  DarbouxBasis<double> db = adapted_basis_lagrangianC(ftarget, rank_tol);
  const int n = from.n();
  const int create_p = t.nplus - from.nplus;
  const int create_m = t.nminus - from.nminus;
  Matrix<C> e0 = complexify(db.e0()), f0 = complexify(db.f0());
  Matrix<C> ep = complexify(db.eplus()), fp = complexify(db.fplus());
  Matrix<C> em = complexify(db.eminus()), fm = complexify(db.fminus());
  const C iu(0.0, 1.0);
  Matrix<C> cols(2 * n, 0);
  for (int j = 0; j < from.n0; ++j) {
    Matrix<C> col = e0.col(j);
    if (j < create_p)
      col = col - C(0.0, eps) * f0.col(j);
    else if (j < create_p + create_m)
      col = col + C(0.0, eps) * f0.col(j);
    cols = hcat(cols, col);
  }
  for (int j = 0; j < from.nplus; ++j)
    cols = hcat(cols, Matrix<C>(ep.col(j) - iu * fp.col(j)));
  for (int j = 0; j < from.nminus; ++j)
    cols = hcat(cols, Matrix<C>(em.col(j) + iu * fm.col(j)));
  return make_lagrangian(cols, rank_tol);
}

}  // namespace symplecta
