#pragma once

// Structure theory of sp(2n; R) in the fixed Darboux coordinates: the Cartan
// decomposition and its projections, vectorial Cartan subalgebras and the
// Darboux bases they determine, exact root data for the three standard Cartan
// subalgebras, partial Cayley transforms with their Lagrangian basepoints,
// the binary octahedral group acting on the n = 1 factor, Harish-Chandra
// coordinates of positive complex structures, and the restricted subalgebras
// cut out by a subset of the strongly orthogonal roots.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symplecta/darboux.hpp"
#include "symplecta/linalg.hpp"
#include "symplecta/matrix.hpp"
#include "symplecta/numeric.hpp"
#include "symplecta/orbit.hpp"
#include "symplecta/space.hpp"

namespace symplecta {

// Membership test for sp(2n): x^t Omega + Omega x = 0.
template <class S>
bool is_sp_element(const Matrix<S>& x, double tol = 1e-9) {
  if (x.rows() != x.cols() || x.rows() % 2 != 0 || x.rows() == 0) return false;
  Matrix<S> om = omega_matrix<S>(x.rows() / 2);
  Matrix<S> res = x.transpose() * om + om * x;
  if constexpr (is_exact_v<S>) {
    return is_zero_matrix(res);
  } else {
    return max_abs(res) <= tol * std::max(1.0, max_abs(x));
  }
}

template <class S>
void check_sp_element(const Matrix<S>& x, double tol = 1e-9) {
  if (!is_sp_element(x, tol))
    throw std::domain_error("sp element: x^t Omega + Omega x != 0");
}

template <class S>
Matrix<S> lie_bracket(const Matrix<S>& x, const Matrix<S>& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols() || x.rows() != x.cols())
    throw std::invalid_argument("lie_bracket: square size mismatch");
  return x * y - y * x;
}

// Component of x in the (+1 = compact k) or (-1 = symmetric p) eigenspace of
// the Cartan involution x -> -x^t.
template <class S>
Matrix<S> cartan_eigenpart(const Matrix<S>& x, int sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("cartan_eigenpart: sign must be +1 or -1");
  const S half = S(1) / S(2);
  return half * (x - S(sign) * x.transpose());
}

// Component of x in the (+1 = parallel) or (-1 = cross) eigenspace of
// conjugation by an involutive matrix.
template <class S>
Matrix<S> involution_eigenpart(const Matrix<S>& x, const Matrix<S>& invol,
                               int sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("involution_eigenpart: sign must be +1 or -1");
  if (invol.rows() != x.rows() || invol.cols() != x.cols())
    throw std::invalid_argument("involution_eigenpart: size mismatch");
  const S half = S(1) / S(2);
  return half * (x + S(sign) * (invol * x * invol));
}

// Bases of sp(2n) and of the two pieces of its Cartan decomposition
// g = k + p, where k = {[[a, -b], [b, a]]: a antisym, b sym} is the unitary
// algebra of the standard complex structure and p = {[[a, b], [b, -a]]:
// a, b sym} is the symmetric part.
template <class S>
struct LieContext {
  int n = 0;
  std::vector<Matrix<S>> basis_g;  // dim n(2n + 1)
  std::vector<Matrix<S>> basis_k;  // dim n^2
  std::vector<Matrix<S>> basis_p;  // dim n^2 + n
  Matrix<S> j;                     // standard compatible complex structure
};

template <class S = Rational>
LieContext<S> cartan_context(int n) {
  static_assert(!is_complex_v<S>, "cartan_context: real scalars only");
  if (n < 1) throw std::invalid_argument("cartan_context: n must be positive");
  LieContext<S> ctx;
  ctx.n = n;
  ctx.basis_g = sp_basis<S>(n);
  ctx.j = standard_j<S>(n);
  const int m = 2 * n;
  // k: a ranges over antisymmetric units, b over symmetric units.
  for (int i = 0; i < n; ++i)
    for (int l = i + 1; l < n; ++l) {
      Matrix<S> x(m, m);
      x(i, l) = S(1);
      x(l, i) = S(-1);
      x(n + i, n + l) = S(1);
      x(n + l, n + i) = S(-1);
      ctx.basis_k.push_back(x);
    }
  for (int i = 0; i < n; ++i)
    for (int l = i; l < n; ++l) {
      Matrix<S> x(m, m);
      x(i, n + l) = S(-1);
      x(l, n + i) = S(-1);
      x(n + i, l) = S(1);
      x(n + l, i) = S(1);
      ctx.basis_k.push_back(x);
    }
  // p: both blocks symmetric.
  for (int i = 0; i < n; ++i)
    for (int l = i; l < n; ++l) {
      Matrix<S> x(m, m);
      x(i, l) = S(1);
      x(l, i) = S(1);
      x(n + i, n + l) = S(-1);
      x(n + l, n + i) = S(-1);
      ctx.basis_p.push_back(x);
    }
  for (int i = 0; i < n; ++i)
    for (int l = i; l < n; ++l) {
      Matrix<S> x(m, m);
      x(i, n + l) = S(1);
      x(l, n + i) = S(1);
      x(n + i, l) = S(1);
      x(n + l, i) = S(1);
      ctx.basis_p.push_back(x);
    }
  return ctx;
}

// Killing form of sp(2n; R). The block expansion
// 2(n + 1) tr(a a' + a' a + b c' + c b') collapses to 2(n + 1) tr(xy), which
// equals tr(ad x ad y).
template <class S>
S killing_form(const Matrix<S>& x, const Matrix<S>& y, double tol = 1e-9) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw std::invalid_argument("killing_form: size mismatch");
  check_sp_element(x, tol);
  check_sp_element(y, tol);
  const int n = x.rows() / 2;
  return S(2 * (n + 1)) * (x * y).trace();
}

// Generators d_j: e_j -> e_j, f_j -> -f_j of the vectorial Cartan subalgebra
// attached to a Darboux basis (columns e_1..e_n, f_1..f_n). Its weight lines
// are exactly the basis lines, with weight +1 on e_j, -1 on f_j for d_j.
template <class S>
std::vector<Matrix<S>> cartan_from_darboux(const Matrix<S>& darboux,
                                           double rank_tol = 1e-9) {
  const int m = darboux.rows();
  if (m == 0 || m % 2 != 0 || darboux.cols() != m)
    throw std::invalid_argument("cartan_from_darboux: need 2n x 2n columns");
  if (!is_symplectic_matrix(darboux, rank_tol))
    throw std::domain_error(
        "cartan_from_darboux: columns are not a Darboux basis");
  const int n = m / 2;
  Matrix<S> inv = symplectic_inverse(darboux);
  std::vector<Matrix<S>> gens;
  gens.reserve(n);
  for (int j = 0; j < n; ++j) {
    Matrix<S> d(m, m);
    d(j, j) = S(1);
    d(n + j, n + j) = S(-1);
    gens.push_back(darboux * d * inv);
  }
  return gens;
}

template <class S>
std::vector<Matrix<S>> cartan_from_darboux(const DarbouxBasis<S>& basis,
                                           double rank_tol = 1e-9) {
  return cartan_from_darboux(basis.vectors, rank_tol);
}

namespace detail {

// Coefficients of det(t - a) = t^m + c[0] t^{m-1} + ... + c[m-1] by the
// Faddeev-LeVerrier recurrence.
inline std::vector<double> char_poly(const Matrix<double>& a) {
  const int m = a.rows();
  std::vector<double> c(m);
  Matrix<double> acc = Matrix<double>::identity(m);
  for (int k = 1; k <= m; ++k) {
    Matrix<double> am = a * acc;
    const double ck = -am.trace() / k;
    c[k - 1] = ck;
    acc = am;
    for (int i = 0; i < m; ++i) acc(i, i) += ck;
  }
  return c;
}

// All complex roots of the monic polynomial t^m + c[0] t^{m-1} + ... + c[m-1]
// by Durand-Kerner iteration.
inline std::vector<std::complex<double>> poly_roots(
    const std::vector<double>& c) {
  using C = std::complex<double>;
  const int m = static_cast<int>(c.size());
  double radius = 1.0;
  for (const double ck : c) radius = std::max(radius, 2.0 * std::abs(ck));
  auto eval = [&](C t) {
    C acc(1.0, 0.0);
    for (const double ck : c) acc = acc * t + ck;
    return acc;
  };
  std::vector<C> z(m);
  const C seed(0.4, 0.9);
  C pw = C(1.0, 0.0);
  for (int k = 0; k < m; ++k) {
    pw *= seed;
    z[k] = pw;
  }
  for (int it = 0; it < 600; ++it) {
    double shift = 0.0;
    for (int k = 0; k < m; ++k) {
      C denom(1.0, 0.0);
      for (int l = 0; l < m; ++l)
        if (l != k) denom *= z[k] - z[l];
      if (std::abs(denom) < 1e-300) {
        z[k] += C(1e-8 * (k + 1), 1e-8);
        shift = 1.0;
        continue;
      }
      const C dz = eval(z[k]) / denom;
      z[k] -= dz;
      shift = std::max(shift, std::abs(dz));
    }
    if (shift <= 1e-14 * radius) break;
  }
  return z;
}

}  // namespace detail

// Recovers, from a spanning family of a vectorial Cartan subalgebra, the
// Darboux basis of simultaneous weight lines, with columns e_1..e_n, f_1..f_n
// ordered so that the j-th generator of cartan_from_darboux(result) lies in
// the span of the input. Requires commuting sp elements spanning an
// n-dimensional subalgebra that diagonalizes over R; the result is unique up
// to scaling and relabelling of the weight lines. Floating point only.
inline Matrix<double> darboux_from_cartan(const std::vector<Matrix<double>>& gens,
                                          double rank_tol = 1e-9) {
  if (gens.empty())
    throw std::invalid_argument("darboux_from_cartan: empty generator list");
  const int m = gens.front().rows();
  if (m == 0 || m % 2 != 0)
    throw std::invalid_argument("darboux_from_cartan: rows must be even");
  const int n = m / 2;
  double scale = 1.0;
  for (const auto& a : gens) {
    if (a.rows() != m || a.cols() != m)
      throw std::invalid_argument("darboux_from_cartan: size mismatch");
    check_sp_element(a, rank_tol);
    scale = std::max(scale, max_abs(a));
  }
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t l = i + 1; l < gens.size(); ++l) {
      Matrix<double> br = lie_bracket(gens[i], gens[l]);
      if (max_abs(br) > 1e3 * rank_tol * scale * scale)
        throw std::domain_error("darboux_from_cartan: generators do not commute");
    }
  Matrix<double> stacked(m * m, static_cast<int>(gens.size()));
  for (std::size_t c = 0; c < gens.size(); ++c)
    for (int i = 0; i < m; ++i)
      for (int l = 0; l < m; ++l)
        stacked(i * m + l, static_cast<int>(c)) = gens[c](i, l);
  if (rank_of(stacked, rank_tol) != n)
    throw std::domain_error("darboux_from_cartan: span dimension is not n");
  // Rescaled generators span the same subalgebra with tame magnitudes.
  std::vector<Matrix<double>> scaled;
  scaled.reserve(gens.size());
  for (const auto& a : gens) {
    const double mag = max_abs(a);
    if (mag > 0.0) scaled.push_back((1.0 / mag) * a);
  }

  // A generic element of the span has 2n simple real eigenvalues; a few
  // deterministic coefficient choices cover the degenerate combinations.
  auto weight = [](int attempt, int c) -> double {
    if (attempt == 0) return static_cast<double>(c + 1);
    if (attempt == 1) return static_cast<double>((c + 1) * (c + 1));
    std::minstd_rand rng(7919u * static_cast<unsigned>(attempt) +
                         104729u * static_cast<unsigned>(c + 1));
    std::uniform_real_distribution<double> uni(1.0, 10.0);
    return uni(rng);
  };
  bool saw_complex = false;
  std::string last_failure = "no admissible generic element";
  for (int attempt = 0; attempt < 8; ++attempt) {
    Matrix<double> h(m, m);
    for (std::size_t c = 0; c < gens.size(); ++c)
      h += weight(attempt, static_cast<int>(c)) * gens[c];
    const std::vector<std::complex<double>> roots =
        detail::poly_roots(detail::char_poly(h));
    double rscale = 1.0;
    for (const auto& r : roots) rscale = std::max(rscale, std::abs(r));
    bool complex_spectrum = false;
    for (const auto& r : roots)
      if (std::abs(r.imag()) > 1e-7 * rscale) complex_spectrum = true;
    if (complex_spectrum) {
      saw_complex = true;
      continue;
    }
    std::vector<double> ev;
    ev.reserve(m);
    for (const auto& r : roots) ev.push_back(r.real());
    bool degenerate = false;
    for (int i = 0; i < m && !degenerate; ++i)
      for (int l = i + 1; l < m; ++l)
        if (std::abs(ev[i] - ev[l]) < 1e-4 * rscale) {
          degenerate = true;
          break;
        }
    if (degenerate) {
      last_failure = "degenerate spectrum for every tried generic element";
      continue;
    }
    std::vector<double> pos;
    for (const double v : ev)
      if (v > 0.0) pos.push_back(v);
    if (static_cast<int>(pos.size()) != n) {
      last_failure = "spectrum is not symmetric about zero";
      continue;
    }
    std::sort(pos.begin(), pos.end(), std::greater<double>());
    Matrix<double> id = Matrix<double>::identity(m);
    Matrix<double> epart(m, n), fpart(m, n);
    bool line_failure = false;
    Matrix<double> om = omega_matrix<double>(n);
    for (int jdx = 0; jdx < n && !line_failure; ++jdx) {
      Matrix<double> ek = float_kernel(h - pos[jdx] * id, rank_tol);
      Matrix<double> fk = float_kernel(h + pos[jdx] * id, rank_tol);
      if (ek.cols() != 1 || fk.cols() != 1) {
        line_failure = true;
        break;
      }
      Matrix<double> e = ek.col(0);
      Matrix<double> w = fk.col(0);
      const double pairing = omega_form(e, w);
      if (std::abs(pairing) < 1e-9) {
        line_failure = true;
        break;
      }
      for (int i = 0; i < m; ++i) {
        epart(i, jdx) = e(i, 0);
        fpart(i, jdx) = w(i, 0) / pairing;
      }
    }
    if (line_failure) {
      last_failure = "weight lines are not simple";
      continue;
    }
    Matrix<double> d = hcat(epart, fpart);
    if (!is_symplectic_matrix(d, 1e-6))
      throw std::logic_error("darboux_from_cartan: assembled basis not symplectic");
    Matrix<double> dinv = symplectic_inverse(d);
    for (const auto& a : gens) {
      Matrix<double> diag = dinv * a * d;
      const double dscale = std::max(1.0, max_abs(diag));
      for (int i = 0; i < m; ++i)
        for (int l = 0; l < m; ++l)
          if (i != l && std::abs(diag(i, l)) > 1e-6 * dscale)
            throw std::logic_error(
                "darboux_from_cartan: generators not diagonal in result");
    }
    return d;
  }
  if (saw_complex)
    throw std::domain_error(
        "darboux_from_cartan: span has complex eigenvalues, so it is not "
        "conjugate to the diagonal Cartan subalgebra");
  throw std::domain_error("darboux_from_cartan: " + last_failure);
}

// The three standard Cartan subalgebras: a (diagonal, in p), h (hyperbolic
// block, in p), t (rotation block, in k).
enum class CartanKind { a, h, t };

// One root of sp(2n; C) relative to a standard Cartan subalgebra: functional
// coordinates on the stored generators, the root space generator, the chosen
// root vector e, and the coroot h = [e_root, e_{-root}].
struct SpRoot {
  Matrix<Gaussian> on_cartan;  // n x 1, values of the functional on the generators
  Matrix<Gaussian> space;      // root space generator
  Matrix<Gaussian> vector;     // root vector e
  Matrix<Gaussian> coroot;     // h with [e, opposite e] = h
  int j = 0;                   // first index, 0-based
  int l = 0;                   // second index, 0-based
  int sign = 1;                // sum-type roots come in +/- pairs
  bool sum_type = false;       // w_j + w_l rather than w_j - w_l
  bool noncompact = false;     // root space in p^C; meaningful for kind t
  bool strongly_orthogonal = false;  // member of the long family {2 w_j}
  int opposite = 0;            // index of the negative root
};

struct RootDatum {
  CartanKind kind = CartanKind::a;
  int n = 0;
  std::vector<Matrix<Gaussian>> cartan;  // generators H_1..H_n
  std::vector<SpRoot> roots;             // 2n^2 roots
};

namespace detail {

inline Matrix<Gaussian> embed_blocks(int n, const Matrix<Gaussian>& tl,
                                     const Matrix<Gaussian>& tr,
                                     const Matrix<Gaussian>& bl,
                                     const Matrix<Gaussian>& br) {
  Matrix<Gaussian> x(2 * n, 2 * n);
  x.set_block(0, 0, tl);
  x.set_block(0, n, tr);
  x.set_block(n, 0, bl);
  x.set_block(n, n, br);
  return x;
}

inline Matrix<Gaussian> unit_sym(int n, int j, int l) {
  Matrix<Gaussian> s(n, n);
  s(j, l) = s(j, l) + Gaussian(1);
  s(l, j) = s(l, j) + Gaussian(1);
  return s;
}

inline Matrix<Gaussian> unit_antisym(int n, int j, int l) {
  Matrix<Gaussian> a(n, n);
  a(j, l) = Gaussian(1);
  a(l, j) = Gaussian(-1);
  return a;
}

inline Matrix<Gaussian> unit_ejl(int n, int j, int l) {
  Matrix<Gaussian> e(n, n);
  e(j, l) = Gaussian(1);
  return e;
}

// E_jj + E_ll, literally doubled when j = l.
inline Matrix<Gaussian> unit_diag_sum(int n, int j, int l) {
  Matrix<Gaussian> d(n, n);
  d(j, j) = d(j, j) + Gaussian(1);
  d(l, l) = d(l, l) + Gaussian(1);
  return d;
}

inline Matrix<Gaussian> unit_diag_diff(int n, int j, int l) {
  Matrix<Gaussian> d(n, n);
  d(j, j) = Gaussian(1);
  d(l, l) = Gaussian(-1);
  return d;
}

}  // namespace detail

// Exact root data of sp(2n; C) relative to the chosen standard Cartan
// subalgebra: n(n - 1) difference roots w_j - w_l (j != l) followed by the
// n(n + 1) sum roots +/-(w_j + w_l) (j <= l). For kind t the Cartan is
// compact, the functionals are imaginary, difference roots are compact and
// sum roots noncompact; the positive long family {2 w_j} is the maximal
// strongly orthogonal set.
inline RootDatum root_data(CartanKind kind, int n) {
  if (n < 1) throw std::invalid_argument("root_data: n must be positive");
  using detail::embed_blocks;
  RootDatum datum;
  datum.kind = kind;
  datum.n = n;
  const Gaussian iu = Gaussian::i();
  const Gaussian half = Gaussian(Rational(1) / Rational(2));
  const Matrix<Gaussian> zero(n, n);
  for (int k = 0; k < n; ++k) {
    Matrix<Gaussian> ekk = detail::unit_ejl(n, k, k);
    switch (kind) {
      case CartanKind::a:
        datum.cartan.push_back(embed_blocks(n, ekk, zero, zero, Gaussian(-1) * ekk));
        break;
      case CartanKind::h:
        datum.cartan.push_back(embed_blocks(n, zero, ekk, ekk, zero));
        break;
      case CartanKind::t:
        datum.cartan.push_back(embed_blocks(n, zero, Gaussian(-1) * ekk, ekk, zero));
        break;
    }
  }
  auto diff_index = [n](int j, int l) {
    return j * (n - 1) + (l > j ? l - 1 : l);
  };
  auto tri_index = [n](int j, int l) {
    return j * n - j * (j - 1) / 2 + (l - j);
  };
  const int diff_count = n * (n - 1);
  const int sum_count = n * (n + 1) / 2;
  auto functional = [&](bool sum_type, int sign, int j, int l) {
    Matrix<Gaussian> phi(n, 1);
    const Gaussian unit = (kind == CartanKind::t) ? iu : Gaussian(1);
    if (sum_type) {
      phi(j, 0) = phi(j, 0) + Gaussian(sign) * unit;
      phi(l, 0) = phi(l, 0) + Gaussian(sign) * unit;
    } else {
      phi(j, 0) = unit;
      phi(l, 0) = Gaussian(-1) * unit;
    }
    return phi;
  };
  auto make_space = [&](bool sum_type, int sign, int j, int l) {
    Matrix<Gaussian> s = detail::unit_sym(n, j, l);
    Matrix<Gaussian> a = detail::unit_antisym(n, j, l);
    switch (kind) {
      case CartanKind::a:
        if (!sum_type)
          return embed_blocks(n, detail::unit_ejl(n, j, l), zero, zero,
                              Gaussian(-1) * detail::unit_ejl(n, l, j));
        if (sign > 0) return embed_blocks(n, zero, s, zero, zero);
        return embed_blocks(n, zero, zero, s, zero);
      case CartanKind::h:
        if (!sum_type) return embed_blocks(n, a, s, s, a);
        if (sign > 0)
          return embed_blocks(n, Gaussian(-1) * s, s, Gaussian(-1) * s, s);
        return embed_blocks(n, Gaussian(-1) * s, Gaussian(-1) * s, s, s);
      case CartanKind::t:
        if (!sum_type)
          return embed_blocks(n, a, iu * s, Gaussian(-1) * iu * s, a);
        return embed_blocks(n, Gaussian(-1) * s, Gaussian(sign) * iu * s,
                            Gaussian(sign) * iu * s, s);
    }
    throw std::logic_error("root_data: unreachable");
  };
  auto make_coroot = [&](bool sum_type, int sign, int j, int l) {
    const Gaussian mult =
        Gaussian(sum_type ? sign : 1) * Gaussian(sum_type && j == l ? 2 : 1);
    Matrix<Gaussian> d = sum_type ? detail::unit_diag_sum(n, j, l)
                                  : detail::unit_diag_diff(n, j, l);
    switch (kind) {
      case CartanKind::a:
        return embed_blocks(n, mult * d, zero, zero, Gaussian(-1) * mult * d);
      case CartanKind::h:
        return embed_blocks(n, zero, mult * d, mult * d, zero);
      case CartanKind::t:
        return embed_blocks(n, zero, mult * iu * d,
                            Gaussian(-1) * mult * iu * d, zero);
    }
    throw std::logic_error("root_data: unreachable");
  };
  auto push_root = [&](bool sum_type, int sign, int j, int l, int opposite) {
    SpRoot r;
    r.on_cartan = functional(sum_type, sign, j, l);
    r.space = make_space(sum_type, sign, j, l);
    r.vector = (kind == CartanKind::a) ? r.space : half * r.space;
    r.coroot = make_coroot(sum_type, sign, j, l);
    r.j = j;
    r.l = l;
    r.sign = sum_type ? sign : 1;
    r.sum_type = sum_type;
    r.noncompact = (kind == CartanKind::t) && sum_type;
    r.strongly_orthogonal = sum_type && sign > 0 && j == l;
    r.opposite = opposite;
    datum.roots.push_back(std::move(r));
  };
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      if (j != l) push_root(false, 1, j, l, diff_index(l, j));
  for (int j = 0; j < n; ++j)
    for (int l = j; l < n; ++l)
      push_root(true, 1, j, l, diff_count + sum_count + tri_index(j, l));
  for (int j = 0; j < n; ++j)
    for (int l = j; l < n; ++l)
      push_root(true, -1, j, l, diff_count + tri_index(j, l));
  return datum;
}

// Partial Cayley transforms attached to the strongly orthogonal family:
// c_gamma rotates the first n0 coordinate planes halfway to the vertical,
// c_sigma the next nplus planes. basepoint is the Lagrangian
// c_gamma c_sigma^2 (span of e_j + i f_j), of type (n0, nplus, n - n0 - nplus).
struct CayleyTransforms {
  int n = 0;
  int n0 = 0;
  int nplus = 0;
  Matrix<std::complex<double>> c_gamma;
  Matrix<std::complex<double>> c_sigma;
  Matrix<std::complex<double>> basepoint;
};

inline CayleyTransforms cayley_transforms(int n, int n0, int nplus) {
  if (n < 1) throw std::invalid_argument("cayley_transforms: n must be positive");
  if (n0 < 0 || nplus < 0 || n0 + nplus > n)
    throw std::invalid_argument("cayley_transforms: need n0 + nplus <= n");
  using C = std::complex<double>;
  const int m = 2 * n;
  const double rh = 1.0 / std::sqrt(2.0);
  const C diag(rh, 0.0);
  const C off(0.0, -rh);
  auto plane_rotation = [&](int lo, int count) {
    Matrix<C> g = Matrix<C>::identity(m);
    for (int j = lo; j < lo + count; ++j) {
      g(j, j) = diag;
      g(j, n + j) = off;
      g(n + j, j) = off;
      g(n + j, n + j) = diag;
    }
    return g;
  };
  CayleyTransforms out;
  out.n = n;
  out.n0 = n0;
  out.nplus = nplus;
  out.c_gamma = plane_rotation(0, n0);
  out.c_sigma = plane_rotation(n0, nplus);
  const int nminus = n - n0 - nplus;
  Matrix<C> base(m, n);
  for (int j = 0; j < n0; ++j) base(j, j) = C(1.0, 0.0);
  for (int j = 0; j < nplus; ++j) {
    base(n0 + j, n0 + j) = C(1.0, 0.0);
    base(n + n0 + j, n0 + j) = C(0.0, -1.0);
  }
  for (int j = 0; j < nminus; ++j) {
    base(n0 + nplus + j, n0 + nplus + j) = C(1.0, 0.0);
    base(n + n0 + nplus + j, n0 + nplus + j) = C(0.0, 1.0);
  }
  out.basepoint = base;
  if (!is_symplectic_matrix(out.c_gamma, 1e-12) ||
      !is_symplectic_matrix(out.c_sigma, 1e-12))
    throw std::logic_error("cayley_transforms: factors not symplectic");
  Matrix<C> holo(m, n);
  for (int j = 0; j < n; ++j) {
    holo(j, j) = C(1.0, 0.0);
    holo(n + j, j) = C(0.0, 1.0);
  }
  Matrix<C> moved = out.c_gamma * out.c_sigma * out.c_sigma * holo;
  if (!same_span(moved, out.basepoint, 1e-9))
    throw std::logic_error("cayley_transforms: basepoint mismatch");
  return out;
}

namespace detail {

// Exact arithmetic in the ring Z[zeta_8] tensor Q, written as
// (a + b sqrt2) + (c + d sqrt2) i; closed under the products needed for the
// binary octahedral group, so no division is required.
struct Zeta8 {
  Rational a, b, c, d;
  friend Zeta8 operator+(const Zeta8& x, const Zeta8& y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
  }
  friend Zeta8 operator-(const Zeta8& x, const Zeta8& y) {
    return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
  }
  friend Zeta8 operator*(const Zeta8& x, const Zeta8& y) {
    // (p + q sqrt2)(r + s sqrt2) = (pr + 2qs) + (ps + qr) sqrt2 on each part.
    const Rational re_a = x.a * y.a + 2 * (x.b * y.b) - (x.c * y.c + 2 * (x.d * y.d));
    const Rational re_b = x.a * y.b + x.b * y.a - (x.c * y.d + x.d * y.c);
    const Rational im_c = x.a * y.c + 2 * (x.b * y.d) + x.c * y.a + 2 * (x.d * y.b);
    const Rational im_d = x.a * y.d + x.b * y.c + x.c * y.b + x.d * y.a;
    return {re_a, re_b, im_c, im_d};
  }
  friend bool operator==(const Zeta8& x, const Zeta8& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
  friend bool operator<(const Zeta8& x, const Zeta8& y) {
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    if (x.c != y.c) return x.c < y.c;
    return x.d < y.d;
  }
  std::complex<double> to_complex() const {
    const double r2 = std::sqrt(2.0);
    return {to_double(a) + r2 * to_double(b), to_double(c) + r2 * to_double(d)};
  }
};

using Zeta8Pair = std::array<Zeta8, 4>;  // row-major 2 x 2 matrix

inline Zeta8Pair zmat_mult(const Zeta8Pair& x, const Zeta8Pair& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
          x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

}  // namespace detail

// One element of a finite matrix group: a 2 x 2 unitary and a word in the
// designated generators ("1" for the identity).
struct GroupElementFinite {
  Matrix<std::complex<double>> matrix;
  std::string label;
};

struct FiniteGroupTable {
  std::vector<GroupElementFinite> elements;
  std::vector<std::vector<int>> product;  // product[i][l] = index of g_i g_l
  int identity = 0;
};

inline Matrix<std::complex<double>> pauli(int k) {
  using C = std::complex<double>;
  switch (k) {
    case 1:
      return Matrix<C>(2, 2, {C(0), C(1), C(1), C(0)});
    case 2:
      return Matrix<C>(2, 2, {C(0), C(0, -1), C(0, 1), C(0)});
    case 3:
      return Matrix<C>(2, 2, {C(1), C(0), C(0), C(-1)});
    default:
      throw std::invalid_argument("pauli: index must be 1, 2 or 3");
  }
}

// The quaternion units as SU(2) matrices: unit(k) = -i pauli(k).
inline Matrix<std::complex<double>> quaternion_unit(int k) {
  return std::complex<double>(0.0, -1.0) * pauli(k);
}

// Square roots (1 + unit(k)) / sqrt2, each an order-8 rotation by a quarter
// turn around the k-th axis.
inline Matrix<std::complex<double>> quaternion_sqrt(int k) {
  const std::complex<double> rh(1.0 / std::sqrt(2.0), 0.0);
  return rh * (Matrix<std::complex<double>>::identity(2) + quaternion_unit(k));
}

// The binary octahedral group of order 48, generated inside SU(2) by the
// square roots of the first two quaternion units (label letters "s" and
// "t"). Their product st is the order-6 binary tetrahedral rotation, and the
// quaternion group {+-1, +-i, +-j, +-k} sits inside, generated by the
// squares s^2 and t^2. Element 0 is the identity; labels are words in the
// generators, shortest discovered first.
inline FiniteGroupTable binary_octahedral() {
  using detail::Zeta8;
  using detail::Zeta8Pair;
  const Rational zero(0), one(1);
  const Rational halfr = Rational(1) / Rational(2);
  const Zeta8 z0{zero, zero, zero, zero};
  const Zeta8Pair ident = {Zeta8{one, zero, zero, zero}, z0, z0,
                           Zeta8{one, zero, zero, zero}};
  // sqrt of i: entries (sqrt2 / 2) on the diagonal, -(sqrt2 / 2) i off it.
  const Zeta8Pair gen_s = {Zeta8{zero, halfr, zero, zero},
                           Zeta8{zero, zero, zero, -halfr},
                           Zeta8{zero, zero, zero, -halfr},
                           Zeta8{zero, halfr, zero, zero}};
  // sqrt of j: (sqrt2 / 2) [[1, -1], [1, 1]].
  const Zeta8Pair gen_t = {Zeta8{zero, halfr, zero, zero},
                           Zeta8{zero, -halfr, zero, zero},
                           Zeta8{zero, halfr, zero, zero},
                           Zeta8{zero, halfr, zero, zero}};
  auto key_of = [](const Zeta8Pair& g) {
    std::array<Rational, 16> key;
    for (int e = 0; e < 4; ++e) {
      key[4 * e + 0] = g[e].a;
      key[4 * e + 1] = g[e].b;
      key[4 * e + 2] = g[e].c;
      key[4 * e + 3] = g[e].d;
    }
    return key;
  };
  std::vector<Zeta8Pair> elems;
  std::vector<std::string> labels;
  std::map<std::array<Rational, 16>, int> index;
  auto insert = [&](const Zeta8Pair& g, const std::string& label) {
    auto [it, fresh] = index.try_emplace(key_of(g), static_cast<int>(elems.size()));
    if (fresh) {
      elems.push_back(g);
      labels.push_back(label);
    }
    return it->second;
  };
  insert(ident, "1");
  const std::array<std::pair<Zeta8Pair, char>, 2> generators = {
      std::make_pair(gen_s, 's'), std::make_pair(gen_t, 't')};
  for (std::size_t head = 0; head < elems.size(); ++head) {
    if (elems.size() > 48)
      throw std::logic_error("binary_octahedral: closure exceeded order 48");
    const Zeta8Pair current = elems[head];
    const std::string current_label = labels[head];
    for (const auto& [gen, letter] : generators) {
      const std::string word =
          (current_label == "1") ? std::string(1, letter) : current_label + letter;
      insert(detail::zmat_mult(current, gen), word);
    }
  }
  if (elems.size() != 48)
    throw std::logic_error("binary_octahedral: closure has wrong order");
  FiniteGroupTable table;
  table.identity = 0;
  table.elements.reserve(48);
  for (std::size_t e = 0; e < elems.size(); ++e) {
    Matrix<std::complex<double>> m(2, 2);
    m(0, 0) = elems[e][0].to_complex();
    m(0, 1) = elems[e][1].to_complex();
    m(1, 0) = elems[e][2].to_complex();
    m(1, 1) = elems[e][3].to_complex();
    table.elements.push_back({m, labels[e]});
  }
  table.product.assign(48, std::vector<int>(48, 0));
  for (int i = 0; i < 48; ++i)
    for (int l = 0; l < 48; ++l) {
      auto it = index.find(key_of(detail::zmat_mult(elems[i], elems[l])));
      if (it == index.end())
        throw std::logic_error("binary_octahedral: product escaped the group");
      table.product[i][l] = it->second;
    }
  return table;
}

// The four real lines through which the Cayley rotation cycles a Lagrangian
// line of R^2, as complex lines in C^2: horizontal, falling diagonal of the
// graph coordinates, vertical, rising diagonal. quaternion_sqrt(1) maps each
// span to the next, returning to the start after four steps.
inline std::vector<Matrix<std::complex<double>>> cayley_line_orbit() {
  using C = std::complex<double>;
  std::vector<Matrix<C>> orbit;
  orbit.push_back(Matrix<C>(2, 1, {C(1), C(0)}));
  orbit.push_back(Matrix<C>(2, 1, {C(1), C(0, -1)}));
  orbit.push_back(Matrix<C>(2, 1, {C(0), C(1)}));
  orbit.push_back(Matrix<C>(2, 1, {C(1), C(0, 1)}));
  return orbit;
}

// The standard raising/semisimple/lowering triple [[0,1],[0,0]],
// [[1,0],[0,-1]], [[0,0],[1,0]] realized from the quaternion units as
// ((i i_unit - j_unit) / 2, i k_unit, (i i_unit + j_unit) / 2).
struct Sl2Triple {
  Matrix<std::complex<double>> raise;
  Matrix<std::complex<double>> semisimple;
  Matrix<std::complex<double>> lower;
};

inline Sl2Triple sl2_triple() {
  using C = std::complex<double>;
  const C half(0.5, 0.0);
  const C iu(0.0, 1.0);
  Sl2Triple t;
  t.raise = half * (iu * quaternion_unit(1) - quaternion_unit(2));
  t.semisimple = iu * quaternion_unit(3);
  t.lower = half * (iu * quaternion_unit(1) + quaternion_unit(2));
  return t;
}

// Harish-Chandra coordinate of the positive complex structure with matrix
// data (x, y), y symmetric positive definite, x symmetric: the symmetric
// contraction z = (1 - m)(1 + m)^{-1} / 2 with m = y^2 + ix, normalized so
// that (x, y) = (0, 1) maps to 0. The image satisfies 4 - z z^dagger > 0.
inline Matrix<std::complex<double>> harish_chandra(const Matrix<double>& x,
                                                   const Matrix<double>& y,
                                                   double tol = 1e-9) {
  using C = std::complex<double>;
  const int n = x.rows();
  if (n == 0 || x.cols() != n || y.rows() != n || y.cols() != n)
    throw std::invalid_argument("harish_chandra: need square n x n blocks");
  const double scale = std::max({1.0, max_abs(x), max_abs(y)});
  if (max_abs(x - x.transpose()) > tol * scale)
    throw std::domain_error("harish_chandra: x must be symmetric");
  if (max_abs(y - y.transpose()) > tol * scale)
    throw std::domain_error("harish_chandra: y must be symmetric");
  SymEig ey = jacobi_eig_sym(Matrix<double>(0.5 * (y + y.transpose())));
  if (ey.values.front() <= tol * scale)
    throw std::domain_error("harish_chandra: y must be positive definite");
  Matrix<C> m = complexify(Matrix<double>(y * y)) + C(0.0, 1.0) * complexify(x);
  Matrix<C> id = Matrix<C>::identity(n);
  Matrix<C> z = C(0.5, 0.0) * ((id - m) * inverse(Matrix<C>(id + m), tol));
  if (max_abs(Matrix<C>(z - z.transpose())) > 1e3 * tol * std::max(1.0, max_abs(z)))
    throw std::logic_error("harish_chandra: result is not symmetric");
  return z;
}

// Joint eigenspace bases of the span of a generator family under the
// commuting pair of involutions x -> -x^t (k/p split) and x -> g x g
// (parallel/cross split) for an involutive g.
template <class S>
struct InvolutionSplit {
  std::vector<Matrix<S>> k_parallel;
  std::vector<Matrix<S>> k_cross;
  std::vector<Matrix<S>> p_parallel;
  std::vector<Matrix<S>> p_cross;
};

namespace detail {

template <class S>
Matrix<S> vec_matrix(const Matrix<S>& m) {
  Matrix<S> v(m.rows() * m.cols(), 1);
  for (int i = 0; i < m.rows(); ++i)
    for (int l = 0; l < m.cols(); ++l) v(i * m.cols() + l, 0) = m(i, l);
  return v;
}

template <class S>
Matrix<S> unvec_matrix(const Matrix<S>& v, int rows, int cols) {
  Matrix<S> m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int l = 0; l < cols; ++l) m(i, l) = v(i * cols + l, 0);
  return m;
}

}  // namespace detail

template <class S>
InvolutionSplit<S> split_by_involution(const std::vector<Matrix<S>>& gens,
                                       const Matrix<S>& invol,
                                       double rank_tol = 1e-9) {
  if (gens.empty())
    throw std::invalid_argument("split_by_involution: empty generator list");
  const int rows = gens.front().rows();
  const int cols = gens.front().cols();
  if (invol.rows() != rows || invol.cols() != cols || rows != cols)
    throw std::invalid_argument("split_by_involution: size mismatch");
  Matrix<S> square = invol * invol - Matrix<S>::identity(rows);
  const bool involutive = is_exact_v<S>
                              ? is_zero_matrix(square)
                              : max_abs(square) <= rank_tol * std::max(1.0, max_abs(invol));
  if (!involutive)
    throw std::domain_error("split_by_involution: matrix is not an involution");
  InvolutionSplit<S> out;
  auto collect = [&](int ksign, int isign) {
    Matrix<S> stack(rows * cols, 0);
    for (const auto& g : gens) {
      if (g.rows() != rows || g.cols() != cols)
        throw std::invalid_argument("split_by_involution: size mismatch");
      Matrix<S> part =
          involution_eigenpart(cartan_eigenpart(g, ksign), invol, isign);
      bool zero = is_exact_v<S> ? is_zero_matrix(part)
                                : max_abs(part) <= rank_tol;
      if (!zero) stack = hcat(stack, detail::vec_matrix(part));
    }
    std::vector<Matrix<S>> basis;
    if (stack.cols() == 0) return basis;
    Matrix<S> reduced = column_basis(stack, rank_tol);
    basis.reserve(reduced.cols());
    for (int c = 0; c < reduced.cols(); ++c)
      basis.push_back(detail::unvec_matrix(Matrix<S>(reduced.col(c)), rows, cols));
    return basis;
  };
  out.k_parallel = collect(1, 1);
  out.k_cross = collect(1, -1);
  out.p_parallel = collect(-1, 1);
  out.p_cross = collect(-1, -1);
  return out;
}

// The subalgebra of sp(2n; R) commuting with the first n0 strongly orthogonal
// directions (a copy of sp(2(n - n0); R) supported on coordinates
// n0 + 1..n), split into the joint eigenspaces of the Cartan involution and
// conjugation by the fourth power of the partial Cayley transform at the
// next nplus directions: k_parallel (dim nplus^2 + nminus^2), p_parallel
// (dim nplus^2 + nplus + nminus^2 + nminus), k_cross and p_cross (each dim
// 2 nplus nminus).
template <class S = Rational>
struct RestrictedSubalgebra {
  int n = 0;
  int n0 = 0;
  int nplus = 0;
  int nminus = 0;
  std::vector<Matrix<S>> basis_g;
  std::vector<Matrix<S>> k_parallel;
  std::vector<Matrix<S>> k_cross;
  std::vector<Matrix<S>> p_parallel;
  std::vector<Matrix<S>> p_cross;
  Matrix<S> involution;  // c_sigma^4: sign flip on the nplus block
};

template <class S = Rational>
RestrictedSubalgebra<S> restricted_subalgebra(int n, int n0, int nplus,
                                              double rank_tol = 1e-9) {
  static_assert(!is_complex_v<S>, "restricted_subalgebra: real scalars only");
  if (n < 1)
    throw std::invalid_argument("restricted_subalgebra: n must be positive");
  if (n0 < 0 || nplus < 0 || n0 + nplus > n)
    throw std::invalid_argument("restricted_subalgebra: need n0 + nplus <= n");
  RestrictedSubalgebra<S> out;
  out.n = n;
  out.n0 = n0;
  out.nplus = nplus;
  out.nminus = n - n0 - nplus;
  const int m = n - n0;
  const int big = 2 * n;
  Matrix<S> invol = Matrix<S>::identity(big);
  for (int j = 0; j < nplus; ++j) {
    invol(n0 + j, n0 + j) = S(-1);
    invol(n + n0 + j, n + n0 + j) = S(-1);
  }
  out.involution = invol;
  if (m == 0) return out;
  auto row_embed = [&](int i) { return i < m ? n0 + i : n + n0 + (i - m); };
  std::vector<Matrix<S>> small = sp_basis<S>(m);
  out.basis_g.reserve(small.size());
  for (const auto& s : small) {
    Matrix<S> x(big, big);
    for (int i = 0; i < 2 * m; ++i)
      for (int l = 0; l < 2 * m; ++l)
        if (!(s(i, l) == S(0))) x(row_embed(i), row_embed(l)) = s(i, l);
    out.basis_g.push_back(x);
  }
  InvolutionSplit<S> split = split_by_involution(out.basis_g, invol, rank_tol);
  out.k_parallel = std::move(split.k_parallel);
  out.k_cross = std::move(split.k_cross);
  out.p_parallel = std::move(split.p_parallel);
  out.p_cross = std::move(split.p_cross);
  const int np = out.nplus, nm = out.nminus;
  const std::size_t want_kpar = static_cast<std::size_t>(np * np + nm * nm);
  const std::size_t want_ppar =
      static_cast<std::size_t>(np * np + np + nm * nm + nm);
  const std::size_t want_cross = static_cast<std::size_t>(2 * np * nm);
  if (out.k_parallel.size() != want_kpar || out.p_parallel.size() != want_ppar ||
      out.k_cross.size() != want_cross || out.p_cross.size() != want_cross)
    throw std::logic_error("restricted_subalgebra: eigenspace dimensions wrong");
  return out;
}

}  // namespace symplecta
