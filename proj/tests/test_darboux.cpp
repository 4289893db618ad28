#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <optional>
#include <vector>

#include "oracles.hpp"
#include "symplecta/darboux.hpp"

using namespace symplecta;
using oracles::Rng;

namespace {

template <class S>
Matrix<S> basis_vectors(int n, std::initializer_list<int> idx) {
  Matrix<S> id = Matrix<S>::identity(2 * n);
  Matrix<S> out(2 * n, 0);
  for (int j : idx) out = hcat(out, id.col(j));
  return out;
}

// Coordinate model of type (n0, np, n - n0 - np):
// span{e_1..e_{n0+np}, f_{n0+1}..f_{n0+np}}.
template <class S>
Matrix<S> model_subspace(int n, int n0, int np) {
  Matrix<S> id = Matrix<S>::identity(2 * n);
  Matrix<S> out(2 * n, 0);
  for (int j = 0; j < n0 + np; ++j) out = hcat(out, id.col(j));
  for (int j = n0; j < n0 + np; ++j) out = hcat(out, id.col(n + j));
  return out;
}

template <class S>
void check_darboux_postconditions(const Matrix<S>& w, const DarbouxBasis<S>& db,
                                  double tol) {
  CHECK(is_symplectic_matrix(db.vectors, tol));
  CHECK(same_span(db.subspace_w(), w, tol));
  CHECK(same_span(db.subspace_womega(), symplectic_complement(w), tol));
  CHECK(same_span(db.e0(), radical(w), tol));
}

}  // namespace

TEST_CASE("coordinate Lagrangian extends to the standard basis") {
  for (int n = 1; n <= 4; ++n) {
    std::vector<int> idx;
    Matrix<Rational> w(2 * n, 0);
    Matrix<Rational> id = Matrix<Rational>::identity(2 * n);
    for (int j = 0; j < n; ++j) w = hcat(w, id.col(j));
    DarbouxBasis<Rational> db = darboux_extend(w);
    CHECK(db.labels == OrbitType{n, 0, 0});
    CHECK(db.vectors == id);
  }
}

TEST_CASE("mixed two-plane in R^4 is symplectic and extends") {
  // W = span{e1 + f2, e2}: omega(e1 + f2, e2) = -1, so W is symplectic.
  Matrix<Rational> w(4, 2);
  w(0, 0) = Rational(1);
  w(3, 0) = Rational(1);
  w(1, 1) = Rational(1);
  CHECK(subspace_type(w) == OrbitType{0, 1, 1});
  DarbouxBasis<Rational> db = darboux_extend(w);
  check_darboux_postconditions(w, db, 0.0);
  CHECK(same_span(hcat(db.eplus(), db.fplus()), w));
}

TEST_CASE("darboux extension postconditions over the rationals") {
  Rng rng(1101);
  int done = 0;
  while (done < 500) {
    int n = oracles::rand_int(rng, 1, 4);
    int k = oracles::rand_int(rng, 1, 2 * n);
    Matrix<Rational> w = oracles::rand_subspace_basis<Rational>(rng, 2 * n, k);
    DarbouxBasis<Rational> db = darboux_extend(w);
    check_darboux_postconditions(w, db, 0.0);
    CHECK(db.labels == subspace_type(w));
    CHECK(db.labels.subspace_dim() == k);
    ++done;
  }
}

TEST_CASE("darboux extension on the float backend") {
  Rng rng(1102);
  for (int trial = 0; trial < 50; ++trial) {
    int n = oracles::rand_int(rng, 1, 4);
    int k = oracles::rand_int(rng, 1, 2 * n);
    Matrix<Rational> wq = oracles::rand_subspace_basis<Rational>(rng, 2 * n, k);
    Matrix<double> w = to_float_matrix(wq);
    DarbouxBasis<double> db = darboux_extend(w);
    check_darboux_postconditions(w, db, 1e-6);
    CHECK(db.labels == subspace_type(wq));
  }
}

TEST_CASE("a supplied splitting is honored and validated") {
  Rng rng(1103);
  for (int trial = 0; trial < 40; ++trial) {
    int n = oracles::rand_int(rng, 1, 3);
    int k = oracles::rand_int(rng, 1, 2 * n);
    Matrix<Rational> w = oracles::rand_subspace_basis<Rational>(rng, 2 * n, k);
    DarbouxBasis<Rational> first = darboux_extend(w);
    AssociatedSplitting<Rational> split{hcat(first.eplus(), first.fplus()),
                                        hcat(first.eminus(), first.fminus()),
                                        first.f0()};
    DarbouxBasis<Rational> again =
        darboux_extend(w, std::optional<AssociatedSplitting<Rational>>(split));
    check_darboux_postconditions(w, again, 0.0);
    CHECK(same_span(hcat(again.eplus(), again.fplus()), split.wplus));
    CHECK(same_span(hcat(again.eminus(), again.fminus()), split.wminus));
    CHECK(same_span(again.f0(), split.w0comp));
  }
}

TEST_CASE("invalid supplied splittings are rejected") {
  const int n = 2;
  // W = span{e1, e2}: Lagrangian, W0 = W.
  Matrix<Rational> w = basis_vectors<Rational>(n, {0, 1});
  DarbouxBasis<Rational> db = darboux_extend(w);
  // Non-isotropic W0comp: the span of f1, f2 is fine, but f1 + e2, f2 is not
  // orthogonal to itself under omega.
  Matrix<Rational> badcomp = basis_vectors<Rational>(n, {2, 3});
  badcomp(1, 0) = Rational(1);  // f1 + e2
  AssociatedSplitting<Rational> bad{db.eplus().cols() ? db.eplus()
                                                      : Matrix<Rational>(4, 0),
                                    Matrix<Rational>(4, 0), badcomp};
  CHECK_THROWS_AS(darboux_extend(w, std::optional<AssociatedSplitting<Rational>>(bad)),
                  std::domain_error);
  // Wplus that is not inside W.
  Matrix<Rational> w2 = basis_vectors<Rational>(n, {0, 2});
  AssociatedSplitting<Rational> bad2{basis_vectors<Rational>(n, {1, 3}),
                                     Matrix<Rational>(4, 0),
                                     Matrix<Rational>(4, 0)};
  CHECK_THROWS_AS(darboux_extend(w2, std::optional<AssociatedSplitting<Rational>>(bad2)),
                  std::domain_error);
}

TEST_CASE("transporter carries one subspace onto another") {
  Rng rng(1104);
  for (int trial = 0; trial < 30; ++trial) {
    int n = oracles::rand_int(rng, 1, 3);
    int n0 = oracles::rand_int(rng, 0, n);
    int np = oracles::rand_int(rng, 0, n - n0);
    if (n0 + np == 0) continue;
    Matrix<Rational> m = model_subspace<Rational>(n, n0, np);
    Matrix<Rational> g1 = oracles::rand_symplectic<Rational>(rng, n, 3);
    Matrix<Rational> g2 = oracles::rand_symplectic<Rational>(rng, n, 3);
    Matrix<Rational> w1 = g1 * m;
    Matrix<Rational> w2 = g2 * m;
    Matrix<Rational> t = transporter(w1, w2);
    CHECK(is_symplectic_matrix(t));
    CHECK(same_span(Matrix<Rational>(t * w1), w2));
  }
}

TEST_CASE("transporter composability and the e-to-f example") {
  // n = 1: span{e1} and span{f1} are both Lagrangian lines.
  Matrix<Rational> e1 = basis_vectors<Rational>(1, {0});
  Matrix<Rational> f1 = basis_vectors<Rational>(1, {1});
  Matrix<Rational> t = transporter(e1, f1);
  CHECK(is_symplectic_matrix(t));
  CHECK(same_span(Matrix<Rational>(t * e1), f1));

  Rng rng(1105);
  const int n = 2;
  Matrix<Rational> m = model_subspace<Rational>(n, 1, 1);
  Matrix<Rational> w1 = oracles::rand_symplectic<Rational>(rng, n, 3) * m;
  Matrix<Rational> w2 = oracles::rand_symplectic<Rational>(rng, n, 3) * m;
  Matrix<Rational> w3 = oracles::rand_symplectic<Rational>(rng, n, 3) * m;
  Matrix<Rational> chain = transporter(w2, w3) * transporter(w1, w2);
  CHECK(is_symplectic_matrix(chain));
  CHECK(same_span(Matrix<Rational>(chain * w1), w3));
}

TEST_CASE("transporter rejects mismatched types") {
  Matrix<Rational> a = basis_vectors<Rational>(2, {0});
  Matrix<Rational> b = basis_vectors<Rational>(2, {0, 2});
  CHECK_THROWS_WITH_AS(transporter(a, b), "transporter: type mismatch",
                       std::domain_error);
}

TEST_CASE("coisotropic unitary darboux bases") {
  Rng rng(1106);
  const int n = 3;
  for (int trial = 0; trial < 25; ++trial) {
    int n0 = oracles::rand_int(rng, 0, n);
    Matrix<double> g = oracles::rand_tame_symplectic(rng, n);
    Matrix<double> jstd = standard_j<double>(n);
    Matrix<double> j = g * jstd * symplectic_inverse(g);
    Matrix<double> w =
        g * model_subspace<double>(n, n0, n - n0);  // coisotropic: n- = 0
    DarbouxBasis<double> db = coisotropic_unitary_darboux(w, j);
    CHECK(db.labels == OrbitType{n0, n - n0, 0});
    CHECK(is_symplectic_matrix(db.vectors, 1e-6));
    // Second half of the basis is J applied to the first half.
    Matrix<double> e = db.vectors.block(0, 0, 2 * n, n);
    Matrix<double> f = db.vectors.block(0, n, 2 * n, n);
    CHECK(max_abs(f - j * e) < 1e-8);
    // e0 spans W^omega; the whole W is spanned by {e, J e_l for l > n0}.
    CHECK(same_span(db.e0(), symplectic_complement(w), 1e-7));
    CHECK(same_span(db.subspace_w(), w, 1e-7));
  }
  // W = V: type (0, n, 0).
  Matrix<double> full = Matrix<double>::identity(2 * n);
  DarbouxBasis<double> db = coisotropic_unitary_darboux(full, standard_j<double>(n));
  CHECK(db.labels == OrbitType{0, n, 0});
  CHECK(is_symplectic_matrix(db.vectors, 1e-8));
  // Lagrangian coordinate plane.
  Matrix<double> lag = model_subspace<double>(n, n, 0);
  DarbouxBasis<double> dbl = coisotropic_unitary_darboux(lag, standard_j<double>(n));
  CHECK(dbl.labels == OrbitType{n, 0, 0});
  CHECK(same_span(dbl.e0(), lag, 1e-8));
  // Non-coisotropic input is rejected.
  Matrix<double> iso = to_float_matrix(basis_vectors<Rational>(3, {0}));
  CHECK_THROWS_AS(coisotropic_unitary_darboux(iso, standard_j<double>(3)),
                  std::domain_error);
}

TEST_CASE("j-invariant complements exist under the checked hypothesis") {
  Rng rng(1107);
  for (int trial = 0; trial < 25; ++trial) {
    int n = oracles::rand_int(rng, 1, 3);
    int n0 = oracles::rand_int(rng, 0, n);
    int np = oracles::rand_int(rng, 0, n - n0);
    if (n0 + np == 0) continue;
    Matrix<double> g = oracles::rand_tame_symplectic(rng, n);
    Matrix<double> j = g * standard_j<double>(n) * symplectic_inverse(g);
    Matrix<double> w = g * model_subspace<double>(n, n0, np);
    Matrix<double> comp = j_invariant_complement(w, j);
    CHECK(comp.cols() == 2 * np);
    CHECK(same_span(hcat(Matrix<double>(radical(w)), comp), w, 1e-6));
    CHECK(same_span(hcat(comp, Matrix<double>(j * comp)), comp, 1e-6));
  }
}

TEST_CASE("j-invariant complement edge cases and hypothesis failure") {
  const int n = 2;
  Matrix<double> j = standard_j<double>(n);
  // Symplectic J-invariant subspace: the complement is the subspace itself.
  Matrix<double> sympl = to_float_matrix(basis_vectors<Rational>(n, {0, 2}));
  Matrix<double> comp = j_invariant_complement(sympl, j);
  CHECK(same_span(comp, sympl, 1e-8));
  // Isotropic subspace: the complement is zero.
  Matrix<double> iso = to_float_matrix(basis_vectors<Rational>(n, {0, 1}));
  CHECK(j_invariant_complement(iso, j).cols() == 0);
  // W = span{e1, e2 + f1} is symplectic but not J-invariant: rejected.
  Matrix<double> w(4, 2);
  w(0, 0) = 1.0;
  w(1, 1) = 1.0;
  w(2, 1) = 1.0;
  CHECK_THROWS_WITH_AS(j_invariant_complement(w, j),
                       "j_invariant_complement: W + JW0 not J-invariant",
                       std::domain_error);
}

TEST_CASE("uniqueness of the j-invariant complement by lattice search") {
  // W = span{e1, e2, f2} in R^4, standard J, W0 = span{e1}. Complements of
  // W0 in W have the form span{e2 + a e1, f2 + b e1}; J-invariance forces
  // a = b = 0, so the lattice search finds exactly one J-invariant one.
  const int n = 2;
  Matrix<Rational> w = basis_vectors<Rational>(n, {0, 1, 3});
  Matrix<Rational> j = standard_j<Rational>(n);
  int found = 0;
  Matrix<Rational> witness(4, 0);
  for (int anum = -4; anum <= 4; ++anum) {
    for (int bnum = -4; bnum <= 4; ++bnum) {
      Matrix<Rational> cand(4, 2);
      cand(1, 0) = Rational(1);
      cand(0, 0) = Rational(anum, 2);
      cand(3, 1) = Rational(1);
      cand(0, 1) = Rational(bnum, 2);
      Matrix<Rational> withj = hcat(cand, Matrix<Rational>(j * cand));
      if (rank_of(withj) == 2) {
        ++found;
        witness = cand;
      }
    }
  }
  CHECK(found == 1);
  Matrix<double> comp = j_invariant_complement(to_float_matrix(w),
                                               to_float_matrix(j));
  CHECK(same_span(comp, to_float_matrix(witness), 1e-8));
}

TEST_CASE("j_splitting produces orthogonal j-invariant symplectic pieces") {
  Rng rng(1108);
  for (int trial = 0; trial < 20; ++trial) {
    int n = oracles::rand_int(rng, 2, 3);
    int n0 = oracles::rand_int(rng, 0, n);
    int np = oracles::rand_int(rng, 0, n - n0);
    if (n0 + np == 0) continue;
    Matrix<double> g = oracles::rand_tame_symplectic(rng, n);
    Matrix<double> j = g * standard_j<double>(n) * symplectic_inverse(g);
    Matrix<double> w = g * model_subspace<double>(n, n0, np);
    JSplitting<double> js = j_splitting(w, j);
    CHECK(js.w0_plus_jw0.cols() == 2 * n0);
    CHECK(js.wplusJ.cols() == 2 * np);
    CHECK(js.wminusJ.cols() == 2 * (n - n0 - np));
    // Mutual g_J-orthogonality.
    CHECK(max_abs(metric_gram(js.w0_plus_jw0, js.wplusJ, j)) < 1e-7);
    CHECK(max_abs(metric_gram(js.w0_plus_jw0, js.wminusJ, j)) < 1e-7);
    CHECK(max_abs(metric_gram(js.wplusJ, js.wminusJ, j)) < 1e-7);
    // J-invariance of each piece.
    for (const Matrix<double>* piece :
         {&js.w0_plus_jw0, &js.wplusJ, &js.wminusJ}) {
      if (piece->cols() == 0) continue;
      CHECK(same_span(hcat(*piece, Matrix<double>(j * (*piece))), *piece, 1e-6));
    }
    // Recovered subspaces.
    Matrix<double> w0 = radical(w);
    CHECK(same_span(hcat(w0, js.wplusJ), w, 1e-6));
    CHECK(same_span(hcat(w0, js.wminusJ), symplectic_complement(w), 1e-6));
    CHECK(is_symplectic_matrix(js.basis.vectors, 1e-6));
  }
}

TEST_CASE("reduction at an isotropic subspace, exact backend") {
  // W0 = span{e1} in R^4: the reduced space is spanned by {e2, f2}.
  Matrix<Rational> u = basis_vectors<Rational>(2, {0});
  ReducedSpace<Rational> red = reduce_at(u);
  CHECK(red.m() == 1);
  CHECK(same_span(red.complement, basis_vectors<Rational>(2, {1, 3})));
  // Darboux complement: the induced form in coordinates is standard.
  CHECK(omega_gram(red.complement, red.complement) ==
        omega_gram(Matrix<Rational>::identity(2), Matrix<Rational>::identity(2)));

  // Trivial reduction: W0 = 0 gives back the whole space.
  ReducedSpace<Rational> triv = reduce_at(Matrix<Rational>(4, 0));
  CHECK(triv.m() == 2);
  CHECK(same_span(triv.complement, Matrix<Rational>::identity(4)));

  // project . lift = id and the induced pairing matches omega.
  Rng rng(1109);
  for (int trial = 0; trial < 25; ++trial) {
    int n = oracles::rand_int(rng, 2, 4);
    int k = oracles::rand_int(rng, 1, n - 1);
    Matrix<Rational> g = oracles::rand_symplectic<Rational>(rng, n, 3);
    Matrix<Rational> u0 = g * model_subspace<Rational>(n, k, 0);
    ReducedSpace<Rational> r = reduce_at(u0);
    int m = r.m();
    CHECK(m == n - k);
    Matrix<Rational> coords = oracles::rand_matrix<Rational>(rng, 2 * m, 2);
    CHECK(r.project(r.lift(coords)) == coords);
    // Pairing: omega-tilde(project u, project v) = omega(u, v) on W0^omega.
    Matrix<Rational> womega = hcat(u0, r.complement);
    Matrix<Rational> x = oracles::rand_matrix<Rational>(rng, womega.cols(), 1);
    Matrix<Rational> y = oracles::rand_matrix<Rational>(rng, womega.cols(), 1);
    Matrix<Rational> uu = womega * x;
    Matrix<Rational> vv = womega * y;
    CHECK(omega_form(r.project(uu), r.project(vv)) == omega_form(uu, vv));
  }
}

TEST_CASE("reduction preserves subspace types") {
  Rng rng(1110);
  int done = 0;
  while (done < 25) {
    int n = oracles::rand_int(rng, 2, 4);
    int k = oracles::rand_int(rng, 1, n - 1);
    Matrix<Rational> g = oracles::rand_symplectic<Rational>(rng, n, 3);
    Matrix<Rational> u0 = g * model_subspace<Rational>(n, k, 0);
    ReducedSpace<Rational> r = reduce_at(u0);
    int m = r.m();
    int d = oracles::rand_int(rng, 1, 2 * m);
    Matrix<Rational> what;
    try {
      what = oracles::rand_subspace_basis<Rational>(rng, 2 * m, d);
    } catch (const std::logic_error&) {
      continue;
    }
    OrbitType t = subspace_type(what);
    Matrix<Rational> w = hcat(u0, r.lift(what));
    CHECK(subspace_type(w) == OrbitType{k + t.n0, t.nplus, t.nminus});
    ++done;
  }
}

TEST_CASE("reduction with a compatible complex structure") {
  Rng rng(1111);
  // Standard example first: W0 = span{e1} in R^4 with the standard J.
  Matrix<double> u = to_float_matrix(basis_vectors<Rational>(2, {0}));
  ReducedSpace<double> red = reduce_at(u, std::optional<Matrix<double>>(
                                              standard_j<double>(2)));
  CHECK(red.m() == 1);
  CHECK(same_span(red.complement, to_float_matrix(basis_vectors<Rational>(2, {1, 3})),
                  1e-8));
  CHECK(max_abs(red.complement * red.j_tilde() -
                standard_j<double>(2) * red.complement) < 1e-8);

  for (int trial = 0; trial < 20; ++trial) {
    int n = oracles::rand_int(rng, 2, 4);
    int k = oracles::rand_int(rng, 1, n - 1);
    Matrix<double> g = oracles::rand_tame_symplectic(rng, n);
    Matrix<double> j = g * standard_j<double>(n) * symplectic_inverse(g);
    Matrix<double> u0 = g * model_subspace<double>(n, k, 0);
    ReducedSpace<double> r = reduce_at(u0, std::optional<Matrix<double>>(j));
    int m = r.m();
    CHECK(m == n - k);
    // The complement basis is Darboux and J acts as the standard structure.
    CHECK(max_abs(omega_gram(r.complement, r.complement) -
                  to_float_matrix(omega_gram(Matrix<Rational>::identity(2 * m),
                                             Matrix<Rational>::identity(2 * m)))) <
          1e-7);
    CHECK(max_abs(j * r.complement - r.complement * r.j_tilde()) < 1e-7);
    Matrix<double> coords = oracles::rand_matrix<double>(rng, 2 * m, 2);
    CHECK(max_abs(r.project(r.lift(coords)) - coords) < 1e-7);
  }
  // Non-isotropic reduction locus is rejected.
  Matrix<double> bad = to_float_matrix(basis_vectors<Rational>(2, {0, 2}));
  CHECK_THROWS_AS(reduce_at(bad), std::domain_error);
}
