#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "oracles.hpp"
#include "symplecta/linalg.hpp"
#include "symplecta/numeric.hpp"

using namespace symplecta;
using oracles::Rng;
using C = std::complex<double>;

TEST_CASE("rank matches known-rank constructions on all backends") {
  Rng rng(20260819);
  for (int trial = 0; trial < 40; ++trial) {
    int rows = oracles::rand_int(rng, 1, 7);
    int cols = oracles::rand_int(rng, 1, 7);
    int r = oracles::rand_int(rng, 0, std::min(rows, cols));
    CHECK(rank_of(oracles::rand_known_rank<Rational>(rng, rows, cols, r)) == r);
    CHECK(rank_of(oracles::rand_known_rank<Gaussian>(rng, rows, cols, r)) == r);
    CHECK(rank_of(oracles::rand_known_rank<double>(rng, rows, cols, r)) == r);
    CHECK(rank_of(oracles::rand_known_rank<C>(rng, rows, cols, r)) == r);
  }
}

TEST_CASE("nullspace: kernel property and dimension") {
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    int rows = oracles::rand_int(rng, 1, 6);
    int cols = oracles::rand_int(rng, 1, 6);
    int r = oracles::rand_int(rng, 0, std::min(rows, cols));
    Matrix<Rational> m = oracles::rand_known_rank<Rational>(rng, rows, cols, r);
    Matrix<Rational> ker = nullspace(m);
    CHECK(ker.cols() == cols - r);
    CHECK(is_zero_matrix(m * ker));
    CHECK(rank_of(ker) == ker.cols());
  }
}

TEST_CASE("canonical column span is a complete invariant of the span") {
  Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    int dim = oracles::rand_int(rng, 2, 6);
    int k = oracles::rand_int(rng, 1, dim);
    Matrix<Rational> a = oracles::rand_subspace_basis<Rational>(rng, dim, k);
    // Same span under an invertible column mix.
    Matrix<Rational> mixed = a * oracles::rand_invertible<Rational>(rng, k);
    CHECK(same_colspan_exact(a, mixed));
    // Extending by an independent direction changes the canonical form.
    if (k < dim) {
      Matrix<Rational> bigger =
          column_basis(hcat(a, oracles::rand_subspace_basis<Rational>(rng, dim, dim)));
      CHECK(!same_colspan_exact(a, bigger));
    }
  }
}

TEST_CASE("intersect_columns: containment and dimension via known overlap") {
  Rng rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    int dim = 6;
    int shared = oracles::rand_int(rng, 0, 2);
    int extra_a = oracles::rand_int(rng, 0, 2);
    int extra_b = oracles::rand_int(rng, 0, 2);
    // Distinct blocks of an invertible matrix guarantee the intersection is
    // exactly the shared block.
    Matrix<Rational> big = oracles::rand_invertible<Rational>(rng, dim);
    Matrix<Rational> s = big.block(0, 0, dim, shared);
    Matrix<Rational> ea = big.block(0, shared, dim, extra_a);
    Matrix<Rational> eb = big.block(0, shared + extra_a, dim, extra_b);
    Matrix<Rational> a = hcat(s, ea);
    Matrix<Rational> b = hcat(s, eb);
    if (a.cols() == 0 || b.cols() == 0) continue;
    Matrix<Rational> inter = intersect_columns(a, b);
    CHECK(inter.cols() == shared);
    if (shared > 0) CHECK(same_colspan_exact(inter, s));
  }
}

TEST_CASE("coords_in_basis reproduces columns exactly") {
  Rng rng(17);
  Matrix<Gaussian> basis = oracles::rand_subspace_basis<Gaussian>(rng, 5, 3);
  Matrix<Gaussian> mix = oracles::rand_matrix<Gaussian>(rng, 3, 2);
  Matrix<Gaussian> targets = basis * mix;
  Matrix<Gaussian> x = coords_in_basis(basis, targets);
  CHECK(x == mix);
  Matrix<Gaussian> outside = oracles::rand_subspace_basis<Gaussian>(rng, 5, 5);
  CHECK_THROWS_AS((void)coords_in_basis(basis, outside), std::domain_error);
}

TEST_CASE("signature by congruence recovers transported inertia") {
  Rng rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    int n = oracles::rand_int(rng, 1, 6);
    int pos = oracles::rand_int(rng, 0, n);
    int neg = oracles::rand_int(rng, 0, n - pos);
    Inertia want{n - pos - neg, pos, neg};
    CHECK(signature_by_congruence(
              oracles::rand_known_signature<Rational>(rng, n, pos, neg)) == want);
    CHECK(signature_by_congruence(
              oracles::rand_known_signature<Gaussian>(rng, n, pos, neg)) == want);
    CHECK(signature_by_congruence(
              oracles::rand_known_signature<double>(rng, n, pos, neg)) == want);
    CHECK(signature_by_congruence(
              oracles::rand_known_signature<C>(rng, n, pos, neg)) == want);
  }
}

TEST_CASE("signature: zero-diagonal hyperbolic pair") {
  // [[0, 1], [1, 0]] has inertia (0, 1, 1).
  Matrix<Rational> h(2, 2);
  h(0, 1) = Rational(1);
  h(1, 0) = Rational(1);
  CHECK(signature_by_congruence(h) == Inertia{0, 1, 1});
  // Purely imaginary coupling in the hermitian case.
  Matrix<Gaussian> hi(2, 2);
  hi(0, 1) = Gaussian::i();
  hi(1, 0) = Gaussian(Rational(0), Rational(-1));
  CHECK(signature_by_congruence(hi) == Inertia{0, 1, 1});
}

TEST_CASE("signature rejects non-hermitian input") {
  Matrix<Rational> h(2, 2);
  h(0, 1) = Rational(1);
  CHECK_THROWS_AS((void)signature_by_congruence(h), std::domain_error);
}

TEST_CASE("jacobi symmetric eigensolver") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    int n = oracles::rand_int(rng, 1, 8);
    Matrix<double> raw = oracles::rand_matrix<double>(rng, n, n);
    Matrix<double> a = raw + raw.transpose();
    SymEig e = jacobi_eig_sym(a);
    Matrix<double> d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = e.values[i];
    CHECK(fro_norm(a * e.vectors - e.vectors * d) < 1e-10 * std::max(1.0, max_abs(a)));
    CHECK(fro_norm(e.vectors.transpose() * e.vectors - Matrix<double>::identity(n)) <
          1e-12);
    for (int i = 0; i + 1 < n; ++i) CHECK(e.values[i] <= e.values[i + 1]);
  }
}

TEST_CASE("jacobi hermitian eigensolver via real embedding") {
  Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    int n = oracles::rand_int(rng, 1, 6);
    Matrix<C> raw = oracles::rand_matrix<C>(rng, n, n);
    Matrix<C> h = raw + raw.ct();
    HermEig e = jacobi_eig_herm(h);
    Matrix<C> d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = C(e.values[i], 0);
    CHECK(fro_norm(h * e.vectors - e.vectors * d) < 1e-9 * std::max(1.0, max_abs(h)));
    CHECK(fro_norm(e.vectors.ct() * e.vectors - Matrix<C>::identity(n)) < 1e-10);
  }
}

TEST_CASE("sym_exp and spd_log are mutually inverse") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    int n = oracles::rand_int(rng, 1, 6);
    Matrix<double> raw = oracles::rand_matrix<double>(rng, n, n);
    Matrix<double> a = 0.3 * (raw + raw.transpose());
    Matrix<double> e = sym_exp(a);
    CHECK(fro_norm(spd_log(e) - a) < 1e-10 * std::max(1.0, max_abs(a)));
  }
  Matrix<double> negdef = -1.0 * Matrix<double>::identity(2);
  CHECK_THROWS_AS((void)spd_log(negdef), std::domain_error);
}

TEST_CASE("polar decomposition of symplectic matrices") {
  Rng rng(37);
  for (int trial = 0; trial < 12; ++trial) {
    int n = oracles::rand_int(rng, 1, 3);
    Matrix<double> g = oracles::rand_symplectic<double>(rng, n, 3);
    PolarFactors pf = polar_decompose(g, 1e-10, /*check_symplectic=*/true);
    CHECK(fro_norm(pf.u * sym_exp(pf.p) - g) < 1e-8 * std::max(1.0, max_abs(g)));
  }
}

TEST_CASE("orthonormalization and projector distance") {
  Rng rng(41);
  Matrix<double> a = oracles::rand_subspace_basis<double>(rng, 6, 3);
  Matrix<double> mixed = a * oracles::rand_invertible<double>(rng, 3);
  CHECK(subspace_distance(a, mixed) < 1e-10);
  Matrix<double> other = oracles::rand_subspace_basis<double>(rng, 6, 3);
  CHECK(subspace_distance(a, other) > 1e-3);  // generic spans differ
  Matrix<C> qc = orthonormalize_columns(complexify(a));
  CHECK(fro_norm(qc.ct() * qc - Matrix<C>::identity(3)) < 1e-12);
}

TEST_CASE("cholesky of hermitian positive definite matrices") {
  Rng rng(43);
  for (int trial = 0; trial < 8; ++trial) {
    int n = oracles::rand_int(rng, 1, 5);
    Matrix<C> b = oracles::rand_matrix<C>(rng, n, n);
    Matrix<C> m = b.ct() * b + Matrix<C>::identity(n);
    Matrix<C> l = cholesky_herm(m);
    CHECK(fro_norm(l * l.ct() - m) < 1e-10 * std::max(1.0, max_abs(m)));
  }
}
