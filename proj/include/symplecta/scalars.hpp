#pragma once

// Scalar backends.
//
// Exact:    Rational  (arbitrary-precision rationals)
//           Gaussian  (Rational + i*Rational)
// Floating: double, std::complex<double>
//
// Structural decisions (ranks, signatures, factorizations) are meant to run
// on the exact backends; the floating backends carry the transcendental
// operations (exp, log, polar, orthonormalization) under a Tolerance policy.
// The two families are never mixed implicitly: every template here is
// instantiated for exactly one scalar type.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace symplecta {

using Rational = boost::multiprecision::cpp_rational;

// Numeric tolerances. rank_tol gates rank/signature/membership decisions on
// the floating backends; residual_tol gates iterative solvers and
// factorization residuals.
struct Tolerance {
  double rank_tol = 1e-9;
  double residual_tol = 1e-10;
};

// Gaussian rational: a + b*i with exact rational a, b.
struct Gaussian {
  Rational re;
  Rational im;

  Gaussian() : re(0), im(0) {}
  Gaussian(int v) : re(v), im(0) {}  // NOLINT: implicit int lift is intended
  Gaussian(Rational r) : re(std::move(r)), im(0) {}
  Gaussian(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static Gaussian i() { return Gaussian(Rational(0), Rational(1)); }

  friend Gaussian operator+(const Gaussian& x, const Gaussian& y) {
    return Gaussian(x.re + y.re, x.im + y.im);
  }
  friend Gaussian operator-(const Gaussian& x, const Gaussian& y) {
    return Gaussian(x.re - y.re, x.im - y.im);
  }
  Gaussian operator-() const { return Gaussian(-re, -im); }
  friend Gaussian operator*(const Gaussian& x, const Gaussian& y) {
    return Gaussian(x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re);
  }
  friend Gaussian operator/(const Gaussian& x, const Gaussian& y) {
    Rational d = y.re * y.re + y.im * y.im;
    if (d == 0) throw std::domain_error("Gaussian: division by zero");
    return Gaussian((x.re * y.re + x.im * y.im) / d,
                    (x.im * y.re - x.re * y.im) / d);
  }
  Gaussian& operator+=(const Gaussian& y) { return *this = *this + y; }
  Gaussian& operator-=(const Gaussian& y) { return *this = *this - y; }
  Gaussian& operator*=(const Gaussian& y) { return *this = *this * y; }
  Gaussian& operator/=(const Gaussian& y) { return *this = *this / y; }
  friend bool operator==(const Gaussian& x, const Gaussian& y) {
    return x.re == y.re && x.im == y.im;
  }
  friend bool operator!=(const Gaussian& x, const Gaussian& y) {
    return !(x == y);
  }
};

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

// Nearest rational with denominator <= max_den (continued fractions).
// Used when exact factorizations receive floating inputs that are known to
// be rational within tolerance.
inline Rational rationalize(double x, double tol, std::int64_t max_den = 1 << 30) {
  if (!std::isfinite(x)) throw std::domain_error("rationalize: non-finite");
  bool neg = x < 0;
  double v = neg ? -x : x;
  // Continued-fraction convergents p/q of v.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(frac);
    if (fl > static_cast<double>(std::numeric_limits<std::int64_t>::max() / 4)) break;
    auto a = static_cast<std::int64_t>(fl);
    std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::abs(approx - v) <= tol) break;
    double rem = frac - fl;
    if (rem < 1e-18) break;
    frac = 1.0 / rem;
  }
  double approx = static_cast<double>(p1) / static_cast<double>(q1);
  if (std::abs(approx - v) > tol)
    throw std::domain_error("rationalize: value is not rational within tolerance");
  Rational r(p1, q1);
  return neg ? -r : r;
}

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool is_exact = true;
  static constexpr bool is_complex = false;
  using real_type = Rational;
  using complex_type = Gaussian;
  using float_type = double;
  static Rational conj(const Rational& x) { return x; }
  static Rational real(const Rational& x) { return x; }
  static Rational imag(const Rational&) { return Rational(0); }
  static bool is_zero(const Rational& x, double) { return x == 0; }
  static double abs_approx(const Rational& x) { return std::abs(to_double(x)); }
  static double to_float(const Rational& x) { return to_double(x); }
  static Rational from_int(long v) { return Rational(v); }
};

template <>
struct scalar_traits<Gaussian> {
  static constexpr bool is_exact = true;
  static constexpr bool is_complex = true;
  using real_type = Rational;
  using complex_type = Gaussian;
  using float_type = std::complex<double>;
  static Gaussian conj(const Gaussian& x) { return Gaussian(x.re, -x.im); }
  static Rational real(const Gaussian& x) { return x.re; }
  static Rational imag(const Gaussian& x) { return x.im; }
  static bool is_zero(const Gaussian& x, double) { return x.re == 0 && x.im == 0; }
  static double abs_approx(const Gaussian& x) {
    return std::hypot(to_double(x.re), to_double(x.im));
  }
  static std::complex<double> to_float(const Gaussian& x) {
    return {to_double(x.re), to_double(x.im)};
  }
  static Gaussian from_int(long v) { return Gaussian(Rational(v)); }
};

template <>
struct scalar_traits<double> {
  static constexpr bool is_exact = false;
  static constexpr bool is_complex = false;
  using real_type = double;
  using complex_type = std::complex<double>;
  using float_type = double;
  static double conj(double x) { return x; }
  static double real(double x) { return x; }
  static double imag(double) { return 0.0; }
  static bool is_zero(double x, double tol) { return std::abs(x) <= tol; }
  static double abs_approx(double x) { return std::abs(x); }
  static double to_float(double x) { return x; }
  static double from_int(long v) { return static_cast<double>(v); }
};

template <>
struct scalar_traits<std::complex<double>> {
  static constexpr bool is_exact = false;
  static constexpr bool is_complex = true;
  using real_type = double;
  using complex_type = std::complex<double>;
  using float_type = std::complex<double>;
  static std::complex<double> conj(const std::complex<double>& x) {
    return std::conj(x);
  }
  static double real(const std::complex<double>& x) { return x.real(); }
  static double imag(const std::complex<double>& x) { return x.imag(); }
  static bool is_zero(const std::complex<double>& x, double tol) {
    return std::abs(x) <= tol;
  }
  static double abs_approx(const std::complex<double>& x) { return std::abs(x); }
  static std::complex<double> to_float(const std::complex<double>& x) { return x; }
  static std::complex<double> from_int(long v) {
    return {static_cast<double>(v), 0.0};
  }
};

template <class S>
inline constexpr bool is_exact_v = scalar_traits<S>::is_exact;
template <class S>
inline constexpr bool is_complex_v = scalar_traits<S>::is_complex;

// The imaginary unit of a complex scalar type.
template <class S>
S unit_imag() {
  static_assert(is_complex_v<S>, "unit_imag: complex scalar required");
  if constexpr (is_exact_v<S>) return Gaussian::i();
  else return S(0.0, 1.0);
}

}  // namespace symplecta
