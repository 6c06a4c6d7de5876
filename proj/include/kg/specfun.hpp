#pragma once

// Gauss hypergeometric series and modified Bessel functions of the first
// kind, as needed by the de Sitter and Minkowski kernels.
//
// All routines are pure and templated on the scalar type.  Sums are
// accumulated in long double whenever Scalar is narrower than that.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <type_traits>

#include "kg/errors.hpp"

namespace kg {

template <typename Scalar>
struct EvalResult {
  Scalar value{};
  Scalar est_error{};  ///< bound on truncation plus rounding error
  int terms_used = 0;
};

/// Argument of F(a,a;c;z) with c restricted to {1, 2}.
template <typename Scalar>
struct HypergeomDiagArg {
  Scalar a{};
  int c = 1;
  Scalar z{};

  void validate() const {
    if (c != 1 && c != 2) throw DomainError("gauss_2f1_diag: c must be 1 or 2");
    if (!(z >= 0 && z < 1)) throw DomainError("gauss_2f1_diag: z must lie in [0,1)");
  }
};

inline constexpr int kMaxSeriesTerms = 100000;

namespace detail {

template <typename Scalar>
using accum_t = std::conditional_t<(std::numeric_limits<Scalar>::digits <
                                    std::numeric_limits<long double>::digits),
                                   long double, Scalar>;

template <typename T>
std::optional<long> nonpositive_integer(T x) {
  if (x > 0) return std::nullopt;
  const T r = std::round(x);
  if (r == x && r > T(-1e15)) return static_cast<long>(-r);
  return std::nullopt;
}

template <typename T>
T rgamma(T x) {
  if (nonpositive_integer(x)) return T(0);
  return T(1) / std::tgamma(x);
}

template <typename T>
T digamma(T x) {
  constexpr T pi = std::numbers::pi_v<T>;
  if (x <= 0) {
    if (x == std::floor(x)) throw DomainError("digamma: pole at non-positive integer");
    return digamma(T(1) - x) - pi / std::tan(pi * x);
  }
  T shift = 0;
  while (x < 20) {
    shift -= T(1) / x;
    x += 1;
  }
  const T inv = T(1) / x;
  const T inv2 = inv * inv;
  const T asym =
      inv2 * (T(1) / 12 -
              inv2 * (T(1) / 120 -
                      inv2 * (T(1) / 252 -
                              inv2 * (T(1) / 240 -
                                      inv2 * (T(1) / 132 -
                                              inv2 * (T(691) / 32760 - inv2 * (T(1) / 12)))))));
  return shift + std::log(x) - inv / 2 - asym;
}

template <typename T>
struct SeriesSum {
  T sum{};
  T error{};
  int terms = 0;
};

// Sum of t_n = (a)_n (b)_n / ((c)_n n!) z^n for n >= first.  With first == 1
// the result is divided by z, i.e. (F - 1)/z, summed without cancellation.
//
// Stopping rule: the next term is below tol*|sum| and a geometric bound on
// the remaining tail is below tol*max(1,|sum|).  The bound uses
// |t_{m+1}/t_m| <= z, which holds once m exceeds the point where
// (m+a)(m+b) <= (m+c)(m+1); when a+b-c-1 >= 0 that never happens and the
// current ratio is used as an asymptotic estimate instead.
template <typename T>
SeriesSum<T> hyp_series(T a, T b, T c, T z, T tol, int first = 0) {
  if (nonpositive_integer(c)) throw DomainError("gauss_2f1: c is a non-positive integer");
  const T kappa = a + b - c - T(1);
  T n_mono = std::max({T(0), std::ceil(-a), std::ceil(-b), std::ceil(-c)});
  if (kappa < 0) n_mono = std::max(n_mono, std::ceil((a * b - c) / (-kappa)));

  SeriesSum<T> out;
  T term = first == 0 ? T(1) : a * b / c;
  T abs_sum = std::abs(term);
  out.sum = term;
  out.terms = 1;
  if (term == 0) return out;

  for (long n = first;; ++n) {
    const T nn = static_cast<T>(n);
    const T next = term * ((a + nn) * (b + nn) / ((c + nn) * (nn + 1))) * z;
    if (next == 0) {
      out.error = 4 * std::numeric_limits<T>::epsilon() * abs_sum;
      return out;  // terminated polynomial or z == 0
    }
    const T scale = std::max(T(1), std::abs(out.sum));
    if (std::abs(next) <= tol * scale) {
      T rho;
      bool certified;
      if (kappa < 0) {
        rho = z;
        certified = nn + 1 >= n_mono;
      } else {
        const T m = nn + 1;
        rho = z * std::abs((a + m) * (b + m) / ((c + m) * (m + 1)));
        certified = m > 10 * (std::abs(a) + std::abs(b) + std::abs(c)) && rho < 1;
      }
      if (certified) {
        const T tail = std::abs(next) / (T(1) - rho);
        if (tail <= tol * scale) {
          out.error = tail + 4 * std::numeric_limits<T>::epsilon() * abs_sum;
          return out;
        }
      }
    }
    out.sum += next;
    abs_sum += std::abs(next);
    term = next;
    if (++out.terms > kMaxSeriesTerms)
      throw ConvergenceError("gauss_2f1: series term cap reached (z=" + std::to_string(double(z)) +
                             ")");
  }
}

// A&S 15.3.6, c-a-b not an integer.
template <typename T>
SeriesSum<T> hyp_connection_generic(T a, T b, T c, T w, T tol) {
  const T s = c - a - b;
  const T A1 = std::tgamma(c) * std::tgamma(s) * rgamma(c - a) * rgamma(c - b);
  const T A2 = std::tgamma(c) * std::tgamma(-s) * rgamma(a) * rgamma(b);
  const T ws = std::pow(w, s);
  const auto S1 = hyp_series(a, b, T(1) - s, w, tol * T(0.1));
  const auto S2 = hyp_series(c - a, c - b, T(1) + s, w, tol * T(0.1));
  const T p1 = A1 * S1.sum;
  const T p2 = ws * A2 * S2.sum;
  SeriesSum<T> out;
  out.sum = p1 + p2;
  out.error = std::abs(A1) * S1.error + std::abs(ws * A2) * S2.error +
              8 * std::numeric_limits<T>::epsilon() * (std::abs(p1) + std::abs(p2));
  out.terms = S1.terms + S2.terms;
  return out;
}

// A&S 15.3.10 (m == 0) and 15.3.11 (m >= 1), c = a + b + m.
// The tail estimate is geometric with ratio 2w; not a certified bound.
template <typename T>
SeriesSum<T> hyp_connection_log(T a, T b, long m, T w, T tol) {
  const T c = a + b + T(m);
  const T lnw = std::log(w);
  SeriesSum<T> out;

  T finite = 0;
  T finite_abs = 0;
  if (m >= 1) {
    T coef = 1;
    for (long n = 0; n < m; ++n) {
      finite += coef;
      finite_abs += std::abs(coef);
      const T nn = static_cast<T>(n);
      coef *= (a + nn) * (b + nn) / ((nn + 1) * (T(1 - m) + nn)) * w;
    }
    const T pref = std::tgamma(T(m)) * std::tgamma(c) * rgamma(a + T(m)) * rgamma(b + T(m));
    finite *= pref;
    finite_abs *= std::abs(pref);
    out.terms = static_cast<int>(m);
  }

  // Logarithmic series: coef_n = (a+m)_n (b+m)_n / (n! (n+m)!) w^n.
  const T am = a + T(m);
  const T bm = b + T(m);
  T coef = std::exp(-std::lgamma(T(m) + 1));
  T psi_n1 = -std::numbers::egamma_v<T>;  // psi(1)
  T psi_nm1 = digamma(T(m) + 1);
  T psi_a = digamma(am);
  T psi_b = digamma(bm);
  T sum = 0;
  T abs_sum = 0;
  const T rho = 2 * w;
  for (long n = 0;; ++n) {
    const T bracket = m == 0 ? (2 * psi_n1 - psi_a - psi_b - lnw)
                             : (lnw - psi_n1 - psi_nm1 + psi_a + psi_b);
    const T term = coef * bracket;
    sum += term;
    abs_sum += std::abs(term);
    ++out.terms;
    const T tail = std::abs(term) * rho / (T(1) - rho);
    if (n > 2 && tail <= tol * T(0.1) * std::max(T(1), std::abs(sum))) {
      out.error = tail;
      break;
    }
    if (out.terms > kMaxSeriesTerms) throw ConvergenceError("gauss_2f1: log-series term cap reached");
    const T nn = static_cast<T>(n);
    coef *= (am + nn) * (bm + nn) / ((nn + 1) * (nn + 1 + T(m))) * w;
    psi_n1 += T(1) / (nn + 1);
    psi_nm1 += T(1) / (nn + 1 + T(m));
    psi_a += T(1) / (am + nn);
    psi_b += T(1) / (bm + nn);
  }

  T pref;
  if (m == 0) {
    pref = std::tgamma(c) * rgamma(a) * rgamma(b);
  } else {
    const T sign = (m % 2 == 0) ? T(1) : T(-1);
    pref = -sign * std::pow(w, T(m)) * std::tgamma(c) * rgamma(a) * rgamma(b);
  }
  out.sum = finite + pref * sum;
  out.error = std::abs(pref) * out.error +
              16 * std::numeric_limits<T>::epsilon() * (finite_abs + std::abs(pref) * abs_sum);
  return out;
}

inline constexpr double kConnectionThreshold = 0.9;
inline constexpr double kIntegerSnap = 1e-10;

}  // namespace detail

/// F(a,b;c;z) for z in [0,1), c > 0 (or negative non-integer).
///
/// `one_minus_z`, when supplied, must equal 1-z; callers that know 1-z more
/// accurately than z (kernel arguments near the light cone apex) pass it so
/// the z -> 1 branch does not lose digits to the subtraction.
template <typename Scalar>
EvalResult<Scalar> gauss_2f1(Scalar a, Scalar b, Scalar c, Scalar z, Scalar tol,
                             Scalar one_minus_z = std::numeric_limits<Scalar>::quiet_NaN()) {
  using T = detail::accum_t<Scalar>;
  if (!(z >= 0 && z < 1)) throw DomainError("gauss_2f1: z must lie in [0,1)");
  if (!(tol > 0)) throw DomainError("gauss_2f1: tol must be positive");
  if (detail::nonpositive_integer(c)) throw DomainError("gauss_2f1: c is a non-positive integer");

  const T ta = a, tb = b, tc = c, tz = z;
  const T w = std::isnan(one_minus_z) ? T(1) - tz : T(one_minus_z);
  const T ttol = tol;

  detail::SeriesSum<T> s;
  const bool polynomial = detail::nonpositive_integer(ta) || detail::nonpositive_integer(tb);
  if (polynomial || tz <= T(detail::kConnectionThreshold)) {
    s = detail::hyp_series(ta, tb, tc, tz, ttol);
  } else {
    const T excess = tc - ta - tb;
    const T m = std::round(excess);
    if (std::abs(excess - m) > T(detail::kIntegerSnap)) {
      s = detail::hyp_connection_generic(ta, tb, tc, w, ttol);
    } else if (m >= 0) {
      s = detail::hyp_connection_log(ta, tb, static_cast<long>(m), w, ttol);
    } else {
      s = detail::hyp_series(ta, tb, tc, tz, ttol);
    }
  }
  return {static_cast<Scalar>(s.sum), static_cast<Scalar>(s.error), s.terms};
}

/// (F(a,b;c;z) - 1)/z, accurate as z -> 0.
template <typename Scalar>
EvalResult<Scalar> gauss_2f1_excess(Scalar a, Scalar b, Scalar c, Scalar z, Scalar tol,
                                    Scalar one_minus_z = std::numeric_limits<Scalar>::quiet_NaN()) {
  using T = detail::accum_t<Scalar>;
  if (!(z >= 0 && z < 1)) throw DomainError("gauss_2f1_excess: z must lie in [0,1)");
  if (z <= Scalar(0.5)) {
    const auto s = detail::hyp_series(T(a), T(b), T(c), T(z), T(tol), 1);
    return {static_cast<Scalar>(s.sum), static_cast<Scalar>(s.error), s.terms};
  }
  const auto f = gauss_2f1(a, b, c, z, tol, one_minus_z);
  return {(f.value - 1) / z, f.est_error / z, f.terms_used};
}

/// F(a,a;c;z), c in {1,2}.  Non-positive integer a gives the terminating
/// polynomial with est_error limited to rounding.
template <typename Scalar>
EvalResult<Scalar> gauss_2f1_diag(const HypergeomDiagArg<Scalar>& arg, Scalar tol,
                                  Scalar one_minus_z = std::numeric_limits<Scalar>::quiet_NaN()) {
  arg.validate();
  return gauss_2f1(arg.a, arg.a, static_cast<Scalar>(arg.c), arg.z, tol, one_minus_z);
}

/// Modified Bessel function I0 by its power series sum (x/2)^{2n}/(n!)^2.
template <typename Scalar>
Scalar bessel_i0(Scalar x) {
  using T = detail::accum_t<Scalar>;
  if (!std::isfinite(x)) throw DomainError("bessel_i0: non-finite argument");
  const T q = T(x) * T(x) / 4;
  T term = 1;
  T sum = 1;
  for (int n = 1; n < 10000; ++n) {
    term *= q / (T(n) * T(n));
    sum += term;
    if (term <= sum * std::numeric_limits<T>::epsilon()) break;
  }
  if (sum > T(std::numeric_limits<Scalar>::max()))
    throw NumericalError("bessel_i0: overflow for x=" + std::to_string(double(x)));
  return static_cast<Scalar>(sum);
}

/// I1(x)/x, finite at x = 0 where it equals 1/2.
template <typename Scalar>
Scalar bessel_i1_over_x(Scalar x) {
  using T = detail::accum_t<Scalar>;
  if (!std::isfinite(x)) throw DomainError("bessel_i1_over_x: non-finite argument");
  const T q = T(x) * T(x) / 4;
  T term = T(0.5);
  T sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= q / (T(n) * T(n + 1));
    sum += term;
    if (term <= sum * std::numeric_limits<T>::epsilon()) break;
  }
  if (sum > T(std::numeric_limits<Scalar>::max())) throw NumericalError("bessel_i1: overflow");
  return static_cast<Scalar>(sum);
}

template <typename Scalar>
Scalar bessel_i1(Scalar x) {
  return x * bessel_i1_over_x(x);
}

}  // namespace kg
