#include <doctest.h>

#include "kg/specfun.hpp"

using namespace kg;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("2F1 against high-precision references") {
  CHECK(rel(gauss_2f1(0.25, 0.25, 1.0, 0.9, 1e-16).value, 1.1072311483496011885) < 1e-14);
  // c - a - b = 0: logarithmic connection near z = 1
  CHECK(rel(gauss_2f1(0.5, 0.5, 1.0, 0.99, 1e-16).value, 2.3527158167797423215) < 1e-14);
  CHECK(rel(gauss_2f1(-1.2, -1.2, 1.0, 0.75, 1e-16).value, 2.0886204941195994123) < 1e-14);
  CHECK(rel(gauss_2f1(0.3, 0.7, 2.5, 0.97, 1e-16).value, 1.1369642930548536036) < 1e-14);
}

TEST_CASE("2F1 terminates for nonpositive integer parameters") {
  const auto r = gauss_2f1(-3.0, -3.0, 1.0, 0.5, 1e-16);
  CHECK(r.value == doctest::Approx(7.875).epsilon(1e-15));
  CHECK(r.terms_used <= 4);
}

TEST_CASE("2F1 at z = 0 is one") { CHECK(gauss_2f1(0.7, 1.3, 2.0, 0.0, 1e-16).value == 1.0); }

TEST_CASE("diagonal form validates its arguments") {
  CHECK_THROWS_AS(gauss_2f1_diag(HypergeomDiagArg<double>{0.5, 3, 0.2}, 1e-14), DomainError);
  CHECK_THROWS_AS(gauss_2f1_diag(HypergeomDiagArg<double>{0.5, 1, 1.0}, 1e-14), DomainError);
  CHECK(rel(gauss_2f1_diag(HypergeomDiagArg<double>{0.25, 1, 0.9}, 1e-16).value, 1.1072311483496011885) < 1e-14);
}

TEST_CASE("excess (F - 1)/z stays accurate for tiny z") {
  const double z = 1e-12;
  const auto g = gauss_2f1_excess(0.3, 0.3, 1.0, z, 1e-16);
  CHECK(g.value == doctest::Approx(0.09 + 0.09 * 1.3 * 1.3 / 4 * z).epsilon(1e-14));
}

TEST_CASE("long double agrees with double") {
  const long double v = gauss_2f1<long double>(0.25L, 0.25L, 1.0L, 0.9L, 1e-18L).value;
  CHECK(std::abs(double(v) - 1.1072311483496011885) < 1e-16);
}

TEST_CASE("modified Bessel functions") {
  CHECK(rel(bessel_i0(1.0), 1.2660658777520083356) < 1e-15);
  CHECK(rel(bessel_i0(12.5), 30596.335155785153612) < 1e-14);
  CHECK(rel(bessel_i1_over_x(3.0), 1.3177900724675364655) < 1e-15);
  CHECK(bessel_i1_over_x(0.0) == 0.5);
  CHECK(bessel_i1(0.0) == 0.0);
}
