#include <doctest.h>

#include <cmath>
#include <random>

#include "kg/errors.hpp"
#include "kg/kernels.hpp"

using namespace kg;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
double E(double z, double t, double b, double M) { return kernel_E<double>({z, t, b, M}); }
}  // namespace

TEST_CASE("kernels against high-precision references") {
  CHECK(rel(E(0.3, 2, 0.5, 0.5), 1.7451714787309206881) < 1e-13);
  CHECK(rel(E(0.5, 1.5, 0.2, 1), 1.2903764897758096605) < 1e-13);
  CHECK(rel(E(0.1, 3, 1, 2.5), 65.621566877482883604) < 1e-13);
  CHECK(rel(kernel_K1(0.4, 1.0, 2.0), 1.3621620449421651964) < 1e-13);
  CHECK(rel(kernel_K1(0.0, 0.5, 0.25), 0.63458792326752842487) < 1e-13);
  CHECK(rel(kernel_K0(0.3, 2.0, 0.5), -0.67957045711476130884) < 1e-13);
  CHECK(rel(kernel_K0(0.2, 1.5, 0.8), -0.32474244498228238579) < 1e-13);
  CHECK(rel(kernel_K0(0.2, 1.5, 1.5), 1.1511455598123131134) < 1e-13);
  CHECK(rel(kernel_K0(0.5, 3.0, 2.5), 541.05900759921531681) < 1e-12);
}

TEST_CASE("closed forms at M = 1/2") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 200; ++i) {
    const double t = 0.01 + 5 * u(rng);
    const double b = t * u(rng);
    const double z = cone_radius(t, b) * u(rng);
    const double zk = cone_radius(t) * u(rng);
    CHECK(rel(E(z, t, b, 0.5), 0.5 * std::exp((b + t) / 2)) < 1e-13);
    CHECK(rel(kernel_K1(zk, t, 0.5), 0.5 * std::exp(t / 2)) < 1e-13);
    CHECK(rel(kernel_K0(zk, t, 0.5), -0.25 * std::exp(t / 2)) < 1e-13);
  }
}

TEST_CASE("E is symmetric in the two times") {
  for (double M : {0.3, 1.0, 2.2})
    CHECK(rel(kernel_E_swapped<double>({0.2, 1.7, 0.4, M}), E(0.2, 1.7, 0.4, M)) < 1e-13);
}

TEST_CASE("K1 is E at b = 0") { CHECK(kernel_K1(0.3, 1.2, 1.7) == E(0.3, 1.2, 0.0, 1.7)); }

TEST_CASE("K0 matches a second-order difference of E in b") {
  const double z = 0.2, t = 1.5, M = 0.8;
  const double K0 = kernel_K0(z, t, M);
  auto fd = [&](double h) { return -(-3 * E(z, t, 0, M) + 4 * E(z, t, h, M) - E(z, t, 2 * h, M)) / (2 * h); };
  const double e1 = std::abs(fd(1e-3) - K0), e2 = std::abs(fd(5e-4) - K0);
  CHECK(std::log2(e1 / e2) >= 1.9);
}

TEST_CASE("regularized and literal K0 agree off the cone") {
  CHECK(rel(kernel_K0_literal(0.2, 1.5, 0.8), kernel_K0(0.2, 1.5, 0.8)) < 1e-9);
  CHECK_THROWS_AS(kernel_K0_literal(cone_radius(1.0), 1.0, 0.8), DomainError);
  CHECK(std::isfinite(kernel_K0(cone_radius(1.0), 1.0, 0.8)));
}

TEST_CASE("half-integer K0") {
  for (int k = 0; k <= 3; ++k) {
    const double M = k + 0.5;
    CHECK(rel(kernel_K0_half_integer(0.2, 1.5, k, HalfIntegerForm::corrected), kernel_K0(0.2, 1.5, M)) < 1e-12);
  }
  // Without the e^t cone scaling the literal form is off by orders of magnitude.
  CHECK(rel(kernel_K0_half_integer(0.2, 1.5, 1, HalfIntegerForm::literal), kernel_K0(0.2, 1.5, 1.5)) > 1);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(E(0.5, 0.1, 0.0, 1.0), DomainError);   // outside the cone
  CHECK_THROWS_AS(E(0.0, 1.0, 1.5, 1.0), DomainError);   // b > t
  CHECK_THROWS_AS(kernel_kind_from_string("K2"), DomainError);
  CHECK(kernel_kind_from_string("K0") == KernelKind::K0);
}

TEST_CASE("integral identities") {
  const auto r = verify_kernel_identities(2.0, 0.7, 1.7, 1e-10);
  CHECK(r.converged);
  CHECK(r.res_E < 1e-10);
  CHECK(r.res_K1 < 1e-10);
  CHECK(r.res_K0 < 1e-10);
}

TEST_CASE("positivity scan invariants") {
  PositivityScanSpec s;
  s.M = 1.0;
  s.which = KernelKind::E;
  s.t_max = 3;
  s.nz = 16;
  s.nt = 16;
  const auto r = positivity_scan(s);
  CHECK(r.min_value <= r.max_value);
  CHECK(r.n_points == 16L * 16 * 4);
  CHECK(r.min_value > 0);
  CHECK_FALSE(r.sign_change);

  s.which = KernelKind::K0;
  s.M = 0.75;
  s.t_max = 15;
  s.nz = 48;
  s.nt = 48;
  const auto f1 = positivity_scan(s);
  CHECK(f1.sign_change);
  CHECK(f1.min_value < 0);
  CHECK(f1.max_value > 0);
}
