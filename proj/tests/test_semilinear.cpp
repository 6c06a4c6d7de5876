#include <doctest.h>

#include <cmath>

#include "kg/errors.hpp"
#include "kg/semilinear.hpp"
#include "kg/sim3d.hpp"

using namespace kg;

TEST_CASE("mass from mu2") {
  CHECK(mass_from_mu2(0.0) == 1.5);
  CHECK(mass_from_mu2(0.1) == doctest::Approx(std::sqrt(2.35)));
  CHECK_THROWS_AS(mass_from_mu2(-3.0), DomainError);
}

TEST_CASE("x-independent Picard iteration matches the ODE") {
  const double mu2 = 0.1, lambda = 0.5, a = 0.4, b = 0.2;
  PicardConfig cfg;
  cfg.M = mass_from_mu2(mu2);
  cfg.lambda = lambda;
  cfg.t_max = 1.0;
  cfg.nt = 40;
  cfg.n_iter = 12;
  cfg.quad_tol = 1e-11;
  const auto data = CauchyData::make(Dim::line, profiles::constant(a), profiles::constant(b));
  const auto res = picard_weak_solution(data, cfg);
  CHECK_FALSE(res.report.diverged);
  // u = e^{3t/2} psi turns the data into psi0 = a, psi1 = b - 3a/2.
  const auto ode = duffing_ode(a, b - 1.5 * a, mu2, lambda, 1.0, 1e-4);
  const auto ts = cfg.times();
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const auto k = static_cast<std::size_t>(std::lround(ts[j] / 1e-4));
    const double ref = std::exp(1.5 * ts[j]) * ode.psi[k];
    CHECK(std::abs(res.u(j, 0) - ref) <= 1e-4 * std::abs(ref));
  }
  const auto& d = res.report.sup_differences;
  REQUIRE(d.size() >= 3);
  CHECK(d[2] < d[0]);
}

TEST_CASE("lambda = 0 returns the linear solution") {
  PicardConfig cfg;
  cfg.lambda = 0;
  cfg.nt = 8;
  const auto data = CauchyData::make(Dim::line, profiles::constant(1.0), profiles::constant(0.0));
  const auto res = picard_weak_solution(data, cfg);
  CHECK(res.report.iterations == 1);
  CHECK(res.report.sup_differences.front() == 0.0);
  CHECK(res.u == res.u0);
}

TEST_CASE("x-dependent Picard iteration contracts for small data") {
  PicardConfig cfg;
  cfg.M = 1.5;
  cfg.lambda = 1.0;
  cfg.t_max = 0.5;
  cfg.nt = 6;
  cfg.n_iter = 3;
  cfg.quad_tol = 1e-7;
  cfg.xs.clear();
  for (int i = 0; i <= 8; ++i) cfg.xs.push_back(-1.2 + 0.3 * i);
  const auto data = CauchyData::make(Dim::line, profiles::bump(0.5, 0.3), profiles::constant(0.0));
  const auto res = picard_weak_solution(data, cfg);
  const auto& d = res.report.sup_differences;
  REQUIRE(d.size() == 3);
  CHECK(d[1] < d[0]);
  CHECK(d[2] < d[1]);
}

TEST_CASE("Picard lattice validation") {
  PicardConfig cfg;
  cfg.xs = {0.0, 0.1, 0.3, 0.4};
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.xs = {0.0};
  cfg.nt = 2;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("Duffing equilibria are preserved") {
  const double mu2 = 0.1, lambda = 0.1;
  const double eq = std::sqrt(mu2 / lambda);
  for (double s : {1.0, -1.0}) {
    const auto tr = duffing_ode(s * eq, 0.0, mu2, lambda, 50.0, 1e-2);
    double worst = 0;
    for (double p : tr.psi) worst = std::max(worst, std::abs(p - s * eq));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("Duffing energy does not increase") {
  const auto tr = duffing_ode(0.1, 0.3, 0.1, 0.1, 10.0, 1e-3);
  for (std::size_t i = 1; i < tr.energy.size(); ++i) CHECK(tr.energy[i] <= tr.energy[i - 1] + 1e-12);
  CHECK(tr.t.back() == doctest::Approx(10.0));
  CHECK_THROWS_AS(duffing_ode(0.1, 0.0, 0.1, -1.0, 1.0, 1e-3), DomainError);
}

TEST_CASE("sign-change condition for the two-bump data") {
  const double mu = std::sqrt(0.1);
  const auto r = sign_change_condition(1.0, -5.0, mu);
  CHECK(r.coef0 == doctest::Approx(6.0659).epsilon(1e-5));
  CHECK(r.coef1 == 2.0);
  CHECK(r.satisfied_sigma == -1);
  CHECK(r.lhs_minus > 0);

  const auto kg = sign_change_condition(1.0, -1.0, 2.0, SignForm::klein_gordon);
  CHECK(kg.lhs_plus == doctest::Approx(1.0));
  CHECK(kg.satisfied_sigma == 1);
  CHECK(sign_change_condition(0.0, 0.0, 1.0).satisfied_sigma == 0);
}

TEST_CASE("L3 weight measure") {
  Field3D f(17, 1.0 / 16);
  f.values.setConstant(-2.0);
  const auto nu = l3_weight_measure(f);
  REQUIRE(nu.has_value());
  CHECK(*nu == doctest::Approx(1.0).epsilon(1e-12));
  f.values.setZero();
  CHECK_FALSE(l3_weight_measure(f).has_value());
}

TEST_CASE("F functional satisfies its ODE while the support is inside") {
  SimConfig cfg = make_sim_config(41);
  cfg.init.balls = {{Eigen::Vector3d(0.5, 0.5, 0.5), 0.15}};
  cfg.lambda = 0.1;
  cfg.dt = 1e-3;
  std::vector<Field3D> snaps;
  auto [p0, p1] = make_initial_data(cfg);
  FieldState s{p0, p1, 0.0};
  const Equation eq = equation_from(cfg);
  for (int step = 0; step <= 60; ++step) {
    if (step % 5 == 0) {
      snaps.push_back(s.psi);
      snaps.back().time = step * cfg.dt;
    }
    step_rk4(s, cfg.dt, eq);
    s.t = (step + 1) * cfg.dt;
  }
  FunctionalOptions opt;
  opt.mu2 = cfg.mu2;
  opt.lambda = cfg.lambda;
  opt.support_tol = 1e-6;
  const auto r = f_functional(snaps, opt);
  CHECK(r.series.F_values.size() == snaps.size());
  CHECK(r.residual.size() == snaps.size() - 2);
  // Second differences of F at spacing 5e-3 against |F''| of order 1e-1.
  CHECK(r.max_abs_residual < 1e-4);
  for (double v : r.series.nu_lower)
    if (!std::isnan(v)) CHECK(v >= 0);
}

TEST_CASE("F functional refuses support on the boundary") {
  Field3D f(17, 1.0 / 16);
  f.values.setConstant(1.0);
  CHECK_THROWS_AS(f_functional({f}, FunctionalOptions{}), DomainError);
}

TEST_CASE("wall residuals") {
  WallSpec w;
  w.profile = WallProfile::standard;
  CHECK(static_wall_residual(w, 1e-3) < 1e-8);
  const auto conv = wall_convergence(w, {0.2, 0.1, 0.05});
  CHECK(conv.observed_order.back() > 3.5);
  CHECK_FALSE(conv.h_independent_floor);

  w.v = 0.5;
  const auto boosted = wall_convergence(w, {0.2, 0.1, 0.05});
  CHECK(boosted.observed_order.back() > 3.5);

  w.v = 0;
  w.profile = WallProfile::literal;
  const auto literal = wall_convergence(w, {0.2, 0.1, 0.05});
  CHECK(literal.h_independent_floor);
  CHECK(literal.residual.back() > 1e-2);
  CHECK_THROWS_AS(static_wall_residual(w, 0.0), DomainError);
}
