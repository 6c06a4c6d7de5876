#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "kg/errors.hpp"
#include "kg/sim3d.hpp"
#include "kg/snapshot_io.hpp"
#include "kg/transform.hpp"
#include "support.hpp"

using namespace kg;

using fixtures::mms_error;
using fixtures::sine_mode;

constexpr double pi = std::numbers::pi;

TEST_CASE("manufactured solution converges at fourth order in space") {
  const double e1 = mms_error(17), e2 = mms_error(33), e3 = mms_error(65);
  CHECK(std::log2(e1 / e2) >= 3.9);
  CHECK(std::log2(e2 / e3) >= 3.9);
}

TEST_CASE("Laplacian of the sine mode") {
  const int n = 33;
  Field3D f(n, 1.0 / (n - 1)), out(n, 1.0 / (n - 1));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) f(i, j, k) = sine_mode(f.position(i, j, k));
  laplacian4(f, out);
  double worst = 0;
  for (std::size_t p = 0; p < f.size(); ++p) worst = std::max(worst, std::abs(out.values[p] + 3 * pi * pi * f.values[p]));
  CHECK(worst < 3 * pi * pi * 1e-5);
}

TEST_CASE("zero data stay zero") {
  SimConfig cfg = make_sim_config(17);
  cfg.init.type = "zero";
  auto [p0, p1] = make_initial_data(cfg);
  FieldState s{p0, p1, 0.0};
  for (int m = 0; m < 10; ++m) step_rk4(s, cfg.dt, equation_from(cfg));
  CHECK(s.psi.max_abs() == 0.0);
}

TEST_CASE("steps are identical for every worker count") {
  SimConfig cfg = make_sim_config(33);
  auto [p0, p1] = make_initial_data(cfg);
  FieldState a{p0, p1, 0.0}, b{p0, p1, 0.0};
  for (int m = 0; m < 5; ++m) {
    step_rk4(a, cfg.dt, equation_from(cfg), nullptr, 1);
    step_rk4(b, cfg.dt, equation_from(cfg), nullptr, 3);
  }
  CHECK((a.psi.values == b.psi.values).all());
  CHECK((a.chi.values == b.chi.values).all());
}

TEST_CASE("linear run matches the radial transform") {
  // u = e^{3t/2} psi solves the de Sitter Klein-Gordon equation with
  // M^2 = 9/4 + mu^2, data u0 = B, u1 = psi1 + 3/2 psi0.
  SimConfig cfg = make_sim_config(81);
  cfg.lambda = 0;
  cfg.init.balls = {{Eigen::Vector3d(0.5, 0.5, 0.5), 0.2}};
  auto [p0, p1] = make_initial_data(cfg);
  FieldState s{p0, p1, 0.0};
  const Equation eq = equation_from(cfg);
  for (int m = 0; m < 30; ++m) {
    step_rk4(s, cfg.dt, eq);
    s.t = (m + 1) * cfg.dt;
  }
  const auto B = profiles::bump(0.2);
  const auto data = CauchyData::make(Dim::radial3, B, profiles::bump(0.2, cfg.init.psi1_factor + 1.5));
  const double M = std::sqrt(2.25 + cfg.mu2);
  for (int off : {0, 4, 8}) {
    const double r = off * cfg.dx;
    const double ref = std::exp(-1.5 * s.t) * desitter_cauchy_solution(data, M, r, s.t, 1e-11);
    CHECK(std::abs(s.psi(40 + off, 40, 40) - ref) < 2e-3);
  }
  // The centre has already turned negative.
  CHECK(s.psi(40, 40, 40) < 0);
}

TEST_CASE("CFL report") {
  SimConfig cfg = make_sim_config(101);
  auto [p0, p1] = make_initial_data(cfg);
  const FieldState s{p0, p1, 0.0};
  const auto r = cfl_check(s, cfg.dx, cfg.dt);
  CHECK(r.monitor_bound == doctest::Approx(0.01 / (std::sqrt(3.0) * 1e-3)));
  CHECK(r.wave_ok);
  CHECK_FALSE(r.monitor_flagged);
  CHECK_FALSE(cfl_check(s, cfg.dx, 0.01).wave_ok);
}

TEST_CASE("run writes snapshots and a manifest") {
  const auto dir = std::filesystem::temp_directory_path() / "kg_test_run";
  std::filesystem::remove_all(dir);
  SimConfig cfg = make_sim_config(17);
  cfg.t_end = 0.01;
  cfg.snapshot_every = 0.005;
  RunOptions opt;
  opt.out_dir = dir;
  const auto sum = run_simulation(cfg, opt);
  CHECK(sum.steps == 10);
  REQUIRE(sum.snapshots.size() == 3);
  CHECK(std::filesystem::exists(dir / sum.manifest_file));
  const auto files = list_snapshots(dir);
  REQUIRE(files.size() == 3);
  const Field3D last = read_snapshot(files.back());
  CHECK(last.time == doctest::Approx(0.01));
  CHECK(last.n == 17);
  std::filesystem::remove_all(dir);
}

TEST_CASE("blow-up aborts with a numerical error") {
  const auto dir = std::filesystem::temp_directory_path() / "kg_test_abort";
  std::filesystem::remove_all(dir);
  SimConfig cfg = make_sim_config(17);
  cfg.mu2 = 1e8;
  cfg.lambda = 0;
  cfg.t_end = 1.0;
  RunOptions opt;
  opt.out_dir = dir;
  CHECK_THROWS_AS(run_simulation(cfg, opt), NumericalError);
  CHECK(std::filesystem::exists(dir / "snap_abort.meta.json"));
  std::filesystem::remove_all(dir);
}
