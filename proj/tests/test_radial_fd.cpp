#include <doctest.h>

#include <cmath>

#include "kg/errors.hpp"
#include "kg/radial_fd.hpp"
#include "support.hpp"

using namespace kg;


TEST_CASE("radial FD converges to the transform at second order") {
  const double e1 = fixtures::radial_fd_rel_error(256, 10), e2 = fixtures::radial_fd_rel_error(512, 10);
  CHECK(e2 < 2e-3);
  CHECK(std::log2(e1 / e2) >= 1.9);
}

TEST_CASE("radial FD with a source") {
  const auto src = SourceTerm::make([](double r, double) { return -profiles::bump(0.5)(r); });
  RadialFdSpec spec;
  spec.r_max = 2.0;
  spec.t_end = 0.8;
  spec.nr = 512;
  const auto fd = radial_fd_solve(CauchyData::zero(Dim::radial3), src, 1.0, spec);
  const double ref = desitter_source_solution(src, Dim::radial3, 1.0, 0.0, 0.8, 1e-11);
  CHECK(ref == doctest::Approx(-0.0718724536).epsilon(1e-8));
  CHECK(fd.final_value_at(0.0) == doctest::Approx(ref).epsilon(1e-4));
}

TEST_CASE("radial FD rejects bad grids") {
  RadialFdSpec spec;
  spec.nr = 32;
  CHECK_THROWS_AS(radial_fd_solve(CauchyData::zero(Dim::radial3), SourceTerm::none(), 1.0, spec), DomainError);
  spec.nr = 128;
  spec.dt = 1.0;
  CHECK_THROWS_AS(radial_fd_solve(CauchyData::zero(Dim::radial3), SourceTerm::none(), 1.0, spec), DomainError);
  CHECK_THROWS_AS(radial_fd_solve(CauchyData::zero(Dim::line), SourceTerm::none(), 1.0, RadialFdSpec{}), DomainError);
}
