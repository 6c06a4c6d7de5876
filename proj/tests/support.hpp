#pragma once

// Fixtures shared by the unit tests and the acceptance binary.

#include <cmath>
#include <numbers>

#include "kg/radial_fd.hpp"
#include "kg/sim3d.hpp"
#include "kg/transform.hpp"

namespace kg::fixtures {

inline double sine_mode(const Eigen::Vector3d& x) {
  constexpr double pi = std::numbers::pi;
  return std::sin(pi * x(0)) * std::sin(pi * x(1)) * std::sin(pi * x(2));
}

/// Max error at t = 0.1 of the manufactured solution psi = X(x)(cos 2t + 1/2),
/// X the lowest sine mode, for which odd reflection is exact at the faces.
inline double mms_error(int n, double dt = 5e-4) {
  constexpr double pi = std::numbers::pi;
  const double mu2 = 0.1, t_end = 0.1;
  auto T = [](double t) { return std::cos(2 * t) + 0.5; };
  auto T1 = [](double t) { return -2 * std::sin(2 * t); };
  auto T2 = [](double t) { return -4 * std::cos(2 * t); };
  const double dx = 1.0 / (n - 1);
  SimSource src;
  src.shape = Field3D(n, dx);
  Field3D psi(n, dx), chi(n, dx);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double X = sine_mode(psi.position(i, j, k));
        src.shape(i, j, k) = X;
        psi(i, j, k) = X * T(0);
        chi(i, j, k) = X * T1(0);
      }
  src.amplitude = [=](double t) { return T2(t) + 3 * T1(t) + 3 * pi * pi * std::exp(-2 * t) * T(t) - mu2 * T(t); };
  const Equation eq{3.0, mu2, 0.0, 1.0};
  FieldState s{psi, chi, 0.0};
  const long steps = std::lround(t_end / dt);
  for (long m = 0; m < steps; ++m) {
    step_rk4(s, dt, eq, &src);
    s.t = double(m + 1) * dt;
  }
  return (s.psi.values - src.shape.values * T(t_end)).abs().maxCoeff();
}

/// max |FD - transform| / max |transform| over `probes` radii in [0, R + 0.63)
/// for u0 = bump(R), u1 = -bump(R)/2, M = 2, t = 1.
inline double radial_fd_rel_error(int nr, int probes = 20) {
  const double R = 0.5, M = 2.0, t = 1.0;
  const auto data = CauchyData::make(Dim::radial3, profiles::bump(R), profiles::bump(R, -0.5));
  RadialFdSpec spec;
  spec.r_max = R + 1.2;
  spec.t_end = t;
  spec.nr = nr;
  const auto fd = radial_fd_solve(data, SourceTerm::none(), M, spec);
  double diff = 0, scale = 0;
  for (int i = 0; i < probes; ++i) {
    const double r = (R + 0.63) * i / probes;
    const double ref = desitter_cauchy_solution(data, M, r, t, 1e-11);
    diff = std::max(diff, std::abs(fd.final_value_at(r) - ref));
    scale = std::max(scale, std::abs(ref));
  }
  return diff / scale;
}

}  // namespace kg::fixtures
