#pragma once

// Second-order finite differences for the radial de Sitter Klein-Gordon
// problem u_tt - e^{-2t}(u_rr + (2/r) u_r) - M^2 u = f, written for w = r u
// and advanced by leapfrog.  Used as an independent oracle for the
// integral-transform solutions.

#include <Eigen/Core>
#include <vector>

#include "kg/transform.hpp"

namespace kg {

struct RadialFdSpec {
  double r_max = 2.0;
  double t_end = 1.0;
  int nr = 512;
  double dt = 0;            ///< 0 selects cfl * dr, rounded to land on t_end
  double cfl = 0.5;
  int history_every = 0;    ///< keep every k-th time level (0: final only)
};

struct RadialFdResult {
  Eigen::VectorXd r;
  double dt = 0;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> u;  ///< u(r, times[k])

  /// u at radius s on time level k, by cubic Lagrange interpolation.
  double value_at(double s, std::size_t k) const;
  double final_value_at(double s) const { return value_at(s, u.size() - 1); }
};

/// The data must vanish near r_max for all t <= t_end (the solution is
/// held at zero there).  Throws DomainError when nr < 64 or when the time
/// step violates dt < dr.
RadialFdResult radial_fd_solve(const CauchyData& data, const SourceTerm& src, double M,
                               const RadialFdSpec& spec);

}  // namespace kg
