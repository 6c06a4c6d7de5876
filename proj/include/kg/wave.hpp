#pragma once

// Solutions of the free wave equation v_tt - Laplacian v = 0 with data
// (phi, 0): exact in one dimension and for radial data in three, and by
// spherical means (Kirchhoff) for general 3D data.

#include <Eigen/Core>
#include <functional>
#include <limits>
#include <vector>

namespace kg {

enum class Smoothness { C0, C2, Cinf };

/// A function of one variable: a position on the line, or a radius for
/// radial data in three dimensions (even extension assumed).
struct Profile {
  std::function<double(double)> f;
  double support_radius = std::numeric_limits<double>::infinity();
  Smoothness smoothness = Smoothness::Cinf;

  double operator()(double s) const { return f(s); }
};

/// A function on R^3.
struct FieldSampler {
  std::function<double(const Eigen::Vector3d&)> f;
  double support_radius = std::numeric_limits<double>::infinity();
  Smoothness smoothness = Smoothness::Cinf;

  double operator()(const Eigen::Vector3d& x) const { return f(x); }

  static FieldSampler radial(const Profile& p);
};

namespace profiles {

Profile constant(double c);
/// exp(1/R^2 - 1/(R^2 - s^2)) inside |s| < R, zero outside; peak value 1.
Profile bump(double R, double amplitude = 1.0);
Profile gaussian(double width, double amplitude = 1.0);

}  // namespace profiles

/// Product rule on the unit sphere: Gauss-Legendre in cos(theta) times the
/// trapezoid rule in the azimuth.  Weights are normalized to sum to 1.
struct SphereRule {
  std::vector<Eigen::Vector3d> nodes;
  std::vector<double> weights;
  int order = 0;

  static SphereRule product(int order = 32);
};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

double dalembert_1d(const Profile& phi, double x, double t);

/// Radial 3D solution ((r+t)phi(r+t) + (r-t)phi(|r-t|))/(2r); for r below
/// kRadialOrigin the limit phi(t) + t phi'(t) is used.
double radial_wave_3d(const Profile& phi, double r, double t);

inline constexpr double kRadialOrigin = 1e-6;

struct KirchhoffResult {
  double value_01 = 0;  ///< data (0, phi): t times the spherical mean
  double value_10 = 0;  ///< data (phi, 0): time derivative of value_01
  double est_error = 0;  ///< difference against a half-order rule
};

KirchhoffResult kirchhoff_3d(const FieldSampler& phi, const Eigen::Vector3d& x, double t,
                             const SphereRule& rule);

}  // namespace kg
