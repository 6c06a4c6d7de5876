#pragma once

// Solutions of the linear Klein-Gordon equations with imaginary mass, in
// Minkowski space (u_tt - Laplacian u - M^2 u = f) and in de Sitter space
// (u_tt - e^{-2t} Laplacian u - M^2 u = f), built by integral transforms of
// free wave solutions, and checks of the associated maximum principles.

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "kg/wave.hpp"

namespace kg {

enum class Dim { line, radial3 };

std::string to_string(Dim d);
Dim dim_from_string(const std::string& s);

/// Initial data u(.,0) = phi0, u_t(.,0) = phi1.  `phi0_zero` and
/// `phi1_zero` mark data that vanish identically; the corresponding
/// integrals are skipped and the de Sitter threshold is relaxed.
struct CauchyData {
  Profile phi0;
  Profile phi1;
  Dim dim = Dim::line;
  bool phi0_zero = false;
  bool phi1_zero = false;

  static CauchyData make(Dim dim, Profile phi0, Profile phi1);
  static CauchyData zero(Dim dim);
};

enum class SignTag { nonpositive, unknown };

/// Source f(s, b): s is the line coordinate or the radius, b the time.
struct SourceTerm {
  std::function<double(double, double)> f;
  SignTag sign = SignTag::unknown;
  bool zero = true;

  double operator()(double s, double b) const { return zero ? 0.0 : f(s, b); }

  static SourceTerm none();
  static SourceTerm make(std::function<double(double, double)> f, SignTag sign = SignTag::unknown);
  /// The profile s -> f(s, b) at fixed b.
  Profile at(double b) const;
};

/// Free wave solution with data (phi, 0) at distance/time r.
double wave_value(Dim dim, const Profile& phi, double x, double r);

double minkowski_kg_solution(const CauchyData& data, const SourceTerm& src, double M, double x,
                             double t, double quad_tol = 1e-10);

double desitter_source_solution(const SourceTerm& src, Dim dim, double M, double x, double t,
                                double quad_tol = 1e-10);

double desitter_cauchy_solution(const CauchyData& data, double M, double x, double t,
                                double quad_tol = 1e-10);

/// Full de Sitter solution: Cauchy part plus source part.
double desitter_solution(const CauchyData& data, const SourceTerm& src, double M, double x,
                         double t, double quad_tol = 1e-10);

enum class Space { minkowski, desitter };

std::string to_string(Space s);

/// Where and how many (x, t) samples to draw.  Samples are drawn uniformly
/// from [x_lo, x_hi] x [t_lo, t_hi] and kept only when the backward light
/// cone's base lies in D0: an interval [d0_lo, d0_hi] on the line, or the
/// shell d0_lo <= |y| <= d0_hi in radial 3D (a ball when d0_lo <= 0).
struct SampleSpec {
  int n_points = 200;
  double x_lo = -1, x_hi = 1;
  double t_lo = 0, t_hi = 1;
  double d0_lo = -std::numeric_limits<double>::infinity();
  double d0_hi = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 20240601;
  double quad_tol = 1e-10;
  bool keep_samples = true;
};

inline constexpr double kTolSuperharmonic = 1e-6;
inline constexpr double kTolMaxPrinciple = 1e-7;
inline constexpr double kLaplacianStep = 1e-3;

struct MaxPrincipleSample {
  double x, t, u, rhs, violation;
};

struct MaxPrincipleReport {
  Space space = Space::minkowski;
  double M = 0;
  long n_points = 0;
  double worst_violation = 0;  ///< max(0, u - rhs, u) over the samples
  double max_u_minus_rhs = -std::numeric_limits<double>::infinity();
  double max_u = -std::numeric_limits<double>::infinity();
  double t_threshold = 0;
  double tol_mp = kTolMaxPrinciple;
  bool passed = false;
  std::vector<MaxPrincipleSample> samples;
};

/// FD Laplacian (h = kLaplacianStep) of a line or radial profile at s.
double fd_laplacian(Dim dim, const Profile& phi, double s);

/// ln(M/(M-1)) for M > 1.
double desitter_threshold(double M);

/// Throws DomainError if the data or the source violate the nonpositivity or
/// superharmonicity preconditions at the probe points of `spec`.
void check_max_principle_preconditions(const CauchyData& data, const SourceTerm& src,
                                       const SampleSpec& spec);

MaxPrincipleReport check_max_principle_minkowski(const CauchyData& data, const SourceTerm& src,
                                                 double M, const SampleSpec& spec);

/// Samples are restricted to t >= ln(M/(M-1)) unless phi0 vanishes.
MaxPrincipleReport check_max_principle_desitter(const CauchyData& data, const SourceTerm& src,
                                                double M, const SampleSpec& spec);

/// v(s) - (1/2) int_0^s v(r) dr.
double tail_functional(const std::function<double(double)>& v, double s, double quad_tol = 1e-12);

}  // namespace kg
