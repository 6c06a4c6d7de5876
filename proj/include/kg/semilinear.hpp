#pragma once

// Semilinear machinery for psi_tt + 3 psi_t - e^{-2t} Laplacian psi =
// mu^2 psi - lambda psi^3 and its Klein-Gordon form u = e^{3t/2} psi,
// u_tt - e^{-2t} Laplacian u - M^2 u = -lambda e^{-3t} u^3, M^2 = 9/4 + mu^2.

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "kg/field.hpp"
#include "kg/transform.hpp"

namespace kg {

/// M = sqrt(9/4 + mu^2).
double mass_from_mu2(double mu2);

/// Evaluation lattice xs x {t_j = j t_max / nt, j = 0..nt}.  A single x node
/// selects the x-independent mode, where sources are functions of t only.
struct PicardConfig {
  double M = 1.5;
  double lambda = 0.1;
  double t_max = 1.0;
  int n_iter = 8;
  std::vector<double> xs{0.0};
  int nt = 40;
  Dim dim = Dim::line;
  double quad_tol = 1e-10;

  void validate() const;
  std::vector<double> times() const;
};

/// Values on the lattice, rows indexed by time, columns by x.
using Lattice = Eigen::MatrixXd;

/// G[f] on the lattice of `cfg`.
Lattice g_apply(const SourceTerm& src, const PicardConfig& cfg);

/// Source lambda e^{-3b} u(s, b)^3 with u interpolated from a lattice by
/// tensor-product cubic Lagrange interpolation (zero outside the x range).
SourceTerm cubic_source(const Lattice& u, const PicardConfig& cfg);

struct PicardReport {
  std::vector<double> sup_differences;  ///< ||u_{k+1} - u_k||_inf
  int iterations = 0;
  bool diverged = false;
  bool converged = false;  ///< last difference below 1e-12 relative
};

struct PicardResult {
  Lattice u0;
  Lattice u;
  PicardReport report;
};

PicardResult picard_weak_solution(const CauchyData& data, const PicardConfig& cfg);

struct Trajectory {
  std::vector<double> t, psi, dpsi;
  std::vector<double> energy;  ///< dpsi^2/2 - mu2 psi^2/2 + lambda psi^4/4
};

/// RK4 for psi'' + 3 psi' = mu2 psi - lambda psi^3.  The energy above is
/// non-increasing for the exact flow; growth beyond a relative 1e-6 of its
/// scale or a non-finite value raises NumericalError.
Trajectory duffing_ode(double psi0, double psi1, double mu2, double lambda, double t_end, double dt,
                       double damping = 3.0);

struct FunctionalOptions {
  double damping = 3.0;
  double mu2 = 0.1;
  double lambda = 0.0;
  std::vector<double> source_integral;  ///< int f dx per snapshot, empty if f = 0
  double support_tol = 1e-12;           ///< relative size allowed on the outer two shells
};

struct FunctionalSeries {
  std::vector<double> times;
  std::vector<double> F_values;
  int sigma = 1;
  std::vector<double> nu_lower;  ///< NaN where undefined
};

struct FunctionalResult {
  FunctionalSeries series;
  std::vector<double> residual_t;
  std::vector<double> residual;  ///< F'' + damping F' - mu2 F + lambda int psi^3 - int f
  double max_abs_residual = 0;
};

/// F(t) = int psi dx by the trapezoid rule, and the residual of the ODE it
/// satisfies when the support stays inside the box.  Snapshots must be
/// equally spaced in time for the residual (at least three are needed).
FunctionalResult f_functional(const std::vector<Field3D>& snapshots, const FunctionalOptions& opt);

enum class SignForm {
  higgs,         ///< (sqrt(9 + 4 mu^2) + 3) int psi0 + 2 int psi1
  klein_gordon   ///< M int phi0 + int phi1
};

struct SignConditionResult {
  double coef0 = 0;
  double coef1 = 0;
  double lhs_plus = 0;
  double lhs_minus = 0;
  int satisfied_sigma = 0;  ///< +1, -1, or 0 if neither is positive
};

/// `param` is mu for the higgs form and M for the klein_gordon form.
SignConditionResult sign_change_condition(double int_data0, double int_data1, double param,
                                          SignForm form = SignForm::higgs);
SignConditionResult sign_change_condition(const Field3D& data0, const Field3D& data1, double param,
                                          SignForm form = SignForm::higgs);

/// |int psi|^3 / |int psi^3|, undefined when |int psi^3| <= tol.
std::optional<double> l3_weight_measure(const Field3D& field, double tol = 1e-14);

enum class WallProfile {
  literal,  ///< tanh(mu^2/2 N.(x-x0)), a solution only at mu = sqrt(2)
  standard  ///< tanh(mu/sqrt(2) N.(x-x0))
};

struct WallSpec {
  double mu = 1.0;
  double lambda = 1.0;
  Eigen::Vector3d N = Eigen::Vector3d::UnitX();
  Eigen::Vector3d x0 = Eigen::Vector3d::Zero();
  double v = 0.0;  ///< boost velocity, 0 for the static wall
  WallProfile profile = WallProfile::literal;
};

double wall_value(const WallSpec& w, const Eigen::Vector3d& x, double t);

/// max over a 9x9x9 lattice in [-1,1]^3 + x0 (at t = 0.5) of
/// |psi_tt - Laplacian psi - mu^2 psi + lambda psi^3| with fourth-order
/// differences of step h.
double static_wall_residual(const WallSpec& w, double h);

struct WallConvergence {
  std::vector<double> h;
  std::vector<double> residual;
  std::vector<double> observed_order;  ///< log2 of successive ratios
  bool h_independent_floor = false;    ///< residual stalls above truncation size
};

WallConvergence wall_convergence(const WallSpec& w, const std::vector<double>& hs);

}  // namespace kg
