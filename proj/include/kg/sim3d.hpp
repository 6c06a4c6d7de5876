#pragma once

// Method-of-lines solver for
//   psi_tt + 3 psi_t - e^{-2t} Laplacian psi = mu2 psi - lambda psi^3 (+ f)
// on the unit box with zero boundary values: fourth-order central
// differences in space, classical RK4 in time.

#include <Eigen/Core>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kg/field.hpp"

namespace kg {

struct BallSpec {
  Eigen::Vector3d center;
  double radius = 0.2;
};

/// Initial data recipe.  "two_bumps": psi0 = sum of B_i over `balls`,
/// B(x) = exp(1/R^2 - 1/(R^2 - |x-C|^2)) inside the ball; psi1 = psi1_factor psi0.
/// "zero": vanishing data.
struct InitRecipe {
  std::string type = "two_bumps";
  std::vector<BallSpec> balls{{Eigen::Vector3d(0.4, 0.4, 0.4), 0.2}, {Eigen::Vector3d(0.6, 0.6, 0.6), 0.2}};
  double psi1_factor = -5.0;
};

inline constexpr double kCflLimit = 0.5;

struct SimConfig {
  int n = 101;
  double dx = 0.01;  ///< always 1/(n-1)
  double dt = 1e-3;
  double mu2 = 0.1;
  double lambda = 0.1;
  double t_end = 3.0;
  double snapshot_every = 0.02;
  InitRecipe init;
  std::string boundary = "zero";

  /// Throws ConfigError on invalid values.
  void validate() const;
};

/// Default configuration with dx recomputed for the given n.
SimConfig make_sim_config(int n);

struct FieldState {
  Field3D psi;
  Field3D chi;  ///< psi_t
  double t = 0;
};

/// Optional forcing f(x, t) = shape(x) * amplitude(t).
struct SimSource {
  Field3D shape;
  std::function<double(double)> amplitude = [](double) { return 1.0; };
};

/// Coefficients of the reaction/damping part; the defaults give the
/// equation above, damping = 0 and lambda = 0 give the linear de Sitter
/// Klein-Gordon operator with M^2 = mu2.
struct Equation {
  double damping = 3.0;
  double mu2 = 0.1;
  double lambda = 0.1;
  double wave_decay = 1.0;  ///< c(t) = e^{-wave_decay t}; 0 gives flat space
};

Equation equation_from(const SimConfig& cfg);

std::pair<Field3D, Field3D> make_initial_data(const SimConfig& cfg);

/// Fourth-order Laplacian with odd reflection across the boundary planes
/// (which is exact for fields vanishing on the boundary to fourth order).
void laplacian4(const Field3D& psi, Field3D& out, unsigned workers = 0);

/// One RK4 step in place.  Boundary nodes stay zero.
void step_rk4(FieldState& state, double dt, const Equation& eq, const SimSource* source = nullptr,
              unsigned workers = 0);

struct CflReport {
  double monitor_bound = 0;  ///< dx/(sqrt(3) dt)
  double max_abs_psi = 0;
  bool monitor_flagged = false;  ///< max|psi| >= monitor_bound
  double wave_number = 0;        ///< e^{-t} sqrt(3) dt/dx
  bool wave_ok = true;           ///< wave_number <= C_cfl
};

CflReport cfl_check(const FieldState& state, double dx, double dt, double c_cfl = kCflLimit);

/// int (chi^2 + e^{-2t} |grad psi|^2) dx with second-order gradients.
double energy_monitor(const FieldState& state);

struct SnapshotRecord {
  int index = 0;
  double time = 0;
  std::string raw_file;
  std::string meta_file;
};

struct RunOptions {
  std::filesystem::path out_dir;
  std::string stem = "snap";
  bool write_files = true;
  std::function<void(const FieldState&)> observer;
  const SimSource* source = nullptr;
  unsigned workers = 0;
};

struct RunSummary {
  std::vector<SnapshotRecord> snapshots;
  std::vector<double> history_t;
  std::vector<double> history_max_abs;
  std::vector<double> history_energy;
  std::vector<double> history_cfl_wave;
  long monitor_flags = 0;
  long steps = 0;
  double wall_seconds = 0;
  std::string manifest_file;
};

/// Steps from t = 0 to t_end, emitting snapshots at the initial time and
/// every snapshot_every.  Throws NumericalError on NaN/Inf (after writing a
/// diagnostic snapshot) or when the wave CFL condition fails.
RunSummary run_simulation(const SimConfig& cfg, const RunOptions& opt);

}  // namespace kg
