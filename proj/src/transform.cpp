#include "kg/transform.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "kg/errors.hpp"
#include "kg/kernels.hpp"
#include "kg/quadrature.hpp"
#include "kg/specfun.hpp"

namespace kg {

std::string to_string(Dim d) { return d == Dim::line ? "line" : "radial3"; }

Dim dim_from_string(const std::string& s) {
  if (s == "line") return Dim::line;
  if (s == "radial3") return Dim::radial3;
  throw DomainError("unknown dimension '" + s + "' (expected line or radial3)");
}

std::string to_string(Space s) { return s == Space::minkowski ? "minkowski" : "desitter"; }

CauchyData CauchyData::make(Dim dim, Profile phi0, Profile phi1) {
  CauchyData d;
  d.dim = dim;
  d.phi0 = std::move(phi0);
  d.phi1 = std::move(phi1);
  return d;
}

CauchyData CauchyData::zero(Dim dim) {
  CauchyData d = make(dim, profiles::constant(0), profiles::constant(0));
  d.phi0_zero = d.phi1_zero = true;
  return d;
}

SourceTerm SourceTerm::none() { return SourceTerm{[](double, double) { return 0.0; }, SignTag::nonpositive, true}; }

SourceTerm SourceTerm::make(std::function<double(double, double)> f, SignTag sign) {
  return SourceTerm{std::move(f), sign, false};
}

Profile SourceTerm::at(double b) const {
  const SourceTerm self = *this;
  return Profile{[self, b](double s) { return self(s, b); }};
}

double wave_value(Dim dim, const Profile& phi, double x, double r) {
  return dim == Dim::line ? dalembert_1d(phi, x, r) : radial_wave_3d(phi, x, r);
}

namespace {

template <typename F>
double quad(F&& f, double lo, double hi, double tol, GradeEnd grade = GradeEnd::none) {
  QuadOptions opt;
  opt.abs_tol = tol;
  opt.rel_tol = 1e-13;
  opt.grade = grade;
  opt.grade_levels = grade == GradeEnd::none ? 0 : 6;
  const auto r = integrate(std::forward<F>(f), lo, hi, opt);
  if (!r.converged)
    throw ConvergenceError("quadrature did not converge (error estimate " + std::to_string(r.abs_error) + ")");
  return r.value;
}

// sqrt(t^2 - r^2) without cancellation near r = t.
double cone_sqrt(double t, double r) { return std::sqrt(std::max(0.0, (t - r) * (t + r))); }

void require_time(double t, const char* who) {
  if (!(t >= 0) || !std::isfinite(t)) throw DomainError(std::string(who) + ": t must be non-negative");
}

}  // namespace

double minkowski_kg_solution(const CauchyData& data, const SourceTerm& src, double M, double x,
                             double t, double quad_tol) {
  require_time(t, "minkowski_kg_solution");
  if (!(M >= 0)) throw DomainError("minkowski_kg_solution: M must be non-negative");
  if (t == 0) return data.phi0_zero ? 0.0 : data.phi0(x);
  const Dim dim = data.dim;
  double u = 0;
  if (!data.phi0_zero) {
    // d/dt I0(M sqrt(t^2 - r^2)) = M^2 t I1(y)/y with y = M sqrt(t^2 - r^2).
    u += wave_value(dim, data.phi0, x, t);
    u += quad(
        [&](double r) {
          return M * M * t * bessel_i1_over_x(M * cone_sqrt(t, r)) * wave_value(dim, data.phi0, x, r);
        },
        0.0, t, quad_tol / 3);
  }
  if (!data.phi1_zero) {
    u += quad([&](double r) { return bessel_i0(M * cone_sqrt(t, r)) * wave_value(dim, data.phi1, x, r); },
              0.0, t, quad_tol / 3);
  }
  if (!src.zero) {
    u += quad(
        [&](double b) {
          const double tb = t - b;
          if (tb <= 0) return 0.0;
          const Profile fb = src.at(b);
          return quad([&](double r) { return bessel_i0(M * cone_sqrt(tb, r)) * wave_value(dim, fb, x, r); },
                      0.0, tb, quad_tol / 30);
        },
        0.0, t, quad_tol / 3);
  }
  return u;
}

double desitter_source_solution(const SourceTerm& src, Dim dim, double M, double x, double t,
                                double quad_tol) {
  require_time(t, "desitter_source_solution");
  if (!(M >= 0)) throw DomainError("desitter_source_solution: M must be non-negative");
  if (src.zero || t == 0) return 0.0;
  const double inner = quad(
      [&](double b) {
        const double rho = cone_radius(t, b);
        if (rho <= 0) return 0.0;
        const Profile fb = src.at(b);
        return quad([&](double r) { return wave_value(dim, fb, x, r) * kernel_E(KernelArg<double>{r, t, b, M}); },
                    0.0, rho, quad_tol / 20);
      },
      0.0, t, quad_tol / 2);
  return 2 * inner;
}

double desitter_cauchy_solution(const CauchyData& data, double M, double x, double t, double quad_tol) {
  require_time(t, "desitter_cauchy_solution");
  if (!(M >= 0)) throw DomainError("desitter_cauchy_solution: M must be non-negative");
  if (t == 0) return data.phi0_zero ? 0.0 : data.phi0(x);
  const double phi = -std::expm1(-t);
  const Dim dim = data.dim;
  double u = 0;
  if (!data.phi0_zero) {
    u += std::exp(t / 2) * wave_value(dim, data.phi0, x, phi);
    u += 2 * quad([&](double r) { return wave_value(dim, data.phi0, x, r) * kernel_K0(r, t, M); }, 0.0, phi,
                  quad_tol / 4, GradeEnd::upper);
  }
  if (!data.phi1_zero) {
    u += 2 * quad([&](double r) { return wave_value(dim, data.phi1, x, r) * kernel_K1(r, t, M); }, 0.0, phi,
                  quad_tol / 4, GradeEnd::upper);
  }
  return u;
}

double desitter_solution(const CauchyData& data, const SourceTerm& src, double M, double x, double t,
                         double quad_tol) {
  return desitter_cauchy_solution(data, M, x, t, quad_tol / 2) +
         desitter_source_solution(src, data.dim, M, x, t, quad_tol / 2);
}

double fd_laplacian(Dim dim, const Profile& phi, double s) {
  const double h = kLaplacianStep;
  if (dim == Dim::line) return (phi(s + h) - 2 * phi(s) + phi(s - h)) / (h * h);
  // 7-point stencil of the radial extension at (s, 0, 0); regular at s = 0.
  const double c = phi(s);
  const double side = std::sqrt(s * s + h * h);
  return (phi(s + h) + phi(std::abs(s - h)) + 4 * phi(side) - 6 * c) / (h * h);
}

double desitter_threshold(double M) {
  if (!(M > 1)) throw DomainError("de Sitter threshold ln(M/(M-1)) needs M > 1");
  return std::log(M / (M - 1));
}

namespace {

double cone_reach(Space space, double t) { return space == Space::minkowski ? t : -std::expm1(-t); }

bool in_dependence_domain(Dim dim, const SampleSpec& spec, double x, double rho) {
  if (dim == Dim::line) return x - rho >= spec.d0_lo && x + rho <= spec.d0_hi;
  if (x + rho > spec.d0_hi) return false;
  return spec.d0_lo <= 0 || x - rho >= spec.d0_lo;
}

std::vector<double> probe_positions(Dim dim, const SampleSpec& spec, double reach) {
  double lo = std::max(spec.x_lo - reach, spec.d0_lo);
  double hi = std::min(spec.x_hi + reach, spec.d0_hi);
  if (dim == Dim::radial3) lo = std::max(0.0, lo);
  std::vector<double> out;
  constexpr int n = 65;
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
  return out;
}

void check_profile(Dim dim, const Profile& p, const std::vector<double>& xs, const char* name) {
  for (double s : xs) {
    const double v = p(s);
    if (v > 0)
      throw DomainError(std::string("max principle precondition: ") + name + " is positive at " + std::to_string(s));
    const double lap = fd_laplacian(dim, p, s);
    if (lap > kTolSuperharmonic)
      throw DomainError(std::string("max principle precondition: ") + name + " is not superharmonic at " +
                        std::to_string(s) + " (Laplacian " + std::to_string(lap) + ")");
  }
}

MaxPrincipleReport run_check(Space space, const CauchyData& data, const SourceTerm& src, double M,
                             SampleSpec spec) {
  if (spec.n_points < 1) throw DomainError("max principle: n_points must be positive");
  if (!(spec.t_hi > spec.t_lo) || spec.t_lo < 0) throw DomainError("max principle: need 0 <= t_lo < t_hi");
  if (data.dim == Dim::radial3 && spec.x_lo < 0) throw DomainError("max principle: radii must be non-negative");
  if (!(M > 0)) throw DomainError("max principle: M must be positive");

  MaxPrincipleReport rep;
  rep.space = space;
  rep.M = M;
  if (space == Space::desitter && !data.phi0_zero) {
    rep.t_threshold = desitter_threshold(M);
    spec.t_lo = std::max(spec.t_lo, rep.t_threshold);
    if (spec.t_lo >= spec.t_hi) throw DomainError("max principle: sample window lies below ln(M/(M-1))");
  }

  check_max_principle_preconditions(data, src, spec);

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> ux(spec.x_lo, spec.x_hi), ut(spec.t_lo, spec.t_hi);
  std::vector<std::pair<double, double>> points;
  const long max_attempts = 1000L * spec.n_points;
  for (long attempt = 0; attempt < max_attempts && static_cast<int>(points.size()) < spec.n_points; ++attempt) {
    const double x = ux(rng);
    const double t = ut(rng);
    if (in_dependence_domain(data.dim, spec, x, cone_reach(space, t))) points.emplace_back(x, t);
  }
  if (points.empty()) throw DomainError("max principle: no sample lies in the domain of dependence of D0");

  rep.worst_violation = 0;
  for (const auto& [x, t] : points) {
    const double u = space == Space::minkowski ? minkowski_kg_solution(data, src, M, x, t, spec.quad_tol)
                                               : desitter_solution(data, src, M, x, t, spec.quad_tol);
    double rhs = 0;
    if (!data.phi0_zero) rhs += std::cosh(M * t) * data.phi0(x);
    if (!data.phi1_zero) rhs += sinh_over_m(M, t) * data.phi1(x);
    if (!src.zero) rhs += quad([&](double b) { return src(x, b) * sinh_over_m(M, t - b); }, 0.0, t, spec.quad_tol);
    const double viol = std::max(u - rhs, u);
    rep.max_u_minus_rhs = std::max(rep.max_u_minus_rhs, u - rhs);
    rep.max_u = std::max(rep.max_u, u);
    rep.worst_violation = std::max(rep.worst_violation, viol);
    if (spec.keep_samples) rep.samples.push_back({x, t, u, rhs, viol});
  }
  rep.n_points = static_cast<long>(points.size());
  rep.passed = rep.worst_violation <= rep.tol_mp;
  return rep;
}

}  // namespace

void check_max_principle_preconditions(const CauchyData& data, const SourceTerm& src, const SampleSpec& spec) {
  const double reach = std::max(spec.t_hi, 1.0);
  const auto xs = probe_positions(data.dim, spec, reach);
  if (!data.phi0_zero) check_profile(data.dim, data.phi0, xs, "u(x,0)");
  if (!data.phi1_zero) check_profile(data.dim, data.phi1, xs, "u_t(x,0)");
  if (!src.zero) {
    for (int k = 0; k <= 8; ++k) check_profile(data.dim, src.at(spec.t_hi * k / 8), xs, "source f");
  }
}

MaxPrincipleReport check_max_principle_minkowski(const CauchyData& data, const SourceTerm& src, double M,
                                                 const SampleSpec& spec) {
  return run_check(Space::minkowski, data, src, M, spec);
}

MaxPrincipleReport check_max_principle_desitter(const CauchyData& data, const SourceTerm& src, double M,
                                                const SampleSpec& spec) {
  return run_check(Space::desitter, data, src, M, spec);
}

double tail_functional(const std::function<double(double)>& v, double s, double quad_tol) {
  if (!(s >= 0 && s <= 1)) throw DomainError("tail_functional: s must lie in [0, 1]");
  if (s == 0) return v(0);
  return v(s) - 0.5 * quad(v, 0.0, s, quad_tol);
}

}  // namespace kg
