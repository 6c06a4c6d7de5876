#include "kg/semilinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kg/errors.hpp"

namespace kg {

namespace {

// Cubic Lagrange weights on the uniform grid x0 + h*i, i = 0..n-1, for the
// four nodes around pos.  Returns the first node index.
int lagrange4(double x, double x0, double h, int n, double w[4]) {
  const double pos = (x - x0) / h;
  int i0 = static_cast<int>(std::floor(pos)) - 1;
  i0 = std::clamp(i0, 0, n - 4);
  for (int a = 0; a < 4; ++a) {
    double l = 1;
    for (int b = 0; b < 4; ++b)
      if (b != a) l *= (pos - double(i0 + b)) / double(a - b);
    w[a] = l;
  }
  return i0;
}

double sup_norm(const Lattice& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

bool uniform(const std::vector<double>& xs) {
  if (xs.size() < 2) return true;
  const double h = xs[1] - xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (std::abs((xs[i] - xs[i - 1]) - h) > 1e-9 * std::abs(h)) return false;
  return h > 0;
}

}  // namespace

double mass_from_mu2(double mu2) {
  const double m2 = 2.25 + mu2;
  if (!(m2 >= 0)) throw DomainError("mass_from_mu2: 9/4 + mu2 must be non-negative");
  return std::sqrt(m2);
}

void PicardConfig::validate() const {
  if (!(M >= 0) || !std::isfinite(M)) throw DomainError("picard: M must be finite and >= 0");
  if (!(t_max > 0)) throw DomainError("picard: t_max must be positive");
  if (nt < 3) throw DomainError("picard: nt must be >= 3");
  if (n_iter < 1) throw DomainError("picard: n_iter must be >= 1");
  if (xs.empty()) throw DomainError("picard: empty x lattice");
  if (xs.size() > 1 && (xs.size() < 4 || !uniform(xs)))
    throw DomainError("picard: x lattice must be uniform with at least 4 nodes");
  if (dim == Dim::radial3 && xs.front() < 0) throw DomainError("picard: radial lattice needs x >= 0");
}

std::vector<double> PicardConfig::times() const {
  std::vector<double> ts(nt + 1);
  for (int j = 0; j <= nt; ++j) ts[j] = t_max * j / nt;
  return ts;
}

Lattice g_apply(const SourceTerm& src, const PicardConfig& cfg) {
  cfg.validate();
  const auto ts = cfg.times();
  Lattice out = Lattice::Zero(ts.size(), cfg.xs.size());
  if (src.zero) return out;
  for (std::size_t j = 1; j < ts.size(); ++j)
    for (std::size_t i = 0; i < cfg.xs.size(); ++i)
      out(j, i) = desitter_source_solution(src, cfg.dim, cfg.M, cfg.xs[i], ts[j], cfg.quad_tol);
  return out;
}

SourceTerm cubic_source(const Lattice& u, const PicardConfig& cfg) {
  if (cfg.lambda == 0) return SourceTerm::none();
  const double ht = cfg.t_max / cfg.nt;
  const int nt = cfg.nt + 1;
  const double lambda = cfg.lambda;
  const Lattice cube = u.array().cube().matrix();
  if (cfg.xs.size() == 1) {
    return SourceTerm::make([cube, ht, nt, lambda](double, double b) {
      double w[4];
      const int j0 = lagrange4(b, 0.0, ht, nt, w);
      double v = 0;
      for (int a = 0; a < 4; ++a) v += w[a] * cube(j0 + a, 0);
      return lambda * std::exp(-3 * b) * v;
    });
  }
  const double x0 = cfg.xs.front();
  const double hx = cfg.xs[1] - cfg.xs[0];
  const int nx = static_cast<int>(cfg.xs.size());
  const double x_hi = cfg.xs.back();
  const bool radial = cfg.dim == Dim::radial3;
  return SourceTerm::make([cube, ht, nt, hx, nx, x0, x_hi, lambda, radial](double s, double b) {
    if (radial) s = std::abs(s);
    if (s < x0 || s > x_hi) return 0.0;
    double wt[4], wx[4];
    const int j0 = lagrange4(b, 0.0, ht, nt, wt);
    const int i0 = lagrange4(s, x0, hx, nx, wx);
    double v = 0;
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 4; ++c) v += wt[a] * wx[c] * cube(j0 + a, i0 + c);
    return lambda * std::exp(-3 * b) * v;
  });
}

PicardResult picard_weak_solution(const CauchyData& data, const PicardConfig& cfg) {
  cfg.validate();
  if (data.dim != cfg.dim) throw DomainError("picard: data and lattice dimensions differ");
  const auto ts = cfg.times();
  PicardResult res;
  res.u0.resize(ts.size(), cfg.xs.size());
  for (std::size_t j = 0; j < ts.size(); ++j)
    for (std::size_t i = 0; i < cfg.xs.size(); ++i)
      res.u0(j, i) = desitter_cauchy_solution(data, cfg.M, cfg.xs[i], ts[j], cfg.quad_tol);
  if (!res.u0.allFinite()) throw NumericalError("picard: non-finite linear solution");
  res.u = res.u0;
  int growth = 0;
  const double scale = std::max(sup_norm(res.u0), std::numeric_limits<double>::min());
  for (int k = 0; k < cfg.n_iter; ++k) {
    Lattice next = res.u0 - g_apply(cubic_source(res.u, cfg), cfg);
    if (!next.allFinite()) {
      res.report.diverged = true;
      break;
    }
    const double d = sup_norm(next - res.u);
    auto& diffs = res.report.sup_differences;
    growth = (!diffs.empty() && d > diffs.back()) ? growth + 1 : 0;
    diffs.push_back(d);
    res.u = std::move(next);
    res.report.iterations = k + 1;
    if (growth >= 3) {
      res.report.diverged = true;
      break;
    }
    if (d <= 1e-12 * scale) {
      res.report.converged = true;
      break;
    }
  }
  return res;
}

Trajectory duffing_ode(double psi0, double psi1, double mu2, double lambda, double t_end, double dt,
                       double damping) {
  if (!(dt > 0) || !(t_end >= 0)) throw DomainError("duffing: need dt > 0 and t_end >= 0");
  if (!(lambda >= 0)) throw DomainError("duffing: lambda must be non-negative");
  if (!(damping >= 0)) throw DomainError("duffing: damping must be non-negative");
  const long n = static_cast<long>(std::ceil(t_end / dt - 1e-12));
  const double h = n > 0 ? t_end / n : 0.0;
  auto rhs = [&](double p, double q) {
    return std::pair<double, double>{q, -damping * q + mu2 * p - lambda * p * p * p};
  };
  auto energy = [&](double p, double q) {
    return 0.5 * q * q - 0.5 * mu2 * p * p + 0.25 * lambda * p * p * p * p;
  };
  Trajectory tr;
  tr.t.reserve(n + 1);
  double p = psi0, q = psi1;
  auto push = [&](double t) {
    tr.t.push_back(t);
    tr.psi.push_back(p);
    tr.dpsi.push_back(q);
    tr.energy.push_back(energy(p, q));
  };
  push(0.0);
  for (long s = 0; s < n; ++s) {
    const auto [k1p, k1q] = rhs(p, q);
    const auto [k2p, k2q] = rhs(p + 0.5 * h * k1p, q + 0.5 * h * k1q);
    const auto [k3p, k3q] = rhs(p + 0.5 * h * k2p, q + 0.5 * h * k2q);
    const auto [k4p, k4q] = rhs(p + h * k3p, q + h * k3q);
    p += h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
    q += h / 6 * (k1q + 2 * k2q + 2 * k3q + k4q);
    const double e_prev = tr.energy.back();
    push((s + 1) * h);
    if (!std::isfinite(p) || !std::isfinite(q)) throw NumericalError("duffing: non-finite state");
    const double e = tr.energy.back();
    const double tol = 1e-6 * std::max({1.0, std::abs(e_prev), std::abs(e)});
    if (e > e_prev + tol) throw NumericalError("duffing: energy increased at t = " + std::to_string(tr.t.back()));
  }
  return tr;
}

FunctionalResult f_functional(const std::vector<Field3D>& snaps, const FunctionalOptions& opt) {
  if (snaps.empty()) throw DomainError("functional: no snapshots");
  if (!opt.source_integral.empty() && opt.source_integral.size() != snaps.size())
    throw DomainError("functional: source_integral length differs from the snapshot count");
  FunctionalResult res;
  auto& s = res.series;
  std::vector<double> cubes;
  double peak = 0;
  for (const auto& f : snaps) peak = std::max(peak, f.max_abs());
  for (const auto& f : snaps) {
    if (!f.same_shape(snaps.front())) throw DomainError("functional: snapshots differ in shape");
    if (!f.all_finite()) throw NumericalError("functional: non-finite snapshot");
    // The identity for F needs psi to vanish near the faces.
    double edge = 0;
    const int n = f.n;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const bool shell = std::min({i, j, k, n - 1 - i, n - 1 - j, n - 1 - k}) < 2;
          if (shell) edge = std::max(edge, std::abs(f(i, j, k)));
        }
    if (edge > opt.support_tol * std::max(peak, 1e-300))
      throw DomainError("functional: support reaches the boundary at t = " + std::to_string(f.time) +
                        " (edge value " + std::to_string(edge) + ")");
    s.times.push_back(f.time);
    s.F_values.push_back(integrate_box(f));
    cubes.push_back(integrate_power(f, 3));
  }
  // sigma makes -sigma int psi^3 positive at late times.
  const double last_cube = cubes.back();
  s.sigma = last_cube > 0 ? -1 : 1;
  for (std::size_t m = 0; m < snaps.size(); ++m) {
    const double denom = -s.sigma * cubes[m];
    if (denom > 1e-14) {
      const double a = std::abs(s.F_values[m]);
      s.nu_lower.push_back(a * a * a / denom);
    } else {
      s.nu_lower.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  if (snaps.size() >= 3) {
    const double h = s.times[1] - s.times[0];
    for (std::size_t m = 1; m + 1 < snaps.size(); ++m) {
      const double hm = s.times[m + 1] - s.times[m];
      if (!(h > 0) || std::abs(hm - h) > 1e-9 * h)
        throw DomainError("functional: snapshots must be equally spaced in time");
    }
    for (std::size_t m = 1; m + 1 < snaps.size(); ++m) {
      const double F2 = (s.F_values[m + 1] - 2 * s.F_values[m] + s.F_values[m - 1]) / (h * h);
      const double F1 = (s.F_values[m + 1] - s.F_values[m - 1]) / (2 * h);
      const double src = opt.source_integral.empty() ? 0.0 : opt.source_integral[m];
      const double r = F2 + opt.damping * F1 - opt.mu2 * s.F_values[m] + opt.lambda * cubes[m] - src;
      res.residual_t.push_back(s.times[m]);
      res.residual.push_back(r);
      res.max_abs_residual = std::max(res.max_abs_residual, std::abs(r));
    }
  }
  return res;
}

SignConditionResult sign_change_condition(double i0, double i1, double param, SignForm form) {
  if (!std::isfinite(i0) || !std::isfinite(i1) || !std::isfinite(param))
    throw DomainError("signcond: non-finite input");
  SignConditionResult r;
  if (form == SignForm::higgs) {
    r.coef0 = std::sqrt(9 + 4 * param * param) + 3;
    r.coef1 = 2;
  } else {
    r.coef0 = param;
    r.coef1 = 1;
  }
  const double base = r.coef0 * i0 + r.coef1 * i1;
  r.lhs_plus = base;
  r.lhs_minus = -base;
  r.satisfied_sigma = base > 0 ? 1 : (base < 0 ? -1 : 0);
  return r;
}

SignConditionResult sign_change_condition(const Field3D& d0, const Field3D& d1, double param, SignForm form) {
  if (!d0.same_shape(d1)) throw DomainError("signcond: data differ in shape");
  return sign_change_condition(integrate_box(d0), integrate_box(d1), param, form);
}

std::optional<double> l3_weight_measure(const Field3D& field, double tol) {
  const double c = integrate_power(field, 3);
  if (!(std::abs(c) > tol)) return std::nullopt;
  const double a = std::abs(integrate_box(field));
  return a * a * a / std::abs(c);
}

double wall_value(const WallSpec& w, const Eigen::Vector3d& x, double t) {
  if (!(w.lambda > 0)) throw DomainError("wall: lambda must be positive");
  if (!(std::abs(w.v) < 1)) throw DomainError("wall: |v| must be below 1");
  const double kappa = w.profile == WallProfile::literal ? 0.5 * w.mu * w.mu : w.mu / std::sqrt(2.0);
  const double xi = (w.N.normalized().dot(x - w.x0) - w.v * t) / std::sqrt(1 - w.v * w.v);
  return w.mu / std::sqrt(w.lambda) * std::tanh(kappa * xi);
}

double static_wall_residual(const WallSpec& w, double h) {
  if (!(h > 0)) throw DomainError("wall: h must be positive");
  constexpr double c[5] = {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
  const double t = 0.5;
  double worst = 0;
  for (int a = 0; a < 9; ++a)
    for (int b = 0; b < 9; ++b)
      for (int d = 0; d < 9; ++d) {
        const Eigen::Vector3d x = w.x0 + Eigen::Vector3d(-1 + 0.25 * a, -1 + 0.25 * b, -1 + 0.25 * d);
        const double psi = wall_value(w, x, t);
        double dtt = 0, lap = 0;
        for (int m = -2; m <= 2; ++m) {
          dtt += c[m + 2] * wall_value(w, x, t + m * h);
          for (int ax = 0; ax < 3; ++ax) {
            Eigen::Vector3d y = x;
            y(ax) += m * h;
            lap += c[m + 2] * wall_value(w, y, t);
          }
        }
        const double r = (dtt - lap) / (h * h) - w.mu * w.mu * psi + w.lambda * psi * psi * psi;
        worst = std::max(worst, std::abs(r));
      }
  return worst;
}

WallConvergence wall_convergence(const WallSpec& w, const std::vector<double>& hs) {
  WallConvergence out;
  for (double h : hs) {
    out.h.push_back(h);
    out.residual.push_back(static_wall_residual(w, h));
  }
  for (std::size_t i = 1; i < hs.size(); ++i)
    out.observed_order.push_back(std::log(out.residual[i - 1] / out.residual[i]) / std::log(hs[i - 1] / hs[i]));
  // A floor shows up as successive ratios near one while the residual stays
  // far above the size a fourth-order truncation error would reach.
  if (out.observed_order.size() >= 1) {
    const double last = out.observed_order.back();
    out.h_independent_floor = std::abs(last) < 0.5 && out.residual.back() > 1e-6;
  }
  return out;
}

}  // namespace kg
