#include "kg/radial_fd.hpp"

#include <cmath>

#include "kg/errors.hpp"

namespace kg {

namespace {

Eigen::VectorXd to_u(const Eigen::VectorXd& w, const Eigen::VectorXd& r) {
  Eigen::VectorXd u(w.size());
  const double dr = r(1);
  // w = a r + b r^3 near the origin, so u(0) = a = (8 w_1 - w_2)/(6 dr).
  u(0) = (8 * w(1) - w(2)) / (6 * dr);
  for (Eigen::Index i = 1; i < w.size(); ++i) u(i) = w(i) / r(i);
  return u;
}

}  // namespace

double RadialFdResult::value_at(double s, std::size_t k) const {
  if (k >= u.size()) throw DomainError("radial FD: time level out of range");
  const Eigen::VectorXd& v = u[k];
  const Eigen::Index n = r.size();
  const double dr = r(1) - r(0);
  if (!(s >= 0 && s <= r(n - 1))) throw DomainError("radial FD: radius outside the grid");
  const double pos = s / dr;
  Eigen::Index i0 = static_cast<Eigen::Index>(std::floor(pos)) - 1;
  i0 = std::clamp<Eigen::Index>(i0, 0, n - 4);
  double out = 0;
  for (int a = 0; a < 4; ++a) {
    double l = 1;
    for (int b = 0; b < 4; ++b)
      if (b != a) l *= (pos - double(i0 + b)) / double(a - b);
    out += l * v(i0 + a);
  }
  return out;
}

RadialFdResult radial_fd_solve(const CauchyData& data, const SourceTerm& src, double M, const RadialFdSpec& spec) {
  if (data.dim != Dim::radial3) throw DomainError("radial FD: data must be radial");
  if (spec.nr < 64) throw DomainError("radial FD: nr must be >= 64");
  if (!(spec.r_max > 0) || !(spec.t_end > 0)) throw DomainError("radial FD: r_max and t_end must be positive");
  const int nr = spec.nr;
  const double dr = spec.r_max / nr;
  double dt = spec.dt > 0 ? spec.dt : spec.cfl * dr;
  const long nt = static_cast<long>(std::ceil(spec.t_end / dt - 1e-12));
  dt = spec.t_end / nt;
  if (!(dt < dr)) throw DomainError("radial FD: CFL violation, need dt < dr");

  RadialFdResult res;
  res.dt = dt;
  res.r = Eigen::VectorXd::LinSpaced(nr + 1, 0.0, spec.r_max);
  const Eigen::VectorXd& r = res.r;
  auto sample = [&](const Profile& p, bool zero) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(nr + 1);
    if (zero) return w;
    for (int i = 1; i < nr; ++i) w(i) = r(i) * p(r(i));
    return w;
  };
  auto forcing = [&](double t) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(nr + 1);
    if (src.zero) return g;
    for (int i = 1; i < nr; ++i) g(i) = r(i) * src(r(i), t);
    return g;
  };
  const double M2 = M * M;
  auto accel = [&](const Eigen::VectorXd& w, double t) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(nr + 1);
    const double c = std::exp(-2 * t) / (dr * dr);
    const Eigen::VectorXd g = forcing(t);
    for (int i = 1; i < nr; ++i) a(i) = c * (w(i + 1) - 2 * w(i) + w(i - 1)) + M2 * w(i) + g(i);
    return a;
  };
  auto keep = [&](long step, const Eigen::VectorXd& w) {
    const bool final = step == nt;
    if (final || (spec.history_every > 0 && step % spec.history_every == 0)) {
      res.times.push_back(step * dt);
      res.u.push_back(to_u(w, r));
    }
  };

  Eigen::VectorXd w_prev = sample(data.phi0, data.phi0_zero);
  const Eigen::VectorXd w1 = sample(data.phi1, data.phi1_zero);
  keep(0, w_prev);
  Eigen::VectorXd w = w_prev + dt * w1 + 0.5 * dt * dt * accel(w_prev, 0.0);
  w(0) = w(nr) = 0;
  keep(1, w);
  for (long step = 1; step < nt; ++step) {
    Eigen::VectorXd w_next = 2 * w - w_prev + dt * dt * accel(w, step * dt);
    w_next(0) = w_next(nr) = 0;
    if (!w_next.allFinite()) throw NumericalError("radial FD: non-finite value");
    w_prev.swap(w);
    w.swap(w_next);
    keep(step + 1, w);
  }
  return res;
}

}  // namespace kg
