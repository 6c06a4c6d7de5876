#include "kg/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "kg/errors.hpp"
#include "kg/parallel.hpp"
#include "kg/quadrature.hpp"
#include "kg/specfun.hpp"

namespace kg {

namespace {

// Series tolerance for the hypergeometric factors: 1e-15 in double, tighter
// for wider types so identity checks can run at extended precision.
template <typename Scalar>
constexpr Scalar hyp_tol() {
  return std::numeric_limits<Scalar>::digits > 53 ? Scalar(1e-17) : Scalar(1e-15);
}

// Relative slack allowed on z beyond the cone radius before DomainError.
template <typename Scalar>
constexpr Scalar cone_slack() {
  return 64 * std::numeric_limits<Scalar>::epsilon();
}

// Geometry for arbitrary ordered or swapped time pair; radius may be negative.
template <typename Scalar>
ConeGeometry<Scalar> geometry_unchecked(Scalar z, Scalar t, Scalar b) {
  using std::abs;
  using std::exp;
  using std::expm1;
  const Scalar p = exp(-b);
  const Scalar q = exp(-t);
  ConeGeometry<Scalar> g;
  g.radius = -p * expm1(-(t - b));  // p - q without cancellation
  const Scalar d = abs(g.radius);
  if (!(z >= 0)) throw DomainError("kernel: z must be non-negative");
  if (z > d * (1 + cone_slack<Scalar>()) + std::numeric_limits<Scalar>::min())
    throw DomainError("kernel: z lies outside the light cone");
  g.diff_sq = std::max(Scalar(0), (d - z) * (d + z));
  const Scalar s = p + q;
  g.sum_sq = (s - z) * (s + z);
  g.zeta = g.diff_sq / g.sum_sq;
  g.one_minus_zeta = 4 * p * q / g.sum_sq;
  return g;
}

template <typename Scalar>
Scalar log_prefactor(Scalar M, Scalar t_plus_b, Scalar sum_sq) {
  return -M * std::numbers::ln2_v<Scalar> * 2 + M * t_plus_b + (M - Scalar(0.5)) * std::log(sum_sq);
}

template <typename Scalar>
Scalar hyp(Scalar a, Scalar b, Scalar c, const ConeGeometry<Scalar>& g) {
  return gauss_2f1(a, b, c, g.zeta, hyp_tol<Scalar>(), g.one_minus_zeta).value;
}

template <typename Scalar>
Scalar hyp_excess(Scalar a, Scalar b, const ConeGeometry<Scalar>& g) {
  return gauss_2f1_excess(a, b, Scalar(1), g.zeta, hyp_tol<Scalar>(), g.one_minus_zeta).value;
}

// E for any pair of times with z inside |e^{-b} - e^{-t}|; symmetric in (t, b).
template <typename Scalar>
Scalar kernel_E_formula(Scalar z, Scalar t, Scalar b, Scalar M) {
  const auto g = geometry_unchecked(z, t, b);
  const Scalar a = Scalar(0.5) - M;
  return std::exp(log_prefactor(M, t + b, g.sum_sq)) * hyp(a, a, Scalar(1), g);
}

}  // namespace

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::E:
      return "E";
    case KernelKind::K0:
      return "K0";
    case KernelKind::K1:
      return "K1";
  }
  return "?";
}

KernelKind kernel_kind_from_string(const std::string& name) {
  if (name == "E") return KernelKind::E;
  if (name == "K0") return KernelKind::K0;
  if (name == "K1") return KernelKind::K1;
  throw DomainError("unknown kernel '" + name + "' (expected E, K0 or K1)");
}

template <typename Scalar>
ConeGeometry<Scalar> cone_geometry(Scalar z, Scalar t, Scalar b) {
  if (!(b >= 0 && b <= t)) throw DomainError("kernel: b must lie in [0, t]");
  return geometry_unchecked(z, t, b);
}

double cone_radius(double t, double b) { return -std::exp(-b) * std::expm1(-(t - b)); }

template <typename Scalar>
Scalar kernel_E(const KernelArg<Scalar>& arg) {
  if (!(arg.M >= 0)) throw DomainError("kernel_E: M must be non-negative");
  if (!(arg.b >= 0 && arg.b <= arg.t)) throw DomainError("kernel_E: b must lie in [0, t]");
  return kernel_E_formula(arg.z, arg.t, arg.b, arg.M);
}

template <typename Scalar>
Scalar kernel_E_swapped(const KernelArg<Scalar>& arg) {
  return kernel_E_formula(arg.z, arg.b, arg.t, arg.M);
}

template <typename Scalar>
Scalar kernel_K1(Scalar z, Scalar t, Scalar M) {
  return kernel_E(KernelArg<Scalar>{z, t, Scalar(0), M});
}

template <typename Scalar>
Scalar kernel_K0(Scalar z, Scalar t, Scalar M) {
  if (!(M >= 0)) throw DomainError("kernel_K0: M must be non-negative");
  if (!(t > 0)) throw DomainError("kernel_K0: t must be positive");
  const auto g = cone_geometry(z, t, Scalar(0));
  const Scalar a = Scalar(0.5) - M;
  // A1 = q - 1 + M(q^2 - 1 - z^2), A2 = (1 - q^2 + z^2)(1/2 + M); A1 + A2 = -D/2.
  const Scalar A1 = std::expm1(-t) + M * (std::expm1(-2 * t) - z * z);
  const Scalar A2 = (-std::expm1(-2 * t) + z * z) * (Scalar(0.5) + M);
  const Scalar G1 = hyp_excess(a, a, g);
  const Scalar G2 = hyp_excess(a - 1, a, g);
  const Scalar bracket = Scalar(-0.5) + (A1 * G1 + A2 * G2) / g.sum_sq;
  return std::exp(log_prefactor(M, t, g.sum_sq)) * bracket;
}

template <typename Scalar>
Scalar kernel_K0_literal(Scalar z, Scalar t, Scalar M) {
  if (!(t > 0)) throw DomainError("kernel_K0_literal: t must be positive");
  const auto g = cone_geometry(z, t, Scalar(0));
  if (!(g.diff_sq > 0)) throw DomainError("kernel_K0_literal: singular on the light cone");
  const Scalar a = Scalar(0.5) - M;
  const Scalar q = std::exp(-t);
  const Scalar A1 = q - 1 + M * (q * q - 1 - z * z);
  const Scalar A2 = (1 - q * q + z * z) * (Scalar(0.5) + M);
  const Scalar F1 = hyp(a, a, Scalar(1), g);
  const Scalar F2 = hyp(a - 1, a, Scalar(1), g);
  return std::exp(log_prefactor(M, t, g.sum_sq)) / g.diff_sq * (A1 * F1 + A2 * F2);
}

template <typename Scalar>
Scalar kernel_K0_half_integer(Scalar z, Scalar t, int k, HalfIntegerForm form) {
  if (k < 0) throw DomainError("kernel_K0_half_integer: k must be non-negative");
  if (!(t > 0)) throw DomainError("kernel_K0_half_integer: t must be positive");
  const auto g = cone_geometry(z, t, Scalar(0));
  const Scalar kk = k;
  const Scalar et = std::exp(t);
  const Scalar e2t = et * et;
  const Scalar r2 = z * z;
  const Scalar F_c2 = k == 0 ? Scalar(0) : hyp(1 - kk, 1 - kk, Scalar(2), g);
  const Scalar F_c1 = hyp(-kk, -kk, Scalar(1), g);
  const Scalar outer = form == HalfIntegerForm::literal ? (1 + et) * (1 + et) - r2
                                                        : (1 + et) * (1 + et) - r2 * e2t;
  const Scalar bracket = 8 * kk * kk * et * ((r2 + 1) * e2t - 1) * F_c2 +
                         outer * (e2t * (2 * kk * (r2 + 1) + r2 - 1) - 2 * kk - 2 * et - 1) * F_c1;
  Scalar log_pref = -(kk + 1) * 2 * std::numbers::ln2_v<Scalar> + (kk + Scalar(0.5)) * t +
                    (kk - 2) * std::log(g.sum_sq);
  if (form == HalfIntegerForm::corrected) log_pref -= 4 * t;
  return std::exp(log_pref) * bracket;
}

template <typename Scalar>
Scalar kernel_eval(KernelKind kind, const KernelArg<Scalar>& arg) {
  switch (kind) {
    case KernelKind::E:
      return kernel_E(arg);
    case KernelKind::K1:
      return kernel_K1(arg.z, arg.t, arg.M);
    case KernelKind::K0:
      return kernel_K0(arg.z, arg.t, arg.M);
  }
  throw DomainError("kernel_eval: unknown kind");
}

double sinh_over_m(double M, double x) {
  const double y = M * x;
  if (std::abs(M) < 1e-6) return x * (1 + y * y / 6 * (1 + y * y / 20));
  return std::sinh(y) / M;
}

namespace {

long double sinh_over_m_ld(long double M, long double x) {
  const long double y = M * x;
  if (std::abs(M) < 1e-6L) return x * (1 + y * y / 6 * (1 + y * y / 20));
  return std::sinh(y) / M;
}

}  // namespace

IdentityResiduals verify_kernel_identities(double t, double b, double M, double quad_tol) {
  if (!(M > 0)) throw DomainError("verify identities: M must be positive");
  if (!(b >= 0 && b < t)) throw DomainError("verify identities: need 0 <= b < t");
  if (!(quad_tol > 0)) throw DomainError("verify identities: quad_tol must be positive");
  using LD = long double;
  const LD tl = t, bl = b, Ml = M;
  QuadOptions opt;
  opt.abs_tol = quad_tol / 10;
  opt.rel_tol = 1e-17;
  opt.grade = GradeEnd::upper;
  opt.grade_levels = 8;
  opt.max_intervals = 2000;

  IdentityResiduals out;
  auto accumulate = [&](const QuadResult<LD>& q) {
    out.quad_error = std::max(out.quad_error, double(q.abs_error));
    out.converged = out.converged && q.converged;
    return q.value;
  };

  const LD rE = -std::exp(-bl) * std::expm1(-(tl - bl));
  const LD iE = accumulate(integrate([&](LD r) { return kernel_E(KernelArg<LD>{r, tl, bl, Ml}); }, LD(0), rE, opt));
  out.res_E = double(std::abs(iE - sinh_over_m_ld(Ml, tl - bl) / 2));

  const LD phi = -std::expm1(-tl);
  const LD i1 = accumulate(integrate([&](LD r) { return kernel_K1(r, tl, Ml); }, LD(0), phi, opt));
  out.res_K1 = double(std::abs(2 * i1 - sinh_over_m_ld(Ml, tl)));

  const LD i0 = accumulate(integrate([&](LD r) { return kernel_K0(r, tl, Ml); }, LD(0), phi, opt));
  out.res_K0 = double(std::abs(std::exp(tl / 2) + 2 * i0 - std::cosh(Ml * tl)));
  return out;
}

PositivityReport positivity_scan(const PositivityScanSpec& spec) {
  if (spec.nz < 16 || spec.nt < 16) throw DomainError("positivity_scan: nz and nt must be >= 16");
  if (!(spec.t_max > spec.t_min && spec.t_min >= 0))
    throw DomainError("positivity_scan: need 0 <= t_min < t_max");
  if (!(spec.M >= 0)) throw DomainError("positivity_scan: M must be non-negative");
  const int nb = spec.which == KernelKind::E ? std::max(1, spec.nb) : 1;
  if (!(spec.cone_margin >= 0 && spec.cone_margin < 1)) throw DomainError("positivity_scan: bad margin");

  struct Row {
    std::vector<ScanSample> samples;
    long failed = 0;
  };
  std::vector<Row> rows(static_cast<std::size_t>(spec.nt));

  parallel_for(rows.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const double t = spec.t_min + (spec.t_max - spec.t_min) * double(j + 1) / spec.nt;
      Row& row = rows[j];
      row.samples.reserve(static_cast<std::size_t>(spec.nz * nb));
      for (int l = 0; l < nb; ++l) {
        const double b = t * l / nb;
        const double radius = cone_radius(t, b) * (1 - spec.cone_margin);
        for (int i = 0; i < spec.nz; ++i) {
          const double z = radius * i / (spec.nz - 1);
          try {
            const double v = kernel_eval(spec.which, KernelArg<double>{z, t, b, spec.M});
            if (!std::isfinite(v)) throw NumericalError("non-finite kernel value");
            row.samples.push_back({z, t, b, v});
          } catch (const std::exception&) {
            ++row.failed;
          }
        }
      }
    }
  });

  PositivityReport rep;
  rep.M = spec.M;
  rep.which = spec.which;
  rep.t_min = spec.t_min;
  rep.t_max = spec.t_max;
  rep.nz = spec.nz;
  rep.nt = spec.nt;
  rep.tol_scan = spec.tol_scan;
  rep.min_value = std::numeric_limits<double>::infinity();
  rep.max_value = -std::numeric_limits<double>::infinity();
  for (const Row& row : rows) {
    rep.n_failed += row.failed;
    for (const ScanSample& s : row.samples) {
      ++rep.n_points;
      if (s.value < rep.min_value) {
        rep.min_value = s.value;
        rep.argmin = {s.z, s.t, s.b};
      }
      if (s.value > rep.max_value) {
        rep.max_value = s.value;
        rep.argmax = {s.z, s.t, s.b};
      }
      if (spec.keep_samples) rep.samples.push_back(s);
    }
  }
  rep.sign_change = rep.min_value < -spec.tol_scan && rep.max_value > spec.tol_scan;
  return rep;
}

#define KG_INSTANTIATE(S)                                                              \
  template ConeGeometry<S> cone_geometry<S>(S, S, S);                                  \
  template S kernel_E<S>(const KernelArg<S>&);                                         \
  template S kernel_E_swapped<S>(const KernelArg<S>&);                                 \
  template S kernel_K1<S>(S, S, S);                                                    \
  template S kernel_K0<S>(S, S, S);                                                    \
  template S kernel_K0_literal<S>(S, S, S);                                            \
  template S kernel_K0_half_integer<S>(S, S, int, HalfIntegerForm);                    \
  template S kernel_eval<S>(KernelKind, const KernelArg<S>&);

KG_INSTANTIATE(double)
KG_INSTANTIATE(long double)
#undef KG_INSTANTIATE

}  // namespace kg
