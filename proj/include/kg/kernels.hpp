#pragma once

// Kernels E, K0, K1 of the integral transform for the Klein-Gordon operator
// u_tt - e^{-2t} Laplacian u - M^2 u in de Sitter space-time, and the
// numerical checks built on them (integral identities, positivity scans).

#include <string>
#include <vector>

namespace kg {

/// Evaluation point of a kernel: spatial separation z = |x - x0|, time t,
/// source time b = t0 (zero for K0 and K1) and mass parameter M.
template <typename Scalar>
struct KernelArg {
  Scalar z{};
  Scalar t{};
  Scalar b{};
  Scalar M{};
};

enum class KernelKind { E, K0, K1 };

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& name);

/// Geometry of the curved light cone for the pair (t0 = b, t):
///   D = (e^{-b} - e^{-t})^2 - z^2,  S = (e^{-b} + e^{-t})^2 - z^2,
///   zeta = D / S  and  1 - zeta = 4 e^{-b} e^{-t} / S,
/// all formed without subtractive cancellation.
template <typename Scalar>
struct ConeGeometry {
  Scalar radius{};  ///< e^{-b} - e^{-t}
  Scalar diff_sq{};
  Scalar sum_sq{};
  Scalar zeta{};
  Scalar one_minus_zeta{};
};

/// Throws DomainError when b is outside [0, t] or z outside [0, radius].
template <typename Scalar>
ConeGeometry<Scalar> cone_geometry(Scalar z, Scalar t, Scalar b);

/// Cone radius e^{-b} - e^{-t}; phi(t) = 1 - e^{-t} for b = 0.
double cone_radius(double t, double b = 0.0);

template <typename Scalar>
Scalar kernel_E(const KernelArg<Scalar>& arg);

/// The E expression with the roles of t and b exchanged.  The formula is
/// symmetric in the two times, so this equals kernel_E(arg).
template <typename Scalar>
Scalar kernel_E_swapped(const KernelArg<Scalar>& arg);

/// K1(z,t;M) = E(z,t;0,0;M).
template <typename Scalar>
Scalar kernel_K1(Scalar z, Scalar t, Scalar M);

/// K0(z,t;M) = -dE/db at b = 0, on the closed domain 0 <= z <= 1 - e^{-t}.
///
/// Evaluated as 4^{-M} e^{Mt} S^{M-1/2} [ -1/2 + (A1 G1 + A2 G2)/S ] where
/// G = (F - 1)/zeta for the two hypergeometric factors of the two-term
/// formula.  The literal form divides the bracket by D, which vanishes on
/// the cone; the bracket equals -D/2 + zeta (A1 G1 + A2 G2), so the quotient
/// is regular there.
template <typename Scalar>
Scalar kernel_K0(Scalar z, Scalar t, Scalar M);

/// The two-term K0 formula evaluated literally, bracket divided by D.
/// Throws DomainError on the cone where D = 0.
template <typename Scalar>
Scalar kernel_K0_literal(Scalar z, Scalar t, Scalar M);

enum class HalfIntegerForm {
  literal,   ///< the closed form with unscaled cone factors
  corrected  ///< the same expression with e^{t}-scaled cone factors
};

/// K0(z,t; k + 1/2) through the polynomials F(-k,-k;1;.) and F(1-k,1-k;2;.).
///
/// The literal form does not reduce to -e^{t/2}/4 at k = 0 and
/// disagrees with kernel_K0 for every k checked; `literal` reproduces it
/// as a regression fixture.  `corrected` replaces (1+e^t)^2 - z^2 by (1+e^t)^2 - z^2 e^{2t}
/// and multiplies by e^{-4t}, which agrees with kernel_K0.
template <typename Scalar>
Scalar kernel_K0_half_integer(Scalar z, Scalar t, int k, HalfIntegerForm form);

template <typename Scalar>
Scalar kernel_eval(KernelKind kind, const KernelArg<Scalar>& arg);

/// sinh(M x)/M with the M -> 0 limit x.
double sinh_over_m(double M, double x);

struct IdentityResiduals {
  double res_E = 0;   ///< |int_0^{e^-b - e^-t} E dr - sinh(M(t-b))/(2M)|
  double res_K1 = 0;  ///< |2 int_0^{phi} K1 dr - sinh(Mt)/M|
  double res_K0 = 0;  ///< |e^{t/2} + 2 int_0^{phi} K0 dr - cosh(Mt)|
  double quad_error = 0;
  bool converged = true;
};

IdentityResiduals verify_kernel_identities(double t, double b, double M, double quad_tol);

struct ScanPoint {
  double z = 0;
  double t = 0;
  double b = 0;
};

struct PositivityScanSpec {
  double M = 0;
  double t_min = 0;  ///< exclusive lower bound of the t grid
  double t_max = 1;
  int nz = 64;
  int nt = 64;
  KernelKind which = KernelKind::K0;
  int nb = 4;  ///< source-time fractions b = t*l/nb, E only
  double tol_scan = 1e-10;
  double cone_margin = 1e-9;  ///< z stops at (1 - margin) * cone radius
  bool keep_samples = false;
};

struct ScanSample {
  double z, t, b, value;
};

struct PositivityReport {
  double M = 0;
  KernelKind which = KernelKind::K0;
  double t_min = 0;
  double t_max = 0;
  int nz = 0;
  int nt = 0;
  double tol_scan = 0;
  double min_value = 0;
  ScanPoint argmin;
  double max_value = 0;
  ScanPoint argmax;
  bool sign_change = false;
  long n_points = 0;
  long n_failed = 0;
  std::vector<ScanSample> samples;  ///< filled when keep_samples is set
};

PositivityReport positivity_scan(const PositivityScanSpec& spec);

}  // namespace kg
