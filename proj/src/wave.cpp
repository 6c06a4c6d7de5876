#include "kg/wave.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "kg/errors.hpp"

namespace kg {

FieldSampler FieldSampler::radial(const Profile& p) {
  FieldSampler out;
  out.f = [p](const Eigen::Vector3d& x) { return p(x.norm()); };
  out.support_radius = p.support_radius;
  out.smoothness = p.smoothness;
  return out;
}

namespace profiles {

Profile constant(double c) {
  return Profile{[c](double) { return c; }, std::numeric_limits<double>::infinity(), Smoothness::Cinf};
}

Profile bump(double R, double amplitude) {
  if (!(R > 0)) throw DomainError("bump: radius must be positive");
  const double inv = 1 / (R * R);
  return Profile{[=](double s) {
                   const double g = R * R - s * s;
                   if (g <= 0) return 0.0;
                   return amplitude * std::exp(inv - 1 / g);
                 },
                 R, Smoothness::Cinf};
}

Profile gaussian(double width, double amplitude) {
  return Profile{[=](double s) { return amplitude * std::exp(-s * s / (width * width)); },
                 std::numeric_limits<double>::infinity(), Smoothness::Cinf};
}

}  // namespace profiles

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  // Golub-Welsch for the starting values, then Newton on P_n.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1);
    J(k, k - 1) = beta;
    J(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes = es.eigenvalues();
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = nodes(i);
    double dp = 1;
    for (int it = 0; it < 3; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      x -= p1 / dp;
    }
    nodes(i) = x;
    weights(i) = 2 / ((1 - x * x) * dp * dp);
  }
}

SphereRule SphereRule::product(int order) {
  if (order < 2) throw DomainError("SphereRule: order must be at least 2");
  Eigen::VectorXd x, w;
  gauss_legendre(order, x, w);
  const int n_phi = 2 * order;
  SphereRule rule;
  rule.order = order;
  rule.nodes.reserve(static_cast<std::size_t>(order * n_phi));
  rule.weights.reserve(rule.nodes.capacity());
  double total = 0;
  for (int i = 0; i < order; ++i) {
    const double st = std::sqrt(std::max(0.0, 1 - x(i) * x(i)));
    for (int j = 0; j < n_phi; ++j) {
      const double az = 2 * std::numbers::pi * j / n_phi;
      rule.nodes.emplace_back(st * std::cos(az), st * std::sin(az), x(i));
      rule.weights.push_back(w(i) / (2.0 * n_phi));
      total += rule.weights.back();
    }
  }
  for (double& v : rule.weights) v /= total;
  return rule;
}

double dalembert_1d(const Profile& phi, double x, double t) {
  if (!(t >= 0)) throw DomainError("dalembert_1d: t must be non-negative");
  return 0.5 * (phi(x + t) + phi(x - t));
}

double radial_wave_3d(const Profile& phi, double r, double t) {
  if (!(t >= 0) || !(r >= 0)) throw DomainError("radial_wave_3d: r and t must be non-negative");
  if (r > kRadialOrigin) {
    const double d = r - t;
    return ((r + t) * phi(r + t) + d * phi(std::abs(d))) / (2 * r);
  }
  const double h = 1e-5 * std::max(1.0, t);
  const double dphi = (phi(std::abs(t + h)) - phi(std::abs(t - h))) / (2 * h);
  return phi(t) + t * dphi;
}

namespace {

struct MeanPair {
  double mean = 0;
  double radial = 0;  // mean of d/dt phi(x + t w)
};

MeanPair sphere_means(const FieldSampler& phi, const Eigen::Vector3d& x, double t,
                      const SphereRule& rule) {
  const double h = 1e-5 * std::max(1.0, t);
  MeanPair m;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const Eigen::Vector3d& w = rule.nodes[k];
    m.mean += rule.weights[k] * phi(x + t * w);
    m.radial += rule.weights[k] * (phi(x + (t + h) * w) - phi(x + (t - h) * w)) / (2 * h);
  }
  return m;
}

}  // namespace

KirchhoffResult kirchhoff_3d(const FieldSampler& phi, const Eigen::Vector3d& x, double t,
                             const SphereRule& rule) {
  if (!(t >= 0)) throw DomainError("kirchhoff_3d: t must be non-negative");
  if (rule.nodes.empty()) throw DomainError("kirchhoff_3d: empty sphere rule");
  const MeanPair fine = sphere_means(phi, x, t, rule);
  const MeanPair coarse = sphere_means(phi, x, t, SphereRule::product(std::max(2, rule.order / 2)));
  KirchhoffResult out;
  out.value_01 = t * fine.mean;
  out.value_10 = fine.mean + t * fine.radial;
  out.est_error = std::max(std::abs(t * (fine.mean - coarse.mean)),
                           std::abs(fine.mean - coarse.mean + t * (fine.radial - coarse.radial)));
  return out;
}

}  // namespace kg
