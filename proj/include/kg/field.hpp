#pragma once

#include <Eigen/Core>
#include <cstddef>

namespace kg {

/// Scalar field on the uniform n x n x n grid of the unit box, node (i,j,k)
/// at (i dx, j dx, k dx), stored x-fastest.
struct Field3D {
  int n = 0;
  double dx = 0;
  double time = 0;
  double mu2 = 0;
  double lambda = 0;
  Eigen::ArrayXd values;

  Field3D() = default;
  Field3D(int n_, double dx_) : n(n_), dx(dx_), values(Eigen::ArrayXd::Zero(std::size_t(n_) * n_ * n_)) {}

  std::size_t index(int i, int j, int k) const {
    return std::size_t(i) + std::size_t(n) * (std::size_t(j) + std::size_t(n) * std::size_t(k));
  }
  double& operator()(int i, int j, int k) { return values[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return values[index(i, j, k)]; }
  Eigen::Vector3d position(int i, int j, int k) const { return {i * dx, j * dx, k * dx}; }
  std::size_t size() const { return static_cast<std::size_t>(values.size()); }

  bool same_shape(const Field3D& o) const { return n == o.n && dx == o.dx; }
  double max_abs() const { return values.size() ? values.abs().maxCoeff() : 0.0; }
  bool all_finite() const { return values.allFinite(); }
};

/// Trapezoid-rule integral over the box, summed slab by slab in a fixed order.
double integrate_box(const Field3D& f);

/// Trapezoid-rule integral of f^p.
double integrate_power(const Field3D& f, int p);

}  // namespace kg
