#include "kg/field.hpp"

#include <cmath>
#include <vector>

namespace kg {

namespace {

template <typename F>
double trapezoid(const Field3D& f, F&& g) {
  const int n = f.n;
  auto w = [n](int i) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; };
  std::vector<double> slab(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    double s = 0;
    for (int j = 0; j < n; ++j) {
      double row = 0;
      for (int i = 0; i < n; ++i) row += w(i) * g(f(i, j, k));
      s += w(j) * row;
    }
    slab[std::size_t(k)] = w(k) * s;
  }
  double total = 0;
  for (double s : slab) total += s;
  return total * f.dx * f.dx * f.dx;
}

}  // namespace

double integrate_box(const Field3D& f) {
  return trapezoid(f, [](double v) { return v; });
}

double integrate_power(const Field3D& f, int p) {
  return trapezoid(f, [p](double v) { return std::pow(v, p); });
}

}  // namespace kg
