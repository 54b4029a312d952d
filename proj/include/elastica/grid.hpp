#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace elastica {

// Scalar quantity sampled on a periodic M x N grid. width runs along the
// first coordinate (x), height along the second (y). Row-major storage:
// v[y * width + x].
struct ScalarField {
  int width = 0;
  int height = 0;
  std::vector<double> v;

  ScalarField() = default;
  ScalarField(int w, int h, double fill = 0.0)
      : width(w), height(h), v(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int x, int y) { return v[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return v[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const { return v.size(); }
  bool same_shape(const ScalarField& o) const {
    return width == o.width && height == o.height;
  }
};

// Two-component field (one component per spatial direction).
struct VectorField2 {
  ScalarField x1;
  ScalarField x2;

  VectorField2() = default;
  VectorField2(int w, int h) : x1(w, h), x2(w, h) {}
  VectorField2(ScalarField a, ScalarField b)
      : x1(std::move(a)), x2(std::move(b)) {}
};

// Periodic forward difference along axis 1 or 2: (f(next) - f(here)) / h.
ScalarField forward_diff(const ScalarField& f, int axis, double h = 1.0);

// Periodic backward difference along axis 1 or 2: (f(here) - f(prev)) / h.
ScalarField backward_diff(const ScalarField& f, int axis, double h = 1.0);

// Forward gradient: both forward differences stacked.
VectorField2 grad_plus(const ScalarField& f, double h = 1.0);

// Backward divergence, the negative adjoint of grad_plus:
// <grad_plus f, p> = -<f, div_minus p> exactly (up to roundoff).
ScalarField div_minus(const VectorField2& p, double h = 1.0);

// Inner products and norms used by adjointness checks and stopping rules.
double dot(const ScalarField& a, const ScalarField& b);
double dot(const VectorField2& a, const VectorField2& b);

}  // namespace elastica
