#include "elastica/grid.hpp"

#include <stdexcept>

namespace elastica {

ScalarField forward_diff(const ScalarField& f, int axis, double h) {
  ScalarField out(f.width, f.height);
  const double inv_h = 1.0 / h;
  if (axis == 1) {
    for (int y = 0; y < f.height; ++y) {
      for (int x = 0; x < f.width; ++x) {
        const int xn = (x + 1 == f.width) ? 0 : x + 1;
        out.at(x, y) = (f.at(xn, y) - f.at(x, y)) * inv_h;
      }
    }
  } else if (axis == 2) {
    for (int y = 0; y < f.height; ++y) {
      const int yn = (y + 1 == f.height) ? 0 : y + 1;
      for (int x = 0; x < f.width; ++x) {
        out.at(x, y) = (f.at(x, yn) - f.at(x, y)) * inv_h;
      }
    }
  } else {
    throw std::invalid_argument("forward_diff: axis must be 1 or 2");
  }
  return out;
}

ScalarField backward_diff(const ScalarField& f, int axis, double h) {
  ScalarField out(f.width, f.height);
  const double inv_h = 1.0 / h;
  if (axis == 1) {
    for (int y = 0; y < f.height; ++y) {
      for (int x = 0; x < f.width; ++x) {
        const int xp = (x == 0) ? f.width - 1 : x - 1;
        out.at(x, y) = (f.at(x, y) - f.at(xp, y)) * inv_h;
      }
    }
  } else if (axis == 2) {
    for (int y = 0; y < f.height; ++y) {
      const int yp = (y == 0) ? f.height - 1 : y - 1;
      for (int x = 0; x < f.width; ++x) {
        out.at(x, y) = (f.at(x, y) - f.at(x, yp)) * inv_h;
      }
    }
  } else {
    throw std::invalid_argument("backward_diff: axis must be 1 or 2");
  }
  return out;
}

VectorField2 grad_plus(const ScalarField& f, double h) {
  VectorField2 out;
  out.x1 = forward_diff(f, 1, h);
  out.x2 = forward_diff(f, 2, h);
  return out;
}

ScalarField div_minus(const VectorField2& p, double h) {
  ScalarField d1 = backward_diff(p.x1, 1, h);
  const ScalarField d2 = backward_diff(p.x2, 2, h);
  for (std::size_t i = 0; i < d1.v.size(); ++i) d1.v[i] += d2.v[i];
  return d1;
}

double dot(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
  return s;
}

double dot(const VectorField2& a, const VectorField2& b) {
  return dot(a.x1, b.x1) + dot(a.x2, b.x2);
}

}  // namespace elastica
