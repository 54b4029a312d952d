#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "elastica/config.hpp"
#include "elastica/grid.hpp"
#include "elastica/image.hpp"

namespace elastica {

// Per-channel gradient field: one 2-vector per pixel and channel. Plane
// (k, r) holds component r of channel k, stored contiguously like the image
// planes: data[(k * 2 + r) * width * height + y * width + x].
struct JacobianField {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<double> data;

  JacobianField() = default;
  JacobianField(int w, int h, int d, double fill = 0.0)
      : width(w),
        height(h),
        channels(d),
        data(static_cast<std::size_t>(w) * h * d * 2, fill) {}

  std::size_t plane_size() const {
    return static_cast<std::size_t>(width) * height;
  }
  double& at(int k, int r, std::size_t px) {
    return data[(k * 2 + r) * plane_size() + px];
  }
  double at(int k, int r, std::size_t px) const {
    return data[(k * 2 + r) * plane_size() + px];
  }
  bool same_shape(const JacobianField& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }

  ScalarField plane(int k, int r) const {
    ScalarField out(width, height);
    const double* src = data.data() + (k * 2 + r) * plane_size();
    std::copy(src, src + plane_size(), out.v.begin());
    return out;
  }
  void set_plane(int k, int r, const ScalarField& f) {
    std::copy(f.v.begin(), f.v.end(),
              data.begin() + (k * 2 + r) * plane_size());
  }
  VectorField2 channel(int k) const { return {plane(k, 0), plane(k, 1)}; }
  void set_channel(int k, const VectorField2& p) {
    set_plane(k, 0, p.x1);
    set_plane(k, 1, p.x2);
  }
};

// Symmetric 2x2 metric tensor per pixel plus its cached determinant.
struct MetricField {
  ScalarField g11;
  ScalarField g12;
  ScalarField g22;
  ScalarField g;  // determinant g11 * g22 - g12^2

  MetricField() = default;
  MetricField(int w, int h) : g11(w, h), g12(w, h), g22(w, h), g(w, h) {}
  int width() const { return g11.width; }
  int height() const { return g11.height; }
};

// Metric induced by the graph embedding of the channels:
//   g11 = alpha + sum_k q_k1^2, g12 = sum_k q_k1 q_k2, g22 = alpha + sum_k q_k2^2.
// The determinant satisfies g >= alpha^2 for any real q.
MetricField build_metric(const JacobianField& q, double alpha);

// mu_k = sqrt(g) q_k G^{-1}, written out with the adjugate of G. Throws
// SolverError if the determinant is not strictly positive.
JacobianField mu_from_q(const JacobianField& q, const MetricField& G);

// Inverse map q_k = mu_k G / sqrt(g); round-trips with mu_from_q.
JacobianField q_from_mu(const JacobianField& mu, const MetricField& G);

// Laplace-Beltrami of a scalar with respect to a fixed metric:
//   (1 / sqrt(g)) div_minus( sqrt(g) G^{-1} grad_plus v ).
ScalarField laplace_beltrami(const ScalarField& v, const MetricField& G,
                             double h = 1.0);

// Surface-area plus squared-curvature part of the objective, evaluated
// directly from u: q = grad_plus u, G = build_metric(q), mu = mu_from_q,
//   sum_px [ sqrt(g) + (beta / sqrt(g)) sum_k (div_minus mu_k)^2 ] h^2.
double energy_regularizer(const MultiChannelImage& u, const SolverConfig& cfg);

// (1 / (2 eta)) sum_{k,px} (a_k - b_k)^2 h^2.
double energy_fidelity(const MultiChannelImage& a, const MultiChannelImage& b,
                       double eta, double h);

// Full objective for the denoising problem: regularizer(u) + fidelity(u, f).
double energy(const MultiChannelImage& u, const MultiChannelImage& f,
              const SolverConfig& cfg);

}  // namespace elastica
