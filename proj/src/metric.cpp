#include "elastica/metric.hpp"

#include <cmath>
#include <string>

#include "elastica/errors.hpp"

namespace elastica {

MetricField build_metric(const JacobianField& q, double alpha) {
  MetricField G(q.width, q.height);
  const std::size_t n = q.plane_size();
  for (std::size_t px = 0; px < n; ++px) {
    double a = alpha, b = 0.0, c = alpha;
    for (int k = 0; k < q.channels; ++k) {
      const double q1 = q.at(k, 0, px);
      const double q2 = q.at(k, 1, px);
      a += q1 * q1;
      b += q1 * q2;
      c += q2 * q2;
    }
    G.g11.v[px] = a;
    G.g12.v[px] = b;
    G.g22.v[px] = c;
    G.g.v[px] = a * c - b * b;
  }
  return G;
}

static void require_positive_det(double g, std::size_t px, int width,
                                 const char* where) {
  if (!(g > 0.0)) {
    const int x = static_cast<int>(px % width);
    const int y = static_cast<int>(px / width);
    throw SolverError(std::string(where) +
                      ": non-positive metric determinant at pixel (" +
                      std::to_string(x) + ", " + std::to_string(y) + ")");
  }
}

JacobianField mu_from_q(const JacobianField& q, const MetricField& G) {
  JacobianField mu(q.width, q.height, q.channels);
  const std::size_t n = q.plane_size();
  for (std::size_t px = 0; px < n; ++px) {
    const double g11 = G.g11.v[px], g12 = G.g12.v[px], g22 = G.g22.v[px];
    const double g = G.g.v[px];
    require_positive_det(g, px, q.width, "mu_from_q");
    const double inv_sqrtg = 1.0 / std::sqrt(g);
    for (int k = 0; k < q.channels; ++k) {
      const double q1 = q.at(k, 0, px);
      const double q2 = q.at(k, 1, px);
      mu.at(k, 0, px) = (g22 * q1 - g12 * q2) * inv_sqrtg;
      mu.at(k, 1, px) = (-g12 * q1 + g11 * q2) * inv_sqrtg;
    }
  }
  return mu;
}

JacobianField q_from_mu(const JacobianField& mu, const MetricField& G) {
  JacobianField q(mu.width, mu.height, mu.channels);
  const std::size_t n = mu.plane_size();
  for (std::size_t px = 0; px < n; ++px) {
    const double g11 = G.g11.v[px], g12 = G.g12.v[px], g22 = G.g22.v[px];
    const double g = G.g.v[px];
    require_positive_det(g, px, mu.width, "q_from_mu");
    const double inv_sqrtg = 1.0 / std::sqrt(g);
    for (int k = 0; k < mu.channels; ++k) {
      const double m1 = mu.at(k, 0, px);
      const double m2 = mu.at(k, 1, px);
      q.at(k, 0, px) = (m1 * g11 + m2 * g12) * inv_sqrtg;
      q.at(k, 1, px) = (m1 * g12 + m2 * g22) * inv_sqrtg;
    }
  }
  return q;
}

ScalarField laplace_beltrami(const ScalarField& v, const MetricField& G,
                             double h) {
  const VectorField2 t = grad_plus(v, h);
  VectorField2 w(v.width, v.height);
  const std::size_t n = v.size();
  for (std::size_t px = 0; px < n; ++px) {
    const double g11 = G.g11.v[px], g12 = G.g12.v[px], g22 = G.g22.v[px];
    const double g = G.g.v[px];
    require_positive_det(g, px, v.width, "laplace_beltrami");
    const double inv_sqrtg = 1.0 / std::sqrt(g);
    w.x1.v[px] = (g22 * t.x1.v[px] - g12 * t.x2.v[px]) * inv_sqrtg;
    w.x2.v[px] = (-g12 * t.x1.v[px] + g11 * t.x2.v[px]) * inv_sqrtg;
  }
  ScalarField out = div_minus(w, h);
  for (std::size_t px = 0; px < n; ++px) {
    out.v[px] /= std::sqrt(G.g.v[px]);
  }
  return out;
}

double energy_regularizer(const MultiChannelImage& u, const SolverConfig& cfg) {
  JacobianField q(u.width, u.height, u.channels);
  for (int k = 0; k < u.channels; ++k) {
    q.set_channel(k, grad_plus(u.channel(k), cfg.h));
  }
  const MetricField G = build_metric(q, cfg.alpha);
  const JacobianField mu = mu_from_q(q, G);

  const std::size_t n = q.plane_size();
  std::vector<double> curvature_sq(n, 0.0);
  for (int k = 0; k < u.channels; ++k) {
    const ScalarField d = div_minus(mu.channel(k), cfg.h);
    for (std::size_t px = 0; px < n; ++px) {
      curvature_sq[px] += d.v[px] * d.v[px];
    }
  }

  const double cell = cfg.h * cfg.h;
  double e = 0.0;
  for (std::size_t px = 0; px < n; ++px) {
    const double sqrtg = std::sqrt(G.g.v[px]);
    e += (sqrtg + cfg.beta * curvature_sq[px] / sqrtg) * cell;
  }
  return e;
}

double energy_fidelity(const MultiChannelImage& a, const MultiChannelImage& b,
                       double eta, double h) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    s += d * d;
  }
  return s * h * h / (2.0 * eta);
}

double energy(const MultiChannelImage& u, const MultiChannelImage& f,
              const SolverConfig& cfg) {
  return energy_regularizer(u, cfg) + energy_fidelity(u, f, cfg.eta, cfg.h);
}

}  // namespace elastica
