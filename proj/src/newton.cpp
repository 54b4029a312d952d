#include "elastica/newton.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "elastica/errors.hpp"

namespace elastica {

namespace {

struct LocalMetric {
  double g11, g12, g22, m;
};

// q holds (q_11, q_12, q_21, q_22, ...): two components per channel.
LocalMetric local_metric(std::span<const double> q, double alpha) {
  LocalMetric lm{alpha, 0.0, alpha, 0.0};
  for (std::size_t k = 0; k + 1 < q.size(); k += 2) {
    const double q1 = q[k];
    const double q2 = q[k + 1];
    lm.g11 += q1 * q1;
    lm.g12 += q1 * q2;
    lm.g22 += q2 * q2;
  }
  lm.m = lm.g11 * lm.g22 - lm.g12 * lm.g12;
  return lm;
}

}  // namespace

double e1_value(std::span<const double> q, std::span<const double> p,
                double s1, double s2, double tau, double alpha, double beta) {
  const LocalMetric lm = local_metric(q, alpha);
  if (!(lm.m > 0.0)) {
    throw SolverError("e1_value: non-positive metric determinant");
  }
  double quad = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double d = q[i] - p[i];
    quad += d * d;
  }
  const double sqrt_m = std::sqrt(lm.m);
  return quad / (2.0 * tau) + s1 * sqrt_m + beta * s2 / sqrt_m;
}

void e1_derivatives(std::span<const double> q, std::span<const double> p,
                    double s1, double s2, double tau, double alpha,
                    double beta, std::span<double> grad,
                    std::span<double> hess) {
  const LocalMetric lm = local_metric(q, alpha);
  if (!(lm.m > 0.0)) {
    throw SolverError("e1_derivatives: non-positive metric determinant");
  }
  const double sqrt_m = std::sqrt(lm.m);
  // phi(m) = s1 m^{1/2} + beta s2 m^{-1/2}
  const double dphi = 0.5 * s1 / sqrt_m - 0.5 * beta * s2 / (lm.m * sqrt_m);
  const double ddphi = -0.25 * s1 / (lm.m * sqrt_m) +
                       0.75 * beta * s2 / (lm.m * lm.m * sqrt_m);
  const double inv_tau = 1.0 / tau;
  const std::size_t d = q.size() / 2;
  for (std::size_t k = 0; k < d; ++k) {
    const double q1 = q[2 * k];
    const double q2 = q[2 * k + 1];
    const double dm1 = 2.0 * lm.g22 * q1 - 2.0 * lm.g12 * q2;
    const double dm2 = 2.0 * lm.g11 * q2 - 2.0 * lm.g12 * q1;
    const double ddm1 = 2.0 * lm.g22 - 2.0 * q2 * q2;
    const double ddm2 = 2.0 * lm.g11 - 2.0 * q1 * q1;
    grad[2 * k] = (q1 - p[2 * k]) * inv_tau + dphi * dm1;
    grad[2 * k + 1] = (q2 - p[2 * k + 1]) * inv_tau + dphi * dm2;
    hess[2 * k] = inv_tau + dphi * ddm1 + ddphi * dm1 * dm1;
    hess[2 * k + 1] = inv_tau + dphi * ddm2 + ddphi * dm2 * dm2;
  }
}

JacobianField solve_p_step1(const JacobianField& p_prev,
                            const JacobianField& lambda_prev,
                            const SolverConfig& cfg,
                            const NewtonSettings& settings) {
  const int d = p_prev.channels;
  const std::size_t n = p_prev.plane_size();

  // Squared curvature source, frozen for the whole step:
  // s2 = sum_k (div_minus lambda_k)^2.
  std::vector<double> s2(n, 0.0);
  for (int k = 0; k < d; ++k) {
    const ScalarField dl = div_minus(lambda_prev.channel(k), cfg.h);
    for (std::size_t px = 0; px < n; ++px) s2[px] += dl.v[px] * dl.v[px];
  }

  JacobianField out = p_prev;
  const double s1 = 1.0;
  const double fallback_curvature = 1.0 / cfg.tau;
  std::vector<double> q(2 * d), p(2 * d), grad(2 * d), hess(2 * d);

  for (std::size_t px = 0; px < n; ++px) {
    for (int k = 0; k < d; ++k) {
      p[2 * k] = p_prev.at(k, 0, px);
      p[2 * k + 1] = p_prev.at(k, 1, px);
    }
    q = p;  // warm start at the previous iterate

    bool converged = false;
    for (int it = 0; it < settings.max_iters; ++it) {
      e1_derivatives(q, p, s1, s2[px], cfg.tau, cfg.alpha, cfg.beta, grad,
                     hess);
      double max_delta = 0.0;
      for (int i = 0; i < 2 * d; ++i) {
        double curvature = hess[i];
        if (!(curvature >= settings.hessian_floor)) {
          curvature = fallback_curvature;
        }
        const double delta = grad[i] / curvature;
        q[i] -= delta;
        max_delta = std::max(max_delta, std::abs(delta));
      }
      if (!std::isfinite(max_delta)) {
        const int x = static_cast<int>(px % p_prev.width);
        const int y = static_cast<int>(px / p_prev.width);
        throw SolverError("solve_p_step1: non-finite update at pixel (" +
                          std::to_string(x) + ", " + std::to_string(y) + ")");
      }
      if (max_delta < settings.tol) {
        converged = true;
        break;
      }
    }
    if (!converged && !settings.accept_nonconverged) {
      const int x = static_cast<int>(px % p_prev.width);
      const int y = static_cast<int>(px / p_prev.width);
      throw SolverError("solve_p_step1: Newton iteration did not reach tol " +
                        std::to_string(settings.tol) + " within " +
                        std::to_string(settings.max_iters) +
                        " iterations at pixel (" + std::to_string(x) + ", " +
                        std::to_string(y) + ")");
    }
    for (int k = 0; k < d; ++k) {
      out.at(k, 0, px) = q[2 * k];
      out.at(k, 1, px) = q[2 * k + 1];
    }
  }
  return out;
}

}  // namespace elastica
