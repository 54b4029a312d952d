#pragma once

#include <span>

#include "elastica/config.hpp"
#include "elastica/metric.hpp"

namespace elastica {

// Pointwise objective of the first fractional step at one pixel:
//   E1(q) = (1 / (2 tau)) |q - p|^2 + s1 sqrt(m(q)) + beta s2 / sqrt(m(q)),
// with m(q) = det(alpha I + sum_k q_k q_k^T) and q laid out as
// (q_11, q_12, q_21, q_22, ...), two components per channel. s1 is kept as a
// parameter (the scheme uses s1 = 1); s2 is the squared curvature source
// frozen from the previous iterate.
double e1_value(std::span<const double> q, std::span<const double> p,
                double s1, double s2, double tau, double alpha, double beta);

// First and second coordinatewise derivatives of E1 at q. grad and hess must
// each hold q.size() entries; hess receives only the diagonal curvature
// d^2 E1 / d q_kr^2 used by the coordinatewise Newton update.
void e1_derivatives(std::span<const double> q, std::span<const double> p,
                    double s1, double s2, double tau, double alpha,
                    double beta, std::span<double> grad,
                    std::span<double> hess);

// Runs the damped coordinatewise Newton iteration at every pixel, starting
// from q = p_prev, with s2 = sum_k (div_minus lambda_k)^2 frozen from
// lambda_prev. Curvatures below settings.hessian_floor are replaced by
// 1 / tau. Throws SolverError (with pixel coordinates) on non-finite values,
// or on non-convergence unless settings.accept_nonconverged is set.
JacobianField solve_p_step1(const JacobianField& p_prev,
                            const JacobianField& lambda_prev,
                            const SolverConfig& cfg,
                            const NewtonSettings& settings);

}  // namespace elastica
