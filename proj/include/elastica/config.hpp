#pragma once

#include <stdexcept>
#include <string>

namespace elastica {

// Settings for the pointwise Newton solve in the first fractional step.
struct NewtonSettings {
  double tol = 1e-6;          // stop when the largest coordinate update is below this
  int max_iters = 50;
  double hessian_floor = 1e-8;  // below this the curvature is replaced by 1/tau
  bool accept_nonconverged = false;  // keep the last iterate instead of throwing
};

enum class StopNorm { l2, linf };
enum class InitMode { input, zeros };

// Parameters of the restoration model and of the operator-splitting scheme.
struct SolverConfig {
  double alpha = 0.01;   // metric regularization; keeps det G >= alpha^2
  double beta = 0.005;   // weight of the squared-curvature term
  double eta = 0.5;      // fidelity weight (larger = weaker fidelity)
  double tau = 0.05;     // artificial time step
  double gamma1 = 1.0;   // coupling weight for the q = grad u constraint
  double gamma2 = 3.0;   // metric relaxation rate; blend factor exp(-gamma2 tau / 3)
  double h = 1.0;        // grid spacing
  double stop_tol = 1e-2;
  StopNorm stop_norm = StopNorm::l2;
  int max_outer_iters = 500;
  InitMode init = InitMode::input;
  NewtonSettings newton;

  void validate() const {
    auto fail = [](const std::string& what) {
      throw std::invalid_argument("invalid solver configuration: " + what);
    };
    if (!(alpha > 0.0)) fail("alpha must be > 0");
    if (!(beta >= 0.0)) fail("beta must be >= 0");
    if (!(eta > 0.0)) fail("eta must be > 0");
    if (!(tau > 0.0)) fail("tau must be > 0");
    if (!(gamma1 > 0.0)) fail("gamma1 must be > 0");
    if (!(gamma2 >= 0.0)) fail("gamma2 must be >= 0");
    if (!(h > 0.0)) fail("h must be > 0");
    if (!(stop_tol > 0.0)) fail("stop_tol must be > 0");
    if (max_outer_iters < 1) fail("max_outer_iters must be >= 1");
    if (!(newton.tol > 0.0)) fail("newton.tol must be > 0");
    if (newton.max_iters < 1) fail("newton.max_iters must be >= 1");
    if (!(newton.hessian_floor > 0.0)) fail("newton.hessian_floor must be > 0");
  }
};

}  // namespace elastica
