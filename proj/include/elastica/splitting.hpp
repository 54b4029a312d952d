#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "elastica/config.hpp"
#include "elastica/image.hpp"
#include "elastica/metric.hpp"
#include "elastica/spectral.hpp"

namespace elastica {

// One row of the convergence trace. update_norm is NaN on the initial row.
struct TraceRow {
  int iter = 0;
  double energy = 0.0;
  double update_norm = 0.0;
};

// Iterate of the splitting scheme: primal image u, per-channel gradients p,
// auxiliary momenta lambda, and the relaxed metric G.
struct SolverState {
  MultiChannelImage u;
  JacobianField p;
  JacobianField lambda;
  MetricField G;
  int iter = 0;
  std::vector<TraceRow> trace;
};

struct RunResult {
  MultiChannelImage u;
  std::vector<TraceRow> trace;
  bool converged = false;
  int iterations = 0;
};

using IterationObserver = std::function<void(const SolverState&)>;

// u from f (or zeros), p = grad_plus u, G = metric of p, lambda = mu of p.
SolverState initialize(const MultiChannelImage& f, const SolverConfig& cfg);

// Relaxation toward the metric induced by q:
//   G <- w G_old + (1 - w) M(q),  w = exp(-gamma2 tau / 3).
// Convex combination of SPD tensors, so the result stays SPD.
MetricField metric_blend(const MetricField& G_old, const JacobianField& q,
                         const SolverConfig& cfg);

// Fractional step 1: pointwise Newton update of p (sources frozen from
// lambda), metric blend, then the frozen-coefficient lambda solve.
void step1(SolverState& state, const SolverConfig& cfg, SpectralPlan& plan);

// Fractional step 2: pointwise 2x2 solve coupling lambda and p under the
// current metric, then metric blend.
void step2(SolverState& state, const SolverConfig& cfg);

// Fractional step 3: per-channel Helmholtz solve for u with right-hand side
// -eta div_minus p_k + tau f_k, then p = grad_plus u and metric blend.
// lambda is untouched. The deblurring variant passes the kernel and the
// precomposed fidelity image (adjoint-filtered data).
void step3(SolverState& state, const MultiChannelImage& fidelity_rhs,
           const SolverConfig& cfg, SpectralPlan& plan,
           const BlurKernel* kernel = nullptr);

// Full denoising solve. The observer, if given, runs after every outer
// iteration with the current state (its trace already extended).
RunResult run(const MultiChannelImage& f, const SolverConfig& cfg,
              const IterationObserver& observer = nullptr);

// Deblurring solve: fidelity couples through the blur operator. A delta
// kernel reproduces run() exactly.
RunResult run_deblur(const MultiChannelImage& f, const BlurKernel& kernel,
                     const SolverConfig& cfg,
                     const IterationObserver& observer = nullptr);

// Writes the trace as CSV: a comment line stating the reported energy, a
// header, then one row per iteration with >= 12 significant digits.
void write_trace(std::ostream& os, const std::vector<TraceRow>& trace,
                 bool deblur);

}  // namespace elastica
