#include "elastica/splitting.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "elastica/errors.hpp"
#include "elastica/newton.hpp"

namespace elastica {

SolverState initialize(const MultiChannelImage& f, const SolverConfig& cfg) {
  cfg.validate();
  SolverState st;
  st.u = (cfg.init == InitMode::input)
             ? f
             : MultiChannelImage(f.width, f.height, f.channels, 0.0);
  st.p = JacobianField(f.width, f.height, f.channels);
  for (int k = 0; k < f.channels; ++k) {
    st.p.set_channel(k, grad_plus(st.u.channel(k), cfg.h));
  }
  st.G = build_metric(st.p, cfg.alpha);
  st.lambda = mu_from_q(st.p, st.G);
  st.iter = 0;
  return st;
}

MetricField metric_blend(const MetricField& G_old, const JacobianField& q,
                         const SolverConfig& cfg) {
  const MetricField G_new = build_metric(q, cfg.alpha);
  const double w = std::exp(-cfg.gamma2 * cfg.tau / 3.0);
  MetricField out(G_old.width(), G_old.height());
  const std::size_t n = G_old.g11.size();
  for (std::size_t px = 0; px < n; ++px) {
    const double g11 = w * G_old.g11.v[px] + (1.0 - w) * G_new.g11.v[px];
    const double g12 = w * G_old.g12.v[px] + (1.0 - w) * G_new.g12.v[px];
    const double g22 = w * G_old.g22.v[px] + (1.0 - w) * G_new.g22.v[px];
    out.g11.v[px] = g11;
    out.g12.v[px] = g12;
    out.g22.v[px] = g22;
    out.g.v[px] = g11 * g22 - g12 * g12;
  }
  return out;
}

void step1(SolverState& state, const SolverConfig& cfg, SpectralPlan& plan) {
  // The curvature source for the Newton objective comes from lambda of the
  // previous outer iteration, so p must be updated before lambda.
  state.p = solve_p_step1(state.p, state.lambda, cfg, cfg.newton);
  state.G = metric_blend(state.G, state.p, cfg);
  state.lambda = solve_lambda_frozen(state.lambda, state.G.g, cfg, plan);
}

void step2(SolverState& state, const SolverConfig& cfg) {
  const std::size_t n = state.p.plane_size();
  const int d = state.p.channels;
  for (std::size_t px = 0; px < n; ++px) {
    const double g11 = state.G.g11.v[px];
    const double g12 = state.G.g12.v[px];
    const double g22 = state.G.g22.v[px];
    const double g = state.G.g.v[px];
    if (!(g > 0.0)) {
      throw SolverError("step2: non-positive metric determinant");
    }
    const double sqrtg = std::sqrt(g);
    const double A11 = (2.0 * g11 * g11 + 2.0 * g12 * g12) / g + 2.0 * cfg.gamma1;
    const double A12 = (2.0 * g11 * g12 + 2.0 * g12 * g22) / g;
    const double A22 = (2.0 * g12 * g12 + 2.0 * g22 * g22) / g + 2.0 * cfg.gamma1;
    const double detA = A11 * A22 - A12 * A12;
    if (!(detA > 0.0)) {
      throw SolverError("step2: singular pointwise system");
    }
    for (int k = 0; k < d; ++k) {
      const double p1 = state.p.at(k, 0, px);
      const double p2 = state.p.at(k, 1, px);
      const double l1 = state.lambda.at(k, 0, px);
      const double l2 = state.lambda.at(k, 1, px);
      const double b1 =
          (2.0 * g11 * p1 + 2.0 * g12 * p2) / sqrtg + 2.0 * cfg.gamma1 * l1;
      const double b2 =
          (2.0 * g12 * p1 + 2.0 * g22 * p2) / sqrtg + 2.0 * cfg.gamma1 * l2;
      const double nl1 = (A22 * b1 - A12 * b2) / detA;
      const double nl2 = (-A12 * b1 + A11 * b2) / detA;
      state.lambda.at(k, 0, px) = nl1;
      state.lambda.at(k, 1, px) = nl2;
      state.p.at(k, 0, px) = (nl1 * g11 + nl2 * g12) / sqrtg;
      state.p.at(k, 1, px) = (nl1 * g12 + nl2 * g22) / sqrtg;
    }
  }
  state.G = metric_blend(state.G, state.p, cfg);
}

void step3(SolverState& state, const MultiChannelImage& fidelity_rhs,
           const SolverConfig& cfg, SpectralPlan& plan,
           const BlurKernel* kernel) {
  for (int k = 0; k < state.u.channels; ++k) {
    ScalarField b = div_minus(state.p.channel(k), cfg.h);
    const ScalarField fk = fidelity_rhs.channel(k);
    for (std::size_t px = 0; px < b.size(); ++px) {
      b.v[px] = -cfg.eta * b.v[px] + cfg.tau * fk.v[px];
    }
    const ScalarField uk =
        kernel ? solve_helmholtz_deblur(b, *kernel, cfg.eta, cfg.tau, plan,
                                        cfg.h)
               : solve_helmholtz(b, cfg.eta, cfg.tau, plan, cfg.h);
    state.u.set_channel(k, uk);
    state.p.set_channel(k, grad_plus(uk, cfg.h));
  }
  state.G = metric_blend(state.G, state.p, cfg);
  // lambda is carried over unchanged into the next outer iteration.
}

namespace {

double update_norm(const MultiChannelImage& a, const MultiChannelImage& b,
                   StopNorm norm) {
  double acc = 0.0;
  if (norm == StopNorm::l2) {
    for (std::size_t i = 0; i < a.data.size(); ++i) {
      const double d = a.data[i] - b.data[i];
      acc += d * d;
    }
    return std::sqrt(acc);
  }
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    acc = std::max(acc, std::abs(a.data[i] - b.data[i]));
  }
  return acc;
}

RunResult run_impl(const MultiChannelImage& f, const BlurKernel* kernel,
                   const SolverConfig& cfg, const IterationObserver& observer) {
  cfg.validate();
  if (f.width < 1 || f.height < 1 || f.channels < 1) {
    throw std::invalid_argument("run: empty image");
  }
  SpectralPlan plan(f.width, f.height);

  // For deblurring the fidelity enters the u-solve through K^T f, which is
  // constant across iterations.
  const bool blurred = kernel && !kernel->is_delta();
  const MultiChannelImage fidelity_rhs =
      blurred ? convolve_periodic(f, *kernel, true, plan) : f;

  auto objective = [&](const MultiChannelImage& u) {
    if (blurred) {
      const MultiChannelImage Ku = convolve_periodic(u, *kernel, false, plan);
      return energy_regularizer(u, cfg) +
             energy_fidelity(Ku, f, cfg.eta, cfg.h);
    }
    return energy(u, f, cfg);
  };

  SolverState st = initialize(f, cfg);
  st.trace.push_back(
      {0, objective(st.u), std::numeric_limits<double>::quiet_NaN()});

  RunResult res;
  res.converged = false;
  for (int n = 1; n <= cfg.max_outer_iters; ++n) {
    const MultiChannelImage u_prev = st.u;
    step1(st, cfg, plan);
    step2(st, cfg);
    step3(st, fidelity_rhs, cfg, plan, blurred ? kernel : nullptr);
    st.iter = n;
    const double delta = update_norm(st.u, u_prev, cfg.stop_norm);
    st.trace.push_back({n, objective(st.u), delta});
    if (observer) observer(st);
    if (delta <= cfg.stop_tol) {
      res.converged = true;
      break;
    }
  }
  res.u = std::move(st.u);
  res.trace = std::move(st.trace);
  res.iterations = st.iter;
  return res;
}

}  // namespace

RunResult run(const MultiChannelImage& f, const SolverConfig& cfg,
              const IterationObserver& observer) {
  return run_impl(f, nullptr, cfg, observer);
}

RunResult run_deblur(const MultiChannelImage& f, const BlurKernel& kernel,
                     const SolverConfig& cfg,
                     const IterationObserver& observer) {
  return run_impl(f, &kernel, cfg, observer);
}

void write_trace(std::ostream& os, const std::vector<TraceRow>& trace,
                 bool deblur) {
  os << "# energy = sum_px [sqrt(g) + (beta / sqrt(g)) sum_k (div- mu_k)^2] "
        "h^2 + (1/(2 eta)) sum_k_px ("
     << (deblur ? "(K u)_k - f_k" : "u_k - f_k")
     << ")^2 h^2, with q = grad+ u, G = alpha I + sum_k q_k q_k^T, "
        "mu_k = sqrt(g) q_k G^{-1}\n";
  os << "iter,energy,update_norm\n";
  char buf[128];
  for (const auto& row : trace) {
    std::snprintf(buf, sizeof(buf), "%d,%.15g,%.15g\n", row.iter, row.energy,
                  row.update_norm);
    os << buf;
  }
}

}  // namespace elastica
