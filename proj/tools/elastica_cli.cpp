#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "elastica/config.hpp"
#include "elastica/degrade.hpp"
#include "elastica/errors.hpp"
#include "elastica/image_io.hpp"
#include "elastica/quality.hpp"
#include "elastica/splitting.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitIo = 3;

struct RestoreArgs {
  std::string in, out, trace;
  std::string stop_norm = "l2";
  std::string init = "input";
  std::string kernel_path;
  std::string motion;  // "length,angle_degrees"
  elastica::SolverConfig cfg;
};

struct DegradeArgs {
  std::string in, out;
  std::string kernel_path;
  std::string motion;
  double gaussian_sd = -1.0;     // < 0 means not requested
  double poisson_photons = -1.0;
  std::uint64_t seed = 0;
};

struct EvaluateArgs {
  std::string ref, test;
};

void add_solver_flags(CLI::App* sub, RestoreArgs& a) {
  sub->add_option("--in", a.in, "input image (PNG/PGM/PPM)")->required();
  sub->add_option("--out", a.out, "restored output image")->required();
  sub->add_option("--trace", a.trace, "write per-iteration energy CSV here");
  sub->add_option("--alpha", a.cfg.alpha, "space/color ratio of the metric")
      ->capture_default_str();
  sub->add_option("--beta", a.cfg.beta, "squared-curvature weight")
      ->capture_default_str();
  sub->add_option("--eta", a.cfg.eta, "fidelity weight")
      ->capture_default_str();
  sub->add_option("--tau", a.cfg.tau, "artificial time step")
      ->capture_default_str();
  sub->add_option("--gamma1", a.cfg.gamma1, "gradient-coupling weight")
      ->capture_default_str();
  sub->add_option("--gamma2", a.cfg.gamma2, "metric relaxation rate")
      ->capture_default_str();
  sub->add_option("--tol", a.cfg.stop_tol, "stopping tolerance on the update norm")
      ->capture_default_str();
  sub->add_option("--stop-norm", a.stop_norm, "update norm: l2 or linf")
      ->check(CLI::IsMember({"l2", "linf"}))
      ->capture_default_str();
  sub->add_option("--max-iters", a.cfg.max_outer_iters, "outer iteration cap")
      ->capture_default_str();
  sub->add_option("--newton-tol", a.cfg.newton.tol,
                  "pointwise Newton stopping tolerance")
      ->capture_default_str();
  sub->add_option("--init", a.init, "initial image: input or zeros")
      ->check(CLI::IsMember({"input", "zeros"}))
      ->capture_default_str();
}

elastica::BlurKernel parse_kernel(const std::string& kernel_path,
                                  const std::string& motion) {
  if (!kernel_path.empty() && !motion.empty()) {
    throw CLI::ValidationError("--kernel and --motion are mutually exclusive");
  }
  if (!kernel_path.empty()) {
    return elastica::BlurKernel::from_file(kernel_path);
  }
  int length = 0;
  double angle_deg = 0.0;
  if (std::sscanf(motion.c_str(), "%d,%lf", &length, &angle_deg) != 2) {
    throw CLI::ValidationError(
        "--motion expects LENGTH,ANGLE_DEGREES (e.g. 9,30)");
  }
  return elastica::make_motion_kernel(length, angle_deg * M_PI / 180.0);
}

void finish_config(RestoreArgs& a) {
  a.cfg.stop_norm = (a.stop_norm == "linf") ? elastica::StopNorm::linf
                                            : elastica::StopNorm::l2;
  a.cfg.init = (a.init == "zeros") ? elastica::InitMode::zeros
                                   : elastica::InitMode::input;
  a.cfg.validate();
}

int run_restore(RestoreArgs& a, bool deblur) {
  finish_config(a);
  std::optional<elastica::BlurKernel> kernel;
  if (deblur) kernel = parse_kernel(a.kernel_path, a.motion);

  const elastica::MultiChannelImage f = elastica::load_image(a.in);
  const auto log_progress = [](const elastica::SolverState& st) {
    const auto& row = st.trace.back();
    std::fprintf(stderr, "iter=%d energy=%.9g update_norm=%.3g\n", row.iter,
                 row.energy, row.update_norm);
  };
  const elastica::RunResult res =
      deblur ? elastica::run_deblur(f, *kernel, a.cfg, log_progress)
             : elastica::run(f, a.cfg, log_progress);
  if (!res.converged) {
    std::fprintf(stderr,
                 "warning: stopped at the iteration cap (%d) without meeting "
                 "the tolerance\n",
                 a.cfg.max_outer_iters);
  }
  elastica::save_image(res.u, a.out);
  if (!a.trace.empty()) {
    std::ofstream ts(a.trace);
    if (!ts) {
      throw elastica::IoError(elastica::IoErrorCode::write_failure,
                              "cannot open trace file: " + a.trace);
    }
    elastica::write_trace(ts, res.trace, deblur && !kernel->is_delta());
  }
  return kExitOk;
}

int run_degrade(DegradeArgs& a) {
  if (a.gaussian_sd >= 0.0 && a.poisson_photons >= 0.0) {
    throw CLI::ValidationError(
        "--gaussian-sd and --poisson-photons are mutually exclusive");
  }
  elastica::MultiChannelImage img = elastica::load_image(a.in);
  if (!a.kernel_path.empty() || !a.motion.empty()) {
    const elastica::BlurKernel kernel = parse_kernel(a.kernel_path, a.motion);
    elastica::SpectralPlan plan(img.width, img.height);
    img = elastica::convolve_periodic(img, kernel, false, plan);
  }
  // Blur first, then noise: measurement noise enters after the optics.
  elastica::NoiseSpec noise;
  if (a.gaussian_sd >= 0.0) {
    noise.kind = elastica::NoiseKind::gaussian;
    noise.sd = a.gaussian_sd;
  } else if (a.poisson_photons >= 0.0) {
    noise.kind = elastica::NoiseKind::poisson;
    noise.photons = a.poisson_photons;
  }
  noise.seed = a.seed;
  img = noise.apply(img);
  elastica::save_image(img, a.out);
  return kExitOk;
}

int run_evaluate(EvaluateArgs& a) {
  const elastica::MultiChannelImage ref = elastica::load_image(a.ref);
  const elastica::MultiChannelImage test = elastica::load_image(a.test);
  std::printf("psnr_db=%.6g ssim=%.6g\n", elastica::psnr(ref, test),
              elastica::ssim(ref, test));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Variational color-image restoration: surface-geometry (elastica) "
      "regularization with squared-curvature smoothing"};
  app.require_subcommand(1);

  RestoreArgs denoise_args, deblur_args;
  DegradeArgs degrade_args;
  EvaluateArgs evaluate_args;

  CLI::App* denoise =
      app.add_subcommand("denoise", "restore a noisy image");
  add_solver_flags(denoise, denoise_args);

  CLI::App* deblur = app.add_subcommand(
      "deblur", "restore a blurred (and possibly noisy) image");
  add_solver_flags(deblur, deblur_args);
  deblur->add_option("--kernel", deblur_args.kernel_path,
                     "blur kernel file: 'rows cols' then row-major weights");
  deblur->add_option("--motion", deblur_args.motion,
                     "motion kernel LENGTH,ANGLE_DEGREES");

  CLI::App* degrade = app.add_subcommand(
      "degrade", "synthesize a degraded image (blur and/or noise)");
  degrade->add_option("--in", degrade_args.in, "clean input image")
      ->required();
  degrade->add_option("--out", degrade_args.out, "degraded output image")
      ->required();
  degrade->add_option("--kernel", degrade_args.kernel_path,
                      "blur kernel file applied before noise");
  degrade->add_option("--motion", degrade_args.motion,
                      "motion kernel LENGTH,ANGLE_DEGREES applied before noise");
  degrade->add_option("--gaussian-sd", degrade_args.gaussian_sd,
                      "additive Gaussian noise standard deviation");
  degrade->add_option("--poisson-photons", degrade_args.poisson_photons,
                      "Poisson photon count per unit intensity");
  degrade->add_option("--seed", degrade_args.seed, "noise seed")
      ->capture_default_str();

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "print psnr_db and ssim of a pair");
  evaluate->add_option("--ref", evaluate_args.ref, "reference image")
      ->required();
  evaluate->add_option("--test", evaluate_args.test, "image under test")
      ->required();

  try {
    app.parse(argc, argv);
    if (denoise->parsed()) return run_restore(denoise_args, false);
    if (deblur->parsed()) {
      if (deblur_args.kernel_path.empty() && deblur_args.motion.empty()) {
        throw CLI::ValidationError(
            "deblur requires --kernel FILE or --motion LENGTH,ANGLE");
      }
      return run_restore(deblur_args, true);
    }
    if (degrade->parsed()) return run_degrade(degrade_args);
    if (evaluate->parsed()) return run_evaluate(evaluate_args);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const elastica::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const elastica::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}
