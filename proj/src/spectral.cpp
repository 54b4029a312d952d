#include "elastica/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "elastica/errors.hpp"

namespace elastica {

struct SpectralPlan::Impl {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

SpectralPlan::SpectralPlan(int width, int height)
    : width_(width), height_(height), impl_(new Impl) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("SpectralPlan: grid dimensions must be >= 1");
  }
  const std::size_t n = static_cast<std::size_t>(width) * height;
  impl_->in = fftw_alloc_complex(n);
  impl_->out = fftw_alloc_complex(n);
  // FFTW_ESTIMATE picks the plan deterministically (no runtime measurement),
  // which keeps end-to-end runs bitwise reproducible.
  impl_->fwd = fftw_plan_dft_2d(height, width, impl_->in, impl_->out,
                                FFTW_FORWARD, FFTW_ESTIMATE);
  impl_->bwd = fftw_plan_dft_2d(height, width, impl_->in, impl_->out,
                                FFTW_BACKWARD, FFTW_ESTIMATE);
  cos_zi_.resize(width);
  sin_zi_.resize(width);
  for (int i = 0; i < width; ++i) {
    const double z = 2.0 * M_PI * i / width;
    cos_zi_[i] = std::cos(z);
    sin_zi_[i] = std::sin(z);
  }
  cos_zj_.resize(height);
  sin_zj_.resize(height);
  for (int j = 0; j < height; ++j) {
    const double z = 2.0 * M_PI * j / height;
    cos_zj_[j] = std::cos(z);
    sin_zj_[j] = std::sin(z);
  }
}

SpectralPlan::~SpectralPlan() {
  if (impl_) {
    fftw_destroy_plan(impl_->fwd);
    fftw_destroy_plan(impl_->bwd);
    fftw_free(impl_->in);
    fftw_free(impl_->out);
  }
}

std::vector<std::complex<double>> SpectralPlan::forward(const ScalarField& f) {
  const std::size_t n = static_cast<std::size_t>(width_) * height_;
  for (std::size_t i = 0; i < n; ++i) {
    impl_->in[i][0] = f.v[i];
    impl_->in[i][1] = 0.0;
  }
  fftw_execute(impl_->fwd);
  std::vector<std::complex<double>> spec(n);
  for (std::size_t i = 0; i < n; ++i) {
    spec[i] = {impl_->out[i][0], impl_->out[i][1]};
  }
  return spec;
}

ScalarField SpectralPlan::inverse_real(
    const std::vector<std::complex<double>>& spec, double* max_imag) {
  const std::size_t n = static_cast<std::size_t>(width_) * height_;
  for (std::size_t i = 0; i < n; ++i) {
    impl_->in[i][0] = spec[i].real();
    impl_->in[i][1] = spec[i].imag();
  }
  fftw_execute(impl_->bwd);
  ScalarField out(width_, height_);
  const double scale = 1.0 / static_cast<double>(n);
  double imag_peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.v[i] = impl_->out[i][0] * scale;
    imag_peak = std::max(imag_peak, std::abs(impl_->out[i][1] * scale));
  }
  if (max_imag) *max_imag = imag_peak;
  return out;
}

BlurKernel::BlurKernel(std::vector<KernelTap> taps) : taps_(std::move(taps)) {
  for (const auto& t : taps_) {
    if (!std::isfinite(t.weight)) {
      throw std::invalid_argument("BlurKernel: non-finite tap weight");
    }
  }
}

BlurKernel BlurKernel::delta() { return BlurKernel({{0, 0, 1.0}}); }

BlurKernel BlurKernel::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError(IoErrorCode::unreadable, "cannot open kernel file: " + path);
  }
  int rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 1 || cols < 1) {
    throw IoError(IoErrorCode::unsupported_format,
                  "kernel file must start with 'rows cols': " + path);
  }
  std::vector<KernelTap> taps;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double w = 0.0;
      if (!(in >> w)) {
        throw IoError(IoErrorCode::unsupported_format,
                      "kernel file is missing weights: " + path);
      }
      if (w != 0.0) {
        // The first file entry is the origin tap; entry (r, c) acts at
        // offset (dx = c, dy = r), wrapped periodically on the image grid.
        taps.push_back({c, r, w});
      }
    }
  }
  double extra;
  if (in >> extra) {
    throw IoError(IoErrorCode::unsupported_format,
                  "kernel file has trailing data: " + path);
  }
  return BlurKernel(std::move(taps));
}

double BlurKernel::tap_sum() const {
  double s = 0.0;
  for (const auto& t : taps_) s += t.weight;
  return s;
}

bool BlurKernel::is_delta() const {
  return taps_.size() == 1 && taps_[0].dx == 0 && taps_[0].dy == 0 &&
         taps_[0].weight == 1.0;
}

ScalarField BlurKernel::embed(int width, int height) const {
  ScalarField out(width, height);
  for (const auto& t : taps_) {
    const int x = ((t.dx % width) + width) % width;
    const int y = ((t.dy % height) + height) % height;
    out.at(x, y) += t.weight;
  }
  return out;
}

const std::vector<std::complex<double>>& BlurKernel::response(
    SpectralPlan& plan) const {
  if (cached_w_ != plan.width() || cached_h_ != plan.height()) {
    response_ = plan.forward(embed(plan.width(), plan.height()));
    cached_w_ = plan.width();
    cached_h_ = plan.height();
  }
  return response_;
}

JacobianField solve_lambda_frozen(const JacobianField& lambda_n,
                                  const ScalarField& g, const SolverConfig& cfg,
                                  SpectralPlan& plan) {
  if (cfg.beta == 0.0) {
    // c1 = 0 collapses the operator to gamma1 * identity on both sides.
    return lambda_n;
  }
  const std::size_t n = lambda_n.plane_size();
  const double h2 = cfg.h * cfg.h;

  std::vector<double> weight(n);  // 2 beta tau / sqrt(g) per pixel
  double c1 = 0.0;
  for (std::size_t px = 0; px < n; ++px) {
    if (!(g.v[px] > 0.0) || !std::isfinite(g.v[px])) {
      throw SolverError("solve_lambda_frozen: invalid metric determinant");
    }
    weight[px] = 2.0 * cfg.beta * cfg.tau / std::sqrt(g.v[px]);
    c1 = std::max(c1, weight[px]);
  }

  JacobianField out(lambda_n.width, lambda_n.height, lambda_n.channels);
  for (int k = 0; k < lambda_n.channels; ++k) {
    const VectorField2 lam = lambda_n.channel(k);
    ScalarField t = div_minus(lam, cfg.h);
    for (std::size_t px = 0; px < n; ++px) {
      t.v[px] *= c1 - weight[px];
    }
    const ScalarField t1 = forward_diff(t, 1, cfg.h);
    const ScalarField t2 = forward_diff(t, 2, cfg.h);
    ScalarField w1(lambda_n.width, lambda_n.height);
    ScalarField w2(lambda_n.width, lambda_n.height);
    for (std::size_t px = 0; px < n; ++px) {
      w1.v[px] = cfg.gamma1 * lam.x1.v[px] - t1.v[px];
      w2.v[px] = cfg.gamma1 * lam.x2.v[px] - t2.v[px];
    }

    auto W1 = plan.forward(w1);
    auto W2 = plan.forward(w2);
    for (int j = 0; j < plan.height(); ++j) {
      for (int i = 0; i < plan.width(); ++i) {
        const std::size_t idx = static_cast<std::size_t>(j) * plan.width() + i;
        const double a11 =
            cfg.gamma1 + 2.0 * c1 * (1.0 - plan.cos_zi()[i]) / h2;
        const double a22 =
            cfg.gamma1 + 2.0 * c1 * (1.0 - plan.cos_zj()[j]) / h2;
        // Symbol of -c1 d1+ d1- style cross blocks: the forward-difference
        // shift contributes (e^{iz} - 1), the backward one (1 - e^{-iz}).
        const std::complex<double> ei(plan.cos_zi()[i] - 1.0,
                                      plan.sin_zi()[i]);
        const std::complex<double> ej(1.0 - plan.cos_zj()[j],
                                      plan.sin_zj()[j]);
        const std::complex<double> a12 = -c1 * ei * ej / h2;
        const double det = a11 * a22 - std::norm(a12);
        if (!(det > 0.0)) {
          throw SolverError("solve_lambda_frozen: singular symbol at (" +
                            std::to_string(i) + ", " + std::to_string(j) +
                            ")");
        }
        const std::complex<double> b1 = W1[idx];
        const std::complex<double> b2 = W2[idx];
        W1[idx] = (a22 * b1 - a12 * b2) / det;
        W2[idx] = (-std::conj(a12) * b1 + a11 * b2) / det;
      }
    }
    out.set_plane(k, 0, plan.inverse_real(W1));
    out.set_plane(k, 1, plan.inverse_real(W2));
  }
  return out;
}

ScalarField solve_helmholtz(const ScalarField& b, double eta, double tau,
                            SpectralPlan& plan, double h) {
  if (!(eta > 0.0) || !(tau > 0.0)) {
    throw std::invalid_argument("solve_helmholtz: eta and tau must be > 0");
  }
  const double h2 = h * h;
  auto B = plan.forward(b);
  for (int j = 0; j < plan.height(); ++j) {
    for (int i = 0; i < plan.width(); ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * plan.width() + i;
      const double w = tau + eta * (2.0 - 2.0 * plan.cos_zi()[i]) / h2 +
                       eta * (2.0 - 2.0 * plan.cos_zj()[j]) / h2;
      B[idx] /= w;
    }
  }
  return plan.inverse_real(B);
}

ScalarField solve_helmholtz_deblur(const ScalarField& b,
                                   const BlurKernel& kernel, double eta,
                                   double tau, SpectralPlan& plan, double h) {
  if (kernel.is_delta()) {
    return solve_helmholtz(b, eta, tau, plan, h);
  }
  if (!(eta > 0.0) || !(tau > 0.0)) {
    throw std::invalid_argument(
        "solve_helmholtz_deblur: eta and tau must be > 0");
  }
  const double h2 = h * h;
  const auto& K = kernel.response(plan);
  auto B = plan.forward(b);
  const double tiny = 1e-14 * std::max(tau, eta);
  for (int j = 0; j < plan.height(); ++j) {
    for (int i = 0; i < plan.width(); ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * plan.width() + i;
      const double w = tau * std::norm(K[idx]) +
                       eta * (2.0 - 2.0 * plan.cos_zi()[i]) / h2 +
                       eta * (2.0 - 2.0 * plan.cos_zj()[j]) / h2;
      if (!(w > tiny)) {
        throw SolverError(
            "solve_helmholtz_deblur: operator symbol vanishes at frequency (" +
            std::to_string(i) + ", " + std::to_string(j) +
            "); the kernel annihilates this mode");
      }
      B[idx] /= w;
    }
  }
  return plan.inverse_real(B);
}

MultiChannelImage convolve_periodic(const MultiChannelImage& img,
                                    const BlurKernel& kernel, bool adjoint,
                                    SpectralPlan& plan) {
  if (kernel.is_delta()) {
    return img;  // exact identity; keeps delta-kernel paths bit-reproducible
  }
  const auto& K = kernel.response(plan);
  MultiChannelImage out(img.width, img.height, img.channels);
  for (int c = 0; c < img.channels; ++c) {
    auto F = plan.forward(img.channel(c));
    for (std::size_t i = 0; i < F.size(); ++i) {
      F[i] *= adjoint ? std::conj(K[i]) : K[i];
    }
    out.set_channel(c, plan.inverse_real(F));
  }
  return out;
}

MultiChannelImage reconstruct_from_gradient(const JacobianField& q,
                                            const MultiChannelImage& f,
                                            SpectralPlan& plan, double h) {
  const double h2 = h * h;
  MultiChannelImage out(q.width, q.height, q.channels);
  for (int k = 0; k < q.channels; ++k) {
    const ScalarField rhs = div_minus(q.channel(k), h);
    auto R = plan.forward(rhs);
    double dc = 0.0;
    const ScalarField fk = f.channel(k);
    for (double v : fk.v) dc += v;
    for (int j = 0; j < plan.height(); ++j) {
      for (int i = 0; i < plan.width(); ++i) {
        const std::size_t idx = static_cast<std::size_t>(j) * plan.width() + i;
        if (i == 0 && j == 0) {
          R[idx] = dc;  // pin the mean to the mean of f
          continue;
        }
        const double lap = (2.0 * plan.cos_zi()[i] - 2.0 +
                            2.0 * plan.cos_zj()[j] - 2.0) /
                           h2;
        R[idx] /= lap;
      }
    }
    out.set_channel(k, plan.inverse_real(R));
  }
  return out;
}

}  // namespace elastica
