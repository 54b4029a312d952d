#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "elastica/config.hpp"
#include "elastica/grid.hpp"
#include "elastica/image.hpp"
#include "elastica/metric.hpp"

namespace elastica {

// Owns the FFT plans and scratch buffers for one grid size. Plans are built
// with deterministic heuristics so repeated runs produce bitwise-identical
// results. Not copyable; one plan per solver instance, reused across calls.
class SpectralPlan {
 public:
  SpectralPlan(int width, int height);
  ~SpectralPlan();
  SpectralPlan(const SpectralPlan&) = delete;
  SpectralPlan& operator=(const SpectralPlan&) = delete;

  int width() const { return width_; }
  int height() const { return height_; }

  // Unnormalized forward DFT of a real field, row-major, frequency (i, j) at
  // index j * width + i with angles z_i = 2 pi i / width, z_j = 2 pi j / height.
  std::vector<std::complex<double>> forward(const ScalarField& f);

  // Normalized inverse DFT; returns the real part. If max_imag is non-null it
  // receives the largest |imaginary part| before truncation, which should be
  // at roundoff level whenever the spectrum has the conjugate symmetry of a
  // real field.
  ScalarField inverse_real(const std::vector<std::complex<double>>& spec,
                           double* max_imag = nullptr);

  // Precomputed angle tables for building multiplier symbols.
  const std::vector<double>& cos_zi() const { return cos_zi_; }
  const std::vector<double>& cos_zj() const { return cos_zj_; }
  const std::vector<double>& sin_zi() const { return sin_zi_; }
  const std::vector<double>& sin_zj() const { return sin_zj_; }

 private:
  struct Impl;
  int width_;
  int height_;
  std::vector<double> cos_zi_, cos_zj_, sin_zi_, sin_zj_;
  std::unique_ptr<Impl> impl_;
};

// Sparse convolution kernel: taps with integer offsets from the origin.
// Offsets wrap periodically when the kernel is applied or embedded.
struct KernelTap {
  int dx = 0;
  int dy = 0;
  double weight = 0.0;
};

class BlurKernel {
 public:
  explicit BlurKernel(std::vector<KernelTap> taps);
  static BlurKernel delta();

  // Text format: first line "rows cols", then rows*cols weights in row-major
  // order. The first entry is the origin tap; entry (r, c) acts at offset
  // (dx = c, dy = r) with periodic wrap.
  static BlurKernel from_file(const std::string& path);

  const std::vector<KernelTap>& taps() const { return taps_; }
  double tap_sum() const;
  bool is_delta() const;  // single tap at the origin with weight exactly 1

  // Kernel written onto a periodic width x height grid (offsets wrapped).
  ScalarField embed(int width, int height) const;

  // DFT of the embedded kernel, cached per grid size.
  const std::vector<std::complex<double>>& response(SpectralPlan& plan) const;

 private:
  std::vector<KernelTap> taps_;
  mutable int cached_w_ = 0, cached_h_ = 0;
  mutable std::vector<std::complex<double>> response_;
};

// Solves gamma1 lambda - c1 grad_plus(div_minus lambda) = w per channel in
// Fourier space, where w is assembled from lambda_n and the frozen
// coefficient c1 - 2 beta tau / sqrt(g) (c1 = max over pixels of
// 2 beta tau / sqrt(g)). With beta = 0 the system reduces to gamma1 lambda =
// gamma1 lambda_n and the input is returned unchanged.
JacobianField solve_lambda_frozen(const JacobianField& lambda_n,
                                  const ScalarField& g, const SolverConfig& cfg,
                                  SpectralPlan& plan);

// Solves (tau I - eta div_minus grad_plus) u = b per channel.
ScalarField solve_helmholtz(const ScalarField& b, double eta, double tau,
                            SpectralPlan& plan, double h = 1.0);

// Solves (tau K^T K - eta div_minus grad_plus) u = b. Throws SolverError if
// the symbol vanishes at some frequency (a kernel that kills the constant
// mode makes the problem singular at DC).
ScalarField solve_helmholtz_deblur(const ScalarField& b,
                                   const BlurKernel& kernel, double eta,
                                   double tau, SpectralPlan& plan,
                                   double h = 1.0);

// Periodic convolution of every channel with the kernel (adjoint = true uses
// the conjugate response, i.e. correlation). The identity kernel is applied
// exactly, bypassing the transforms.
MultiChannelImage convolve_periodic(const MultiChannelImage& img,
                                    const BlurKernel& kernel, bool adjoint,
                                    SpectralPlan& plan);

// Least-squares potential recovery: solves div_minus grad_plus u_k =
// div_minus q_k with the mean of each channel pinned to the mean of f_k.
MultiChannelImage reconstruct_from_gradient(const JacobianField& q,
                                            const MultiChannelImage& f,
                                            SpectralPlan& plan, double h = 1.0);

}  // namespace elastica
