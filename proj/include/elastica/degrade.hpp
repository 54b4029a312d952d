#pragma once

#include <cstdint>

#include "elastica/image.hpp"
#include "elastica/spectral.hpp"

namespace elastica {

// Standard normal deviate for sample `index` of the stream keyed by `seed`
// (Box-Muller over counter-based uniforms).
double normal_sample(std::uint64_t seed, std::uint64_t index);

// Poisson deviate with the given rate for sample `index`. Uses CDF inversion
// for small rates and a continuity-corrected normal approximation for
// rate >= 30. Non-positive rates yield 0.
std::uint64_t poisson_sample(std::uint64_t seed, std::uint64_t index,
                             double rate);

// out = in + sd * N(0,1), independent per sample, no clamping. sd = 0 returns
// the input bit-for-bit.
MultiChannelImage add_gaussian(const MultiChannelImage& img, double sd,
                               std::uint64_t seed);

// out = Poisson(max(v, 0) * photons) / photons per sample.
MultiChannelImage add_poisson(const MultiChannelImage& img, double photons,
                              std::uint64_t seed);

// Kernel constructors for the degradation pipeline. All weights sum to 1.
BlurKernel make_box_kernel(int width, int height);
BlurKernel make_gaussian_kernel(double sigma, int radius);
// `length` unit-spaced taps along direction `angle_rad` (measured from the
// first axis toward the second), rounded to the nearest pixel; coincident
// taps merge.
BlurKernel make_motion_kernel(int length, double angle_rad);

enum class NoiseKind { none, gaussian, poisson };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::none;
  double sd = 0.0;        // gaussian standard deviation
  double photons = 0.0;   // poisson photon count per unit intensity
  std::uint64_t seed = 0;

  MultiChannelImage apply(const MultiChannelImage& img) const;
};

}  // namespace elastica
