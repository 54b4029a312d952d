#pragma once

#include "elastica/image.hpp"

namespace elastica {

// Peak signal-to-noise ratio in dB against peak value 1:
//   10 log10(1 / MSE) over all samples. Identical images give +infinity.
double psnr(const MultiChannelImage& ref, const MultiChannelImage& test);

// Mean structural similarity with the standard 11x11 Gaussian window
// (sigma 1.5, K1 = 0.01, K2 = 0.03, dynamic range 1), windows wrapping
// periodically. Channels are scored independently and averaged.
double ssim(const MultiChannelImage& ref, const MultiChannelImage& test);

}  // namespace elastica
