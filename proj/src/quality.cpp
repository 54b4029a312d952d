#include "elastica/quality.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace elastica {

double psnr(const MultiChannelImage& ref, const MultiChannelImage& test) {
  if (!ref.same_shape(test)) {
    throw std::invalid_argument("psnr: image shapes differ");
  }
  if (ref.data.empty()) {
    throw std::invalid_argument("psnr: empty image");
  }
  double mse = 0.0;
  for (std::size_t i = 0; i < ref.data.size(); ++i) {
    const double d = ref.data[i] - test.data[i];
    mse += d * d;
  }
  mse /= static_cast<double>(ref.data.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

double ssim(const MultiChannelImage& ref, const MultiChannelImage& test) {
  if (!ref.same_shape(test)) {
    throw std::invalid_argument("ssim: image shapes differ");
  }
  constexpr int kRadius = 5;  // 11x11 window
  constexpr double kSigma = 1.5;
  constexpr double kC1 = 0.01 * 0.01;  // (K1 L)^2, L = 1
  constexpr double kC2 = 0.03 * 0.03;  // (K2 L)^2
  if (ref.width < 2 * kRadius + 1 || ref.height < 2 * kRadius + 1) {
    throw std::invalid_argument("ssim: image smaller than the 11x11 window");
  }

  double window[2 * kRadius + 1][2 * kRadius + 1];
  double wsum = 0.0;
  for (int dy = -kRadius; dy <= kRadius; ++dy) {
    for (int dx = -kRadius; dx <= kRadius; ++dx) {
      const double w =
          std::exp(-(dx * dx + dy * dy) / (2.0 * kSigma * kSigma));
      window[dy + kRadius][dx + kRadius] = w;
      wsum += w;
    }
  }
  for (auto& row : window) {
    for (auto& w : row) w /= wsum;
  }

  const int W = ref.width, H = ref.height;
  double channel_mean_sum = 0.0;
  for (int c = 0; c < ref.channels; ++c) {
    double score_sum = 0.0;
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        double ma = 0.0, mb = 0.0, maa = 0.0, mbb = 0.0, mab = 0.0;
        for (int dy = -kRadius; dy <= kRadius; ++dy) {
          int yy = y + dy;
          if (yy < 0) yy += H;
          if (yy >= H) yy -= H;
          for (int dx = -kRadius; dx <= kRadius; ++dx) {
            int xx = x + dx;
            if (xx < 0) xx += W;
            if (xx >= W) xx -= W;
            const double w = window[dy + kRadius][dx + kRadius];
            const double a = ref.at(c, xx, yy);
            const double b = test.at(c, xx, yy);
            ma += w * a;
            mb += w * b;
            maa += w * a * a;
            mbb += w * b * b;
            mab += w * a * b;
          }
        }
        const double va = maa - ma * ma;
        const double vb = mbb - mb * mb;
        const double cov = mab - ma * mb;
        const double num = (2.0 * ma * mb + kC1) * (2.0 * cov + kC2);
        const double den = (ma * ma + mb * mb + kC1) * (va + vb + kC2);
        score_sum += num / den;
      }
    }
    channel_mean_sum += score_sum / (static_cast<double>(W) * H);
  }
  return channel_mean_sum / ref.channels;
}

}  // namespace elastica
