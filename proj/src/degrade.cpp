#include "elastica/degrade.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "elastica/philox.hpp"

namespace elastica {

namespace {
// Distinct counter tags keep the normal and Poisson streams of one seed from
// reusing the same Philox blocks.
constexpr std::uint32_t kNormalTag = 0x4e6f726du;
constexpr std::uint32_t kPoissonTag = 0x506f6973u;

double normal_from_pair(const std::array<double, 2>& u) {
  return std::sqrt(-2.0 * std::log(u[0])) * std::cos(2.0 * M_PI * u[1]);
}
}  // namespace

double normal_sample(std::uint64_t seed, std::uint64_t index) {
  return normal_from_pair(uniform_pair(seed, index, kNormalTag));
}

std::uint64_t poisson_sample(std::uint64_t seed, std::uint64_t index,
                             double rate) {
  if (!(rate > 0.0)) return 0;
  const auto u = uniform_pair(seed, index, kPoissonTag);
  if (rate < 30.0) {
    // CDF inversion. The cap only guards against u landing in the float
    // rounding tail where the CDF no longer accumulates.
    double p = std::exp(-rate);
    double cdf = p;
    std::uint64_t k = 0;
    while (u[0] > cdf && k < 2000) {
      ++k;
      p *= rate / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }
  // Normal approximation with continuity correction.
  const double z = normal_from_pair(u);
  const double x = std::floor(rate + std::sqrt(rate) * z + 0.5);
  return x < 0.0 ? 0 : static_cast<std::uint64_t>(x);
}

MultiChannelImage add_gaussian(const MultiChannelImage& img, double sd,
                               std::uint64_t seed) {
  if (!(sd >= 0.0) || !std::isfinite(sd)) {
    throw std::invalid_argument("add_gaussian: sd must be finite and >= 0");
  }
  if (sd == 0.0) return img;
  MultiChannelImage out = img;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] += sd * normal_sample(seed, i);
  }
  return out;
}

MultiChannelImage add_poisson(const MultiChannelImage& img, double photons,
                              std::uint64_t seed) {
  if (!(photons > 0.0) || !std::isfinite(photons)) {
    throw std::invalid_argument("add_poisson: photons must be finite and > 0");
  }
  MultiChannelImage out = img;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    const double rate = std::max(out.data[i], 0.0) * photons;
    out.data[i] =
        static_cast<double>(poisson_sample(seed, i, rate)) / photons;
  }
  return out;
}

BlurKernel make_box_kernel(int width, int height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("make_box_kernel: size must be >= 1");
  }
  std::vector<KernelTap> taps;
  taps.reserve(static_cast<std::size_t>(width) * height);
  const double w = 1.0 / (static_cast<double>(width) * height);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      taps.push_back({c - width / 2, r - height / 2, w});
    }
  }
  return BlurKernel(std::move(taps));
}

BlurKernel make_gaussian_kernel(double sigma, int radius) {
  if (!(sigma > 0.0) || radius < 0) {
    throw std::invalid_argument(
        "make_gaussian_kernel: sigma must be > 0 and radius >= 0");
  }
  std::vector<KernelTap> taps;
  double sum = 0.0;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      const double w =
          std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      taps.push_back({dx, dy, w});
      sum += w;
    }
  }
  for (auto& t : taps) t.weight /= sum;
  return BlurKernel(std::move(taps));
}

BlurKernel make_motion_kernel(int length, double angle_rad) {
  if (length < 1) {
    throw std::invalid_argument("make_motion_kernel: length must be >= 1");
  }
  // Unit-spaced samples along the direction, snapped to the nearest pixel;
  // coincident samples merge.
  std::map<std::pair<int, int>, double> acc;
  const double w = 1.0 / length;
  for (int t = 0; t < length; ++t) {
    const int dx = static_cast<int>(std::llround(t * std::cos(angle_rad)));
    const int dy = static_cast<int>(std::llround(t * std::sin(angle_rad)));
    acc[{dx, dy}] += w;
  }
  std::vector<KernelTap> taps;
  taps.reserve(acc.size());
  for (const auto& [off, weight] : acc) {
    taps.push_back({off.first, off.second, weight});
  }
  return BlurKernel(std::move(taps));
}

MultiChannelImage NoiseSpec::apply(const MultiChannelImage& img) const {
  switch (kind) {
    case NoiseKind::gaussian:
      return add_gaussian(img, sd, seed);
    case NoiseKind::poisson:
      return add_poisson(img, photons, seed);
    case NoiseKind::none:
    default:
      return img;
  }
}

}  // namespace elastica
