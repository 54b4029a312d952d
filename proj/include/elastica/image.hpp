#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "elastica/grid.hpp"

namespace elastica {

// Planar multi-channel image with real-valued samples. Channel c occupies the
// contiguous block data[c * width * height .. (c + 1) * width * height).
// Nominal range is [0, 1] but values are not clamped until quantization.
struct MultiChannelImage {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<double> data;

  MultiChannelImage() = default;
  MultiChannelImage(int w, int h, int d, double fill = 0.0)
      : width(w),
        height(h),
        channels(d),
        data(static_cast<std::size_t>(w) * h * d, fill) {}

  std::size_t plane_size() const {
    return static_cast<std::size_t>(width) * height;
  }
  double& at(int c, int x, int y) {
    return data[c * plane_size() + static_cast<std::size_t>(y) * width + x];
  }
  double at(int c, int x, int y) const {
    return data[c * plane_size() + static_cast<std::size_t>(y) * width + x];
  }
  bool same_shape(const MultiChannelImage& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }

  ScalarField channel(int c) const {
    ScalarField out(width, height);
    const double* src = data.data() + c * plane_size();
    std::copy(src, src + plane_size(), out.v.begin());
    return out;
  }
  void set_channel(int c, const ScalarField& f) {
    std::copy(f.v.begin(), f.v.end(), data.begin() + c * plane_size());
  }
};

}  // namespace elastica
