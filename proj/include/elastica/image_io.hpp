#pragma once

#include <string>

#include "elastica/errors.hpp"
#include "elastica/image.hpp"

namespace elastica {

// Loads a PNG (8- or 16-bit, grayscale or RGB) or binary PNM (P5/P6) file.
// Integer samples are mapped to [0, 1] by value / (2^bits - 1). Images with
// an alpha channel are rejected with IoErrorCode::alpha_channel; palette
// images and other exotic layouts with unsupported_format; missing or
// truncated files with unreadable.
MultiChannelImage load_image(const std::string& path);

// Saves as 8-bit PNG (.png), PGM (.pgm, 1 channel) or PPM (.ppm, 3 channels),
// chosen by file extension. Samples are clamped to [0, 1] and quantized by
// round-half-away-from-zero to 255 levels, so save/load/save round-trips are
// exact after the first quantization.
void save_image(const MultiChannelImage& img, const std::string& path);

}  // namespace elastica
