#include "elastica/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

namespace elastica {

namespace {

struct FileCloser {
  std::FILE* fp = nullptr;
  ~FileCloser() {
    if (fp) std::fclose(fp);
  }
};

// --- PNG ---

MultiChannelImage load_png(std::FILE* fp, const std::string& path) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(IoErrorCode::unreadable, "libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(IoErrorCode::unreadable, "corrupt PNG file: " + path);
  }
  png_init_io(png, fp);
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);

  if (color_type == PNG_COLOR_TYPE_GRAY_ALPHA ||
      color_type == PNG_COLOR_TYPE_RGB_ALPHA ||
      png_get_valid(png, info, PNG_INFO_tRNS)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(IoErrorCode::alpha_channel,
                  "PNG has an alpha channel / transparency: " + path);
  }
  if (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_RGB) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(IoErrorCode::unsupported_format,
                  "PNG color type not supported (grayscale or RGB only): " +
                      path);
  }
  if (bit_depth != 8 && bit_depth != 16) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(IoErrorCode::unsupported_format,
                  "PNG bit depth must be 8 or 16: " + path);
  }

  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  const int channels = (color_type == PNG_COLOR_TYPE_RGB) ? 3 : 1;
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  std::vector<unsigned char> pixels(rowbytes * height);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 y = 0; y < height; ++y) {
    rows[y] = pixels.data() + y * rowbytes;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  MultiChannelImage img(static_cast<int>(width), static_cast<int>(height),
                        channels);
  const double maxval = (bit_depth == 16) ? 65535.0 : 255.0;
  for (png_uint_32 y = 0; y < height; ++y) {
    const unsigned char* row = pixels.data() + y * rowbytes;
    for (png_uint_32 x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        unsigned value;
        if (bit_depth == 16) {
          const std::size_t o = (x * channels + c) * 2;
          value = (static_cast<unsigned>(row[o]) << 8) | row[o + 1];
        } else {
          value = row[x * channels + c];
        }
        img.at(c, static_cast<int>(x), static_cast<int>(y)) = value / maxval;
      }
    }
  }
  return img;
}

void save_png(const MultiChannelImage& img,
              const std::vector<unsigned char>& interleaved,
              const std::string& path) {
  FileCloser fc{std::fopen(path.c_str(), "wb")};
  if (!fc.fp) {
    throw IoError(IoErrorCode::write_failure,
                  "cannot open for writing: " + path);
  }
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_write_struct(&png, &info);
    throw IoError(IoErrorCode::write_failure, "libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError(IoErrorCode::write_failure, "PNG write failed: " + path);
  }
  png_init_io(png, fc.fp);
  png_set_IHDR(png, info, img.width, img.height, 8,
               img.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t rowbytes =
      static_cast<std::size_t>(img.width) * img.channels;
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y) {
    rows[y] = const_cast<unsigned char*>(interleaved.data()) + y * rowbytes;
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

// --- PNM (binary P5 / P6) ---

// Reads the next header token, skipping whitespace and '#' comments.
bool pnm_token(std::FILE* fp, std::string& tok) {
  tok.clear();
  int ch;
  while ((ch = std::fgetc(fp)) != EOF) {
    if (ch == '#') {
      while ((ch = std::fgetc(fp)) != EOF && ch != '\n') {
      }
      continue;
    }
    if (!std::isspace(ch)) break;
  }
  if (ch == EOF) return false;
  do {
    tok.push_back(static_cast<char>(ch));
    ch = std::fgetc(fp);
  } while (ch != EOF && !std::isspace(ch) && ch != '#');
  if (ch == '#') std::ungetc(ch, fp);
  return true;
}

long pnm_int(std::FILE* fp, const std::string& path) {
  std::string tok;
  if (!pnm_token(fp, tok)) {
    throw IoError(IoErrorCode::unreadable, "truncated PNM header: " + path);
  }
  try {
    std::size_t pos = 0;
    const long v = std::stol(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw IoError(IoErrorCode::unsupported_format,
                  "bad PNM header field '" + tok + "': " + path);
  }
}

MultiChannelImage load_pnm(std::FILE* fp, const std::string& path) {
  std::string magic;
  if (!pnm_token(fp, magic) || (magic != "P5" && magic != "P6")) {
    throw IoError(IoErrorCode::unsupported_format,
                  "not a binary PGM/PPM file: " + path);
  }
  const int channels = (magic == "P6") ? 3 : 1;
  const long width = pnm_int(fp, path);
  const long height = pnm_int(fp, path);
  const long maxval = pnm_int(fp, path);
  if (width < 1 || height < 1) {
    throw IoError(IoErrorCode::unsupported_format,
                  "bad PNM dimensions: " + path);
  }
  if (maxval != 255 && maxval != 65535) {
    throw IoError(IoErrorCode::unsupported_format,
                  "PNM maxval must be 255 or 65535: " + path);
  }
  // The header ends with exactly one whitespace byte (already consumed by the
  // token reader); binary samples follow, big-endian for 16-bit.
  const int bytes_per = (maxval == 65535) ? 2 : 1;
  const std::size_t count =
      static_cast<std::size_t>(width) * height * channels * bytes_per;
  std::vector<unsigned char> raw(count);
  if (std::fread(raw.data(), 1, count, fp) != count) {
    throw IoError(IoErrorCode::unreadable, "truncated PNM data: " + path);
  }
  MultiChannelImage img(static_cast<int>(width), static_cast<int>(height),
                        channels);
  // Divide rather than multiply by a reciprocal so PNG and PNM loads of the
  // same sample value are bitwise identical.
  const double scale = static_cast<double>(maxval);
  std::size_t o = 0;
  for (long y = 0; y < height; ++y) {
    for (long x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        unsigned value;
        if (bytes_per == 2) {
          value = (static_cast<unsigned>(raw[o]) << 8) | raw[o + 1];
          o += 2;
        } else {
          value = raw[o++];
        }
        img.at(c, static_cast<int>(x), static_cast<int>(y)) = value / scale;
      }
    }
  }
  return img;
}

std::string lower_ext(const std::string& path) {
  const std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

}  // namespace

MultiChannelImage load_image(const std::string& path) {
  FileCloser fc{std::fopen(path.c_str(), "rb")};
  if (!fc.fp) {
    throw IoError(IoErrorCode::unreadable, "cannot open file: " + path);
  }
  unsigned char sig[8] = {0};
  const std::size_t got = std::fread(sig, 1, 8, fc.fp);
  if (got >= 8 && png_sig_cmp(sig, 0, 8) == 0) {
    return load_png(fc.fp, path);
  }
  if (got >= 2 && sig[0] == 'P' && (sig[1] == '5' || sig[1] == '6')) {
    std::rewind(fc.fp);
    return load_pnm(fc.fp, path);
  }
  throw IoError(IoErrorCode::unsupported_format,
                "unrecognized image format: " + path);
}

void save_image(const MultiChannelImage& img, const std::string& path) {
  if (img.width < 1 || img.height < 1 ||
      (img.channels != 1 && img.channels != 3)) {
    throw IoError(IoErrorCode::unsupported_format,
                  "only 1- or 3-channel images can be saved");
  }
  // Clamp to [0, 1] and quantize half-away-from-zero to 255 levels.
  std::vector<unsigned char> interleaved(
      static_cast<std::size_t>(img.width) * img.height * img.channels);
  std::size_t o = 0;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < img.channels; ++c) {
        const double v = std::clamp(img.at(c, x, y), 0.0, 1.0);
        interleaved[o++] = static_cast<unsigned char>(std::llround(v * 255.0));
      }
    }
  }

  const std::string ext = lower_ext(path);
  if (ext == ".png") {
    save_png(img, interleaved, path);
    return;
  }
  if (ext == ".pgm" || ext == ".ppm") {
    const int need = (ext == ".ppm") ? 3 : 1;
    if (img.channels != need) {
      throw IoError(IoErrorCode::unsupported_format,
                    ext + " requires a " + std::to_string(need) +
                        "-channel image");
    }
    FileCloser fc{std::fopen(path.c_str(), "wb")};
    if (!fc.fp) {
      throw IoError(IoErrorCode::write_failure,
                    "cannot open for writing: " + path);
    }
    std::fprintf(fc.fp, "%s\n%d %d\n255\n", need == 3 ? "P6" : "P5", img.width,
                 img.height);
    if (std::fwrite(interleaved.data(), 1, interleaved.size(), fc.fp) !=
        interleaved.size()) {
      throw IoError(IoErrorCode::write_failure, "short write: " + path);
    }
    return;
  }
  throw IoError(IoErrorCode::unsupported_format,
                "unsupported output extension (use .png, .pgm or .ppm): " +
                    path);
}

}  // namespace elastica
