#ifndef MEMEKIT_IMAGE_HPP
#define MEMEKIT_IMAGE_HPP

#include <cstdint>
#include <vector>

#include "memekit/errors.hpp"

namespace memekit {

enum class ChannelMode { Gray8, RGB8, RGBA8 };

inline int channel_count(ChannelMode m) {
  switch (m) {
    case ChannelMode::Gray8: return 1;
    case ChannelMode::RGB8: return 3;
    case ChannelMode::RGBA8: return 4;
  }
  return 0;
}

inline const char* channel_mode_name(ChannelMode m) {
  switch (m) {
    case ChannelMode::Gray8: return "gray8";
    case ChannelMode::RGB8: return "rgb8";
    case ChannelMode::RGBA8: return "rgba8";
  }
  return "?";
}

/// Decoded pixel grid, row-major and channel-interleaved.
/// source_bit_depth carries the bits-per-pixel recorded in the file the
/// image was decoded from (0 for synthetic images).
struct RasterImage {
  int width = 0;
  int height = 0;
  ChannelMode channels = ChannelMode::RGB8;
  std::vector<std::uint8_t> pixels;
  int source_bit_depth = 0;

  RasterImage() = default;

  RasterImage(int w, int h, ChannelMode mode, std::uint8_t fill = 0)
      : width(w), height(h), channels(mode) {
    if (w < 1 || h < 1) {
      throw Error(ErrorCode::DecodeError, "image extent must be positive");
    }
    pixels.assign(static_cast<std::size_t>(w) * h * channel_count(mode), fill);
  }

  int nchan() const { return channel_count(channels); }

  std::size_t index(int x, int y, int c = 0) const {
    return (static_cast<std::size_t>(y) * width + x) * nchan() + c;
  }

  std::uint8_t at(int x, int y, int c = 0) const { return pixels[index(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c = 0) { return pixels[index(x, y, c)]; }

  /// Number of channels the attacks may write. Alpha is left alone.
  int color_channels() const {
    return channels == ChannelMode::RGBA8 ? 3 : nchan();
  }

  /// Rec.601 luma, rounded to nearest.
  int luma(int x, int y) const {
    if (channels == ChannelMode::Gray8) return at(x, y, 0);
    double v = 0.299 * at(x, y, 0) + 0.587 * at(x, y, 1) + 0.114 * at(x, y, 2);
    return static_cast<int>(v + 0.5);
  }

  bool same_shape(const RasterImage& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }

  bool operator==(const RasterImage& o) const {
    return same_shape(o) && pixels == o.pixels;
  }
};

/// Axis-aligned text region, top-left anchored.
struct BoundingBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool operator==(const BoundingBox&) const = default;

  bool inside(const RasterImage& img) const {
    return x >= 0 && y >= 0 && w >= 1 && h >= 1 && x + w <= img.width &&
           y + h <= img.height;
  }
};

inline void require_inside(const BoundingBox& b, const RasterImage& img) {
  if (!b.inside(img)) {
    throw Error(ErrorCode::RegionOutOfBounds,
                "box (" + std::to_string(b.x) + "," + std::to_string(b.y) +
                    "," + std::to_string(b.w) + "," + std::to_string(b.h) +
                    ") outside " + std::to_string(img.width) + "x" +
                    std::to_string(img.height) + " image");
  }
}

}  // namespace memekit

#endif  // MEMEKIT_IMAGE_HPP
