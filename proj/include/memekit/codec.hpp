#ifndef MEMEKIT_CODEC_HPP
#define MEMEKIT_CODEC_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "memekit/errors.hpp"
#include "memekit/image.hpp"

namespace memekit {

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

inline void write_file_bytes(const std::filesystem::path& path,
                             const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

/// Bits-per-pixel as recorded in PNG IHDR / JPEG SOF metadata, read straight
/// from the container headers without decoding pixel data.
inline int file_bit_depth(const std::filesystem::path& path) {
  auto bytes = read_file_bytes(path);
  static const std::uint8_t png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 33 && std::equal(png_sig, png_sig + 8, bytes.begin())) {
    int depth = bytes[24];
    int color_type = bytes[25];
    int samples;
    switch (color_type) {
      case 0: samples = 1; break;   // grayscale
      case 2: samples = 3; break;   // truecolor
      case 3: samples = 1; break;   // palette index
      case 4: samples = 2; break;   // gray + alpha
      case 6: samples = 4; break;   // truecolor + alpha
      default:
        throw Error(ErrorCode::DecodeError,
                    "bad PNG color type in " + path.string());
    }
    return depth * samples;
  }
  if (bytes.size() >= 4 && bytes[0] == 0xFF && bytes[1] == 0xD8) {
    // Walk JPEG segments looking for a start-of-frame marker.
    std::size_t i = 2;
    while (i + 4 <= bytes.size()) {
      if (bytes[i] != 0xFF) {
        ++i;
        continue;
      }
      std::uint8_t marker = bytes[i + 1];
      if (marker == 0xFF) {
        ++i;
        continue;
      }
      if (marker == 0xD8 || (marker >= 0xD0 && marker <= 0xD7)) {
        i += 2;
        continue;
      }
      std::size_t len = (static_cast<std::size_t>(bytes[i + 2]) << 8) | bytes[i + 3];
      bool is_sof = marker >= 0xC0 && marker <= 0xCF && marker != 0xC4 &&
                    marker != 0xC8 && marker != 0xCC;
      if (is_sof) {
        if (i + 4 + 6 > bytes.size()) break;
        int precision = bytes[i + 4];
        int ncomp = bytes[i + 9];
        return precision * ncomp;
      }
      i += 2 + len;
    }
    throw Error(ErrorCode::DecodeError, "no SOF marker in " + path.string());
  }
  throw Error(ErrorCode::DecodeError, "unrecognized image format: " + path.string());
}

inline RasterImage decode_image(const std::filesystem::path& path) {
  cv::Mat m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (m.empty()) {
    throw Error(ErrorCode::DecodeError, "cannot decode " + path.string());
  }
  if (m.depth() != CV_8U) {
    cv::Mat tmp;
    m.convertTo(tmp, CV_8U, m.depth() == CV_16U ? 1.0 / 257.0 : 1.0);
    m = tmp;
  }
  ChannelMode mode;
  switch (m.channels()) {
    case 1: mode = ChannelMode::Gray8; break;
    case 3: mode = ChannelMode::RGB8; break;
    case 4: mode = ChannelMode::RGBA8; break;
    default:
      throw Error(ErrorCode::DecodeError,
                  "unsupported channel count in " + path.string());
  }
  RasterImage img(m.cols, m.rows, mode);
  const int nc = img.nchan();
  for (int y = 0; y < m.rows; ++y) {
    const std::uint8_t* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < m.cols; ++x) {
      // OpenCV stores BGR(A); RasterImage stores RGB(A).
      if (nc == 1) {
        img.at(x, y, 0) = row[x];
      } else {
        img.at(x, y, 0) = row[x * nc + 2];
        img.at(x, y, 1) = row[x * nc + 1];
        img.at(x, y, 2) = row[x * nc + 0];
        if (nc == 4) img.at(x, y, 3) = row[x * nc + 3];
      }
    }
  }
  img.source_bit_depth = file_bit_depth(path);
  return img;
}

/// PNG-encode into memory. PNG is the only encode target the toolkit writes
/// so checksummed outputs stay stable across decoder versions.
inline std::vector<std::uint8_t> encode_png(const RasterImage& img) {
  int type = img.channels == ChannelMode::Gray8  ? CV_8UC1
             : img.channels == ChannelMode::RGB8 ? CV_8UC3
                                                 : CV_8UC4;
  cv::Mat bgr(img.height, img.width, type);
  const int nc = img.nchan();
  for (int y = 0; y < img.height; ++y) {
    std::uint8_t* row = bgr.ptr<std::uint8_t>(y);
    for (int x = 0; x < img.width; ++x) {
      if (nc == 1) {
        row[x] = img.at(x, y, 0);
      } else {
        row[x * nc + 2] = img.at(x, y, 0);
        row[x * nc + 1] = img.at(x, y, 1);
        row[x * nc + 0] = img.at(x, y, 2);
        if (nc == 4) row[x * nc + 3] = img.at(x, y, 3);
      }
    }
  }
  std::vector<std::uint8_t> out;
  if (!cv::imencode(".png", bgr, out)) {
    throw Error(ErrorCode::IoError, "PNG encode failed");
  }
  return out;
}

inline void save_png(const RasterImage& img, const std::filesystem::path& path) {
  write_file_bytes(path, encode_png(img));
}

}  // namespace memekit

#endif  // MEMEKIT_CODEC_HPP
