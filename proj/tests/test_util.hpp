#ifndef MEMEKIT_TESTS_TEST_UTIL_HPP
#define MEMEKIT_TESTS_TEST_UTIL_HPP

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "memekit/image.hpp"
#include "memekit/rng.hpp"

namespace testutil {

inline memekit::RasterImage random_image(int w, int h, memekit::ChannelMode mode,
                                         std::uint64_t seed) {
  memekit::RasterImage img(w, h, mode);
  memekit::Rng rng(seed);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.next_below(256));
  return img;
}

inline memekit::RasterImage uniform_image(int w, int h, memekit::ChannelMode mode,
                                          std::uint8_t value) {
  memekit::RasterImage img(w, h, mode, value);
  if (mode == memekit::ChannelMode::RGBA8) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) img.at(x, y, 3) = 255;
    }
  }
  return img;
}

/// Per-channel 256-bin histogram over the channels attacks may touch.
inline std::vector<std::vector<long>> color_histograms(const memekit::RasterImage& img) {
  std::vector<std::vector<long>> hists(img.color_channels(), std::vector<long>(256, 0));
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < img.color_channels(); ++c) {
        ++hists[c][img.at(x, y, c)];
      }
    }
  }
  return hists;
}

/// Set of pixel coordinates where two same-shaped images differ in any channel.
inline std::vector<std::pair<int, int>> diff_pixels(const memekit::RasterImage& a,
                                                    const memekit::RasterImage& b) {
  std::vector<std::pair<int, int>> out;
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < a.width; ++x) {
      for (int c = 0; c < a.nchan(); ++c) {
        if (a.at(x, y, c) != b.at(x, y, c)) {
          out.emplace_back(x, y);
          break;
        }
      }
    }
  }
  return out;
}

/// Unique scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("memekit_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil

#endif  // MEMEKIT_TESTS_TEST_UTIL_HPP
