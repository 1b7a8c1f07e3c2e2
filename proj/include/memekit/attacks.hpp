#ifndef MEMEKIT_ATTACKS_HPP
#define MEMEKIT_ATTACKS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "memekit/errors.hpp"
#include "memekit/font5.hpp"
#include "memekit/image.hpp"
#include "memekit/rng.hpp"

namespace memekit {

// ---------------------------------------------------------------------------
// Token rendering

/// Rasterized token: ink pixels (drawn white) and their one-pixel black
/// outline, both relative to the top-left of the token footprint.
/// width/height describe the footprint including the outline margin.
struct TokenMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> ink;      // footprint grid, 1 = white ink
  std::vector<std::uint8_t> outline;  // footprint grid, 1 = black outline

  bool ink_at(int x, int y) const { return ink[static_cast<std::size_t>(y) * width + x] != 0; }
  bool outline_at(int x, int y) const { return outline[static_cast<std::size_t>(y) * width + x] != 0; }
};

/// Rasterize `token` at a glyph height of `font_px` pixels (nearest-neighbor
/// scaled from the 3x5 base font), then derive the 8-neighborhood outline.
inline TokenMask render_token_mask(const std::string& token, int font_px) {
  if (font_px < 1) throw Error(ErrorCode::UnsupportedGlyph, "font_px must be >= 1");
  const int gh = font_px;
  const int gw = std::max(1, (font5::kGlyphWidth * font_px + 2) / 5);
  const int spacing = std::max(1, (font_px + 2) / 5);

  const int n = static_cast<int>(token.size());
  const int ink_w = n * gw + (n - 1) * spacing;
  const int ink_h = gh;

  TokenMask m;
  m.width = ink_w + 2;  // 1-px outline margin on each side
  m.height = ink_h + 2;
  m.ink.assign(static_cast<std::size_t>(m.width) * m.height, 0);
  m.outline.assign(m.ink.size(), 0);

  for (int gi = 0; gi < n; ++gi) {
    auto rows = font5::glyph_rows(token[gi]);
    if (!rows) {
      throw Error(ErrorCode::UnsupportedGlyph,
                  std::string("no glyph for '") + token[gi] + "'");
    }
    const int ox = 1 + gi * (gw + spacing);
    for (int y = 0; y < gh; ++y) {
      const int sy = y * font5::kGlyphHeight / gh;
      for (int x = 0; x < gw; ++x) {
        const int sx = x * font5::kGlyphWidth / gw;
        if (font5::glyph_bit(*rows, sx, sy)) {
          m.ink[static_cast<std::size_t>(y + 1) * m.width + ox + x] = 1;
        }
      }
    }
  }
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      if (m.ink_at(x, y)) continue;
      for (int dy = -1; dy <= 1 && !m.outline_at(x, y); ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if (nx >= 0 && ny >= 0 && nx < m.width && ny < m.height &&
              m.ink_at(nx, ny)) {
            m.outline[static_cast<std::size_t>(y) * m.width + x] = 1;
            break;
          }
        }
      }
    }
  }
  return m;
}

/// Seeded placement for a token footprint inside an image: top-left corner,
/// x drawn first then y.
inline std::pair<int, int> token_placement(const TokenMask& mask,
                                           const RasterImage& img,
                                           std::uint64_t seed) {
  if (mask.width > img.width || mask.height > img.height) {
    throw Error(ErrorCode::ImageTooSmall,
                "token footprint " + std::to_string(mask.width) + "x" +
                    std::to_string(mask.height) + " exceeds image " +
                    std::to_string(img.width) + "x" + std::to_string(img.height));
  }
  Rng rng(seed);
  const int x0 = static_cast<int>(rng.next_below(img.width - mask.width + 1));
  const int y0 = static_cast<int>(rng.next_below(img.height - mask.height + 1));
  return {x0, y0};
}

/// Stamp `token` (white glyphs, 1-px black outline) at a seeded random
/// in-bounds location. Empty token is the identity.
inline RasterImage attack_add_token(const RasterImage& img, const std::string& token,
                                    int font_px, std::uint64_t seed) {
  if (token.empty()) return img;
  TokenMask mask = render_token_mask(token, font_px);
  auto [x0, y0] = token_placement(mask, img, seed);

  RasterImage out = img;
  const int cc = out.color_channels();
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      std::uint8_t v;
      if (mask.ink_at(x, y)) {
        v = 255;
      } else if (mask.outline_at(x, y)) {
        v = 0;
      } else {
        continue;
      }
      for (int c = 0; c < cc; ++c) out.at(x0 + x, y0 + y, c) = v;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Blur

/// Normalized kernel x kernel Gaussian with sigma = kernel / 3.
inline std::vector<double> gaussian_kernel2d(int kernel) {
  if (kernel < 1 || kernel % 2 == 0) {
    throw Error(ErrorCode::InvalidBox, "blur kernel must be odd and >= 1");
  }
  const double sigma = kernel / 3.0;
  const int r = kernel / 2;
  std::vector<double> k(static_cast<std::size_t>(kernel) * kernel);
  double sum = 0.0;
  for (int y = -r; y <= r; ++y) {
    for (int x = -r; x <= r; ++x) {
      double v = std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
      k[static_cast<std::size_t>(y + r) * kernel + (x + r)] = v;
      sum += v;
    }
  }
  for (double& v : k) v /= sum;
  return k;
}

/// Gaussian-blur only the pixels inside each region; the convolution reads
/// from the unmodified input with edge-clamped sampling, so overlapping
/// regions compose the same way regardless of order.
inline RasterImage attack_blur_text(const RasterImage& img,
                                    const std::vector<BoundingBox>& regions,
                                    int kernel = 5) {
  for (const auto& b : regions) require_inside(b, img);
  const auto k = gaussian_kernel2d(kernel);
  const int r = kernel / 2;

  RasterImage out = img;
  const int cc = img.color_channels();
  for (const auto& b : regions) {
    for (int y = b.y; y < b.y + b.h; ++y) {
      for (int x = b.x; x < b.x + b.w; ++x) {
        for (int c = 0; c < cc; ++c) {
          double acc = 0.0;
          for (int dy = -r; dy <= r; ++dy) {
            const int sy = std::clamp(y + dy, 0, img.height - 1);
            for (int dx = -r; dx <= r; ++dx) {
              const int sx = std::clamp(x + dx, 0, img.width - 1);
              acc += k[static_cast<std::size_t>(dy + r) * kernel + (dx + r)] *
                     img.at(sx, sy, c);
            }
          }
          out.at(x, y, c) = static_cast<std::uint8_t>(
              std::clamp(static_cast<int>(acc + 0.5), 0, 255));
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Salt & pepper

struct WholeImage {};
struct Regions {
  std::vector<BoundingBox> boxes;
};
using SaltPepperScope = std::variant<WholeImage, Regions>;

/// Pixel membership mask for a scope. Row-major over the image.
inline std::vector<std::uint8_t> scope_mask(const RasterImage& img,
                                            const SaltPepperScope& scope) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(img.width) * img.height, 0);
  if (std::holds_alternative<WholeImage>(scope)) {
    std::fill(mask.begin(), mask.end(), 1);
  } else {
    for (const auto& b : std::get<Regions>(scope).boxes) {
      require_inside(b, img);
      for (int y = b.y; y < b.y + b.h; ++y) {
        for (int x = b.x; x < b.x + b.w; ++x) {
          mask[static_cast<std::size_t>(y) * img.width + x] = 1;
        }
      }
    }
  }
  return mask;
}

/// Each in-scope pixel is independently hit with probability `density` and
/// forced to pure black or pure white (fair coin). Alpha is untouched.
inline RasterImage attack_saltpepper(const RasterImage& img,
                                     const SaltPepperScope& scope, double density,
                                     std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) {
    throw Error(ErrorCode::InvalidDensity,
                "density " + std::to_string(density) + " not in [0,1]");
  }
  const auto mask = scope_mask(img, scope);
  RasterImage out = img;
  Rng rng(seed);
  const int cc = img.color_channels();
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (!mask[static_cast<std::size_t>(y) * img.width + x]) continue;
      if (!rng.next_bernoulli(density)) continue;
      const std::uint8_t v = rng.next_bool() ? 255 : 0;
      for (int c = 0; c < cc; ++c) out.at(x, y, c) = v;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Newsprint (clustered-dot ordered dithering)

/// Round-spot threshold matrix, cell_px x cell_px, row-major. Entries are
/// (rank + 0.5) * 255 / cell_px^2 where rank orders cells by distance from
/// the cell center (ties broken row-major), so the dot grows outward.
inline std::vector<double> newsprint_thresholds(int cell_px) {
  if (cell_px < 2) throw Error(ErrorCode::InvalidCell, "cell_px must be >= 2");
  const int n = cell_px * cell_px;
  const double cx = (cell_px - 1) / 2.0;
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  auto dist2 = [&](int idx) {
    const double dx = idx % cell_px - cx;
    const double dy = idx / cell_px - cx;
    return dx * dx + dy * dy;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dist2(a) < dist2(b); });
  std::vector<double> t(n);
  for (int rank = 0; rank < n; ++rank) {
    t[order[rank]] = (rank + 0.5) * 255.0 / n;
  }
  return t;
}

/// Luma-threshold the image against the tiled spot matrix; output channels
/// are all 0 or 255 (alpha preserved).
inline RasterImage attack_newsprint(const RasterImage& img, int cell_px = 4) {
  const auto thresholds = newsprint_thresholds(cell_px);
  RasterImage out = img;
  const int cc = img.color_channels();
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double t =
          thresholds[static_cast<std::size_t>(y % cell_px) * cell_px + (x % cell_px)];
      const std::uint8_t v = img.luma(x, y) >= t ? 255 : 0;
      for (int c = 0; c < cc; ++c) out.at(x, y, c) = v;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spread

/// Swap every pixel (row-major visit order) with a seeded-uniform partner in
/// its Chebyshev-`radius` neighborhood, clamped to the image. Color values
/// move as whole pixels; alpha stays in place. The value multiset is
/// preserved exactly.
inline RasterImage attack_spread(const RasterImage& img, int radius,
                                 std::uint64_t seed) {
  if (radius < 0) throw Error(ErrorCode::InvalidBox, "radius must be >= 0");
  if (radius == 0) return img;
  RasterImage out = img;
  Rng rng(seed);
  const int cc = img.color_channels();
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const int px = static_cast<int>(rng.next_in(std::max(0, x - radius),
                                                  std::min(img.width - 1, x + radius)));
      const int py = static_cast<int>(rng.next_in(std::max(0, y - radius),
                                                  std::min(img.height - 1, y + radius)));
      for (int c = 0; c < cc; ++c) {
        std::swap(out.at(x, y, c), out.at(px, py, c));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Combined (token + whole-image salt & pepper)

/// Sequential composition under a fixed seed split:
/// token stage uses derive_seed(seed, 0), noise stage derive_seed(seed, 1).
inline RasterImage attack_combined(const RasterImage& img, const std::string& token,
                                   int font_px, double density, std::uint64_t seed) {
  RasterImage stamped = attack_add_token(img, token, font_px, derive_seed(seed, 0));
  return attack_saltpepper(stamped, WholeImage{}, density, derive_seed(seed, 1));
}

// ---------------------------------------------------------------------------
// Attack battery

enum class AttackKind {
  AddToken,
  BlurText,
  SaltPepperText,
  SaltPepperImage,
  Newsprint,
  Spread,
  AddPlusSaltPepperImage,
};

enum class Intensity { Low, High };

/// Identity plus tunables for one attack instance.
struct AttackSpec {
  AttackKind kind = AttackKind::AddToken;
  std::optional<Intensity> intensity;
  std::string token = "LOVE";
  int font_px = 5;
  double density = 0.2;
  int radius = 1;
  int cell_px = 4;
  int kernel = 5;
  std::uint64_t seed = 0;

  /// Stable name used for output subdirectories and manifests.
  std::string name() const {
    switch (kind) {
      case AttackKind::AddToken: return "add";
      case AttackKind::BlurText: return "blur";
      case AttackKind::SaltPepperText: return "saltpepper_t";
      case AttackKind::SaltPepperImage:
        return intensity == Intensity::High ? "saltpepper_i_high" : "saltpepper_i_low";
      case AttackKind::Newsprint: return "newsprint";
      case AttackKind::Spread:
        return intensity == Intensity::High ? "spread_high" : "spread_low";
      case AttackKind::AddPlusSaltPepperImage: return "add_saltpepper_i";
    }
    return "?";
  }
};

/// Tunable defaults for the battery; every field may be overridden from the
/// config file.
struct AttackDefaults {
  std::string token = "LOVE";
  int font_px = 5;
  int blur_kernel = 5;
  double saltpepper_text_density = 0.2;
  double saltpepper_image_low = 0.2;
  double saltpepper_image_high = 0.4;
  int newsprint_cell = 4;
  int spread_low = 1;
  int spread_high = 3;
};

/// The default nine-attack battery.
inline std::vector<AttackSpec> default_battery(const AttackDefaults& d = {}) {
  std::vector<AttackSpec> specs;
  auto push = [&](AttackKind k, std::optional<Intensity> i) {
    AttackSpec s;
    s.kind = k;
    s.intensity = i;
    s.token = d.token;
    s.font_px = d.font_px;
    s.kernel = d.blur_kernel;
    s.cell_px = d.newsprint_cell;
    switch (k) {
      case AttackKind::SaltPepperText:
        s.density = d.saltpepper_text_density;
        break;
      case AttackKind::SaltPepperImage:
      case AttackKind::AddPlusSaltPepperImage:
        s.density = i == Intensity::High ? d.saltpepper_image_high
                                         : d.saltpepper_image_low;
        break;
      case AttackKind::Spread:
        s.radius = i == Intensity::High ? d.spread_high : d.spread_low;
        break;
      default:
        break;
    }
    specs.push_back(s);
  };
  push(AttackKind::AddToken, std::nullopt);
  push(AttackKind::BlurText, std::nullopt);
  push(AttackKind::SaltPepperText, std::nullopt);
  push(AttackKind::SaltPepperImage, Intensity::Low);
  push(AttackKind::SaltPepperImage, Intensity::High);
  push(AttackKind::Newsprint, std::nullopt);
  push(AttackKind::Spread, Intensity::Low);
  push(AttackKind::Spread, Intensity::High);
  push(AttackKind::AddPlusSaltPepperImage, std::nullopt);
  return specs;
}

inline bool attack_needs_regions(AttackKind k) {
  return k == AttackKind::BlurText || k == AttackKind::SaltPepperText;
}

/// Dispatch one spec against an image. `regions` is consulted only by the
/// region-scoped attacks.
inline RasterImage apply_attack(const RasterImage& img, const AttackSpec& spec,
                                const std::vector<BoundingBox>& regions = {}) {
  switch (spec.kind) {
    case AttackKind::AddToken:
      return attack_add_token(img, spec.token, spec.font_px, spec.seed);
    case AttackKind::BlurText:
      return attack_blur_text(img, regions, spec.kernel);
    case AttackKind::SaltPepperText:
      return attack_saltpepper(img, Regions{regions}, spec.density, spec.seed);
    case AttackKind::SaltPepperImage:
      return attack_saltpepper(img, WholeImage{}, spec.density, spec.seed);
    case AttackKind::Newsprint:
      return attack_newsprint(img, spec.cell_px);
    case AttackKind::Spread:
      return attack_spread(img, spec.radius, spec.seed);
    case AttackKind::AddPlusSaltPepperImage:
      return attack_combined(img, spec.token, spec.font_px, spec.density, spec.seed);
  }
  throw Error(ErrorCode::ParseError, "unknown attack kind");
}

}  // namespace memekit

#endif  // MEMEKIT_ATTACKS_HPP
