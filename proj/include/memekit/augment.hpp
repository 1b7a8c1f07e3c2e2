#ifndef MEMEKIT_AUGMENT_HPP
#define MEMEKIT_AUGMENT_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "memekit/attacks.hpp"
#include "memekit/errors.hpp"
#include "memekit/image.hpp"
#include "memekit/rng.hpp"

namespace memekit {

enum class ImageAugment { Blur, RandomNoise, ColorJitter, HorizontalFlip, Grayscale };
enum class TextAugment { CasingAlteration, SimilarCharReplacement, TypoInduction };

inline constexpr std::array<ImageAugment, 5> kImageAugments = {
    ImageAugment::Blur, ImageAugment::RandomNoise, ImageAugment::ColorJitter,
    ImageAugment::HorizontalFlip, ImageAugment::Grayscale};
inline constexpr std::array<TextAugment, 3> kTextAugments = {
    TextAugment::CasingAlteration, TextAugment::SimilarCharReplacement,
    TextAugment::TypoInduction};

inline const char* image_augment_name(ImageAugment k) {
  switch (k) {
    case ImageAugment::Blur: return "blur";
    case ImageAugment::RandomNoise: return "random_noise";
    case ImageAugment::ColorJitter: return "color_jitter";
    case ImageAugment::HorizontalFlip: return "horizontal_flip";
    case ImageAugment::Grayscale: return "grayscale";
  }
  return "?";
}

inline const char* text_augment_name(TextAugment k) {
  switch (k) {
    case TextAugment::CasingAlteration: return "casing_alteration";
    case TextAugment::SimilarCharReplacement: return "similar_char_replacement";
    case TextAugment::TypoInduction: return "typo_induction";
  }
  return "?";
}

inline ImageAugment image_augment_from_name(const std::string& s) {
  for (auto k : kImageAugments) {
    if (s == image_augment_name(k)) return k;
  }
  throw Error(ErrorCode::ParseError, "unknown image augment '" + s + "'");
}

inline TextAugment text_augment_from_name(const std::string& s) {
  for (auto k : kTextAugments) {
    if (s == text_augment_name(k)) return k;
  }
  throw Error(ErrorCode::ParseError, "unknown text augment '" + s + "'");
}

/// Tunables for the augmentation family; overridable via config.
struct AugmentParams {
  int blur_kernel = 5;
  double noise_sigma = 10.0;
  double jitter_lo = 0.8;
  double jitter_hi = 1.2;
  double casing_prob = 0.3;
  double homoglyph_prob = 0.3;
};

// ---------------------------------------------------------------------------
// Image augmentations

inline RasterImage gaussian_blur(const RasterImage& img, int kernel) {
  return attack_blur_text(img, {{0, 0, img.width, img.height}}, kernel);
}

inline RasterImage augment_image(const RasterImage& img, ImageAugment kind,
                                 std::uint64_t seed,
                                 const AugmentParams& params = {}) {
  const int cc = img.color_channels();
  switch (kind) {
    case ImageAugment::Blur:
      return gaussian_blur(img, params.blur_kernel);
    case ImageAugment::RandomNoise: {
      RasterImage out = img;
      Rng rng(seed);
      for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
          for (int c = 0; c < cc; ++c) {
            const double v = img.at(x, y, c) + params.noise_sigma * rng.next_gaussian();
            out.at(x, y, c) = static_cast<std::uint8_t>(
                std::clamp(static_cast<int>(std::lround(v)), 0, 255));
          }
        }
      }
      return out;
    }
    case ImageAugment::ColorJitter: {
      // Brightness factor drawn first, then contrast.
      Rng rng(seed);
      const double brightness = rng.next_real(params.jitter_lo, params.jitter_hi);
      const double contrast = rng.next_real(params.jitter_lo, params.jitter_hi);
      RasterImage out = img;
      for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
          for (int c = 0; c < cc; ++c) {
            const double v = (img.at(x, y, c) * brightness - 128.0) * contrast + 128.0;
            out.at(x, y, c) = static_cast<std::uint8_t>(
                std::clamp(static_cast<int>(std::lround(v)), 0, 255));
          }
        }
      }
      return out;
    }
    case ImageAugment::HorizontalFlip: {
      RasterImage out = img;
      const int nc = img.nchan();
      for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
          for (int c = 0; c < nc; ++c) {
            out.at(x, y, c) = img.at(img.width - 1 - x, y, c);
          }
        }
      }
      return out;
    }
    case ImageAugment::Grayscale: {
      RasterImage out = img;
      for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
          const auto g = static_cast<std::uint8_t>(img.luma(x, y));
          for (int c = 0; c < cc; ++c) out.at(x, y, c) = g;
        }
      }
      return out;
    }
  }
  throw Error(ErrorCode::ParseError, "unknown image augment");
}

// ---------------------------------------------------------------------------
// Text augmentations

/// Fixed homoglyph substitution table (case-insensitive on the input side).
inline std::optional<char> homoglyph_for(char c) {
  switch (std::tolower(static_cast<unsigned char>(c))) {
    case 'a': return '@';
    case 'o': return '0';
    case 'l': return '1';
    case 'e': return '3';
    case 's': return '$';
    case 'i': return '!';
    default: return std::nullopt;
  }
}

inline std::string augment_text(const std::string& s, TextAugment kind,
                                std::uint64_t seed,
                                const AugmentParams& params = {}) {
  Rng rng(seed);
  switch (kind) {
    case TextAugment::CasingAlteration: {
      std::string out = s;
      for (char& c : out) {
        const auto uc = static_cast<unsigned char>(c);
        if (std::isalpha(uc) && rng.next_bernoulli(params.casing_prob)) {
          c = std::islower(uc) ? static_cast<char>(std::toupper(uc))
                               : static_cast<char>(std::tolower(uc));
        }
      }
      return out;
    }
    case TextAugment::SimilarCharReplacement: {
      std::string out = s;
      for (char& c : out) {
        if (auto sub = homoglyph_for(c);
            sub && rng.next_bernoulli(params.homoglyph_prob)) {
          c = *sub;
        }
      }
      return out;
    }
    case TextAugment::TypoInduction: {
      if (s.size() < 2) return s;
      std::string out = s;
      const auto edit = rng.next_below(3);
      if (edit == 0) {  // adjacent swap
        const auto i = rng.next_below(out.size() - 1);
        std::swap(out[i], out[i + 1]);
      } else if (edit == 1) {  // deletion
        const auto i = rng.next_below(out.size());
        out.erase(i, 1);
      } else {  // duplication
        const auto i = rng.next_below(out.size());
        out.insert(i, 1, out[i]);
      }
      return out;
    }
  }
  throw Error(ErrorCode::ParseError, "unknown text augment");
}

// ---------------------------------------------------------------------------
// Paired view generation

/// The augmentation applied to one (image, text) sample. `seed` is the
/// parent seed; the per-modality seeds derive from it.
struct AugmentChoice {
  ImageAugment image_kind = ImageAugment::Blur;
  TextAugment text_kind = TextAugment::CasingAlteration;
  std::uint64_t seed = 0;
};

inline std::uint64_t image_augment_seed(std::uint64_t seed) { return derive_seed(seed, 1); }
inline std::uint64_t text_augment_seed(std::uint64_t seed) { return derive_seed(seed, 2); }

inline nlohmann::json augment_choice_to_json(const AugmentChoice& c) {
  return {{"image_kind", image_augment_name(c.image_kind)},
          {"text_kind", text_augment_name(c.text_kind)},
          {"seed", c.seed}};
}

inline AugmentChoice augment_choice_from_json(const nlohmann::json& j) {
  AugmentChoice c;
  c.image_kind = image_augment_from_name(j.at("image_kind").get<std::string>());
  c.text_kind = text_augment_from_name(j.at("text_kind").get<std::string>());
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

struct AugmentedPair {
  RasterImage image;
  std::string text;
  AugmentChoice choice;
};

/// One seeded-uniform augmentation per modality; the returned choice replays
/// to the identical pair.
inline AugmentedPair make_pair(const RasterImage& img, const std::string& text,
                               std::uint64_t seed, const AugmentParams& params = {}) {
  Rng rng(derive_seed(seed, 0));
  AugmentChoice choice;
  choice.image_kind = kImageAugments[rng.next_below(kImageAugments.size())];
  choice.text_kind = kTextAugments[rng.next_below(kTextAugments.size())];
  choice.seed = seed;
  return {augment_image(img, choice.image_kind, image_augment_seed(seed), params),
          augment_text(text, choice.text_kind, text_augment_seed(seed), params),
          choice};
}

}  // namespace memekit

#endif  // MEMEKIT_AUGMENT_HPP
