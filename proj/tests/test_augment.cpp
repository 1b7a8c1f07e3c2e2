#include "memekit/augment.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <map>

#include "test_util.hpp"

using namespace memekit;
using testutil::random_image;
using testutil::uniform_image;

namespace {

// Dynamic-programming edit distance with adjacent transposition counted as
// one edit (optimal string alignment), used as the typo oracle.
std::size_t edit_distance(const std::string& a, const std::string& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, sub});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
      }
    }
  }
  return d[n][m];
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Image augmentations

TEST(AugmentImage, DoubleHorizontalFlipIsIdentity) {
  const auto img = random_image(31, 17, ChannelMode::RGB8, 1);
  const auto once = augment_image(img, ImageAugment::HorizontalFlip, 0);
  EXPECT_NE(once, img);
  EXPECT_EQ(augment_image(once, ImageAugment::HorizontalFlip, 0), img);
}

TEST(AugmentImage, GrayscaleHasEqualChannels) {
  const auto img = random_image(16, 16, ChannelMode::RGB8, 2);
  const auto out = augment_image(img, ImageAugment::Grayscale, 0);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      ASSERT_EQ(out.at(x, y, 0), out.at(x, y, 1));
      ASSERT_EQ(out.at(x, y, 1), out.at(x, y, 2));
    }
  }
}

// Statistical oracle: zero-mean noise on a mid-gray field.
TEST(AugmentImage, RandomNoiseIsZeroMean) {
  const auto img = uniform_image(64, 64, ChannelMode::RGB8, 128);
  const auto out = augment_image(img, ImageAugment::RandomNoise, 3);
  double sum = 0.0;
  long n = 0;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < 3; ++c) {
        sum += static_cast<double>(out.at(x, y, c)) - img.at(x, y, c);
        ++n;
      }
    }
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.0, 3.0 * 10.0 / std::sqrt(static_cast<double>(n)));
}

TEST(AugmentImage, AllKindsPreserveShapeAndDeterminism) {
  const auto img = random_image(20, 14, ChannelMode::RGBA8, 4);
  for (auto kind : kImageAugments) {
    const auto a = augment_image(img, kind, 77);
    const auto b = augment_image(img, kind, 77);
    EXPECT_TRUE(img.same_shape(a)) << image_augment_name(kind);
    EXPECT_EQ(a, b) << image_augment_name(kind);
  }
}

// ---------------------------------------------------------------------------
// Text augmentations

TEST(AugmentText, CasingEmptyInput) {
  EXPECT_EQ(augment_text("", TextAugment::CasingAlteration, 5), "");
}

TEST(AugmentText, CasingIsCaseInsensitivelyEqual) {
  const std::string input = "You Should Not Believe Everything 123!";
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto out = augment_text(input, TextAugment::CasingAlteration, seed);
    EXPECT_EQ(lower(out), lower(input));
  }
}

TEST(AugmentText, HomoglyphFullProbabilityOracle) {
  AugmentParams params;
  params.homoglyph_prob = 1.0;
  EXPECT_EQ(augment_text("love", TextAugment::SimilarCharReplacement, 0, params),
            "10v3");
  EXPECT_EQ(augment_text("aoles i", TextAugment::SimilarCharReplacement, 0, params),
            "@013$ !");
}

TEST(AugmentText, HomoglyphPreservesLength) {
  const std::string input = "similar characters everywhere";
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_EQ(augment_text(input, TextAugment::SimilarCharReplacement, seed).size(),
              input.size());
  }
}

TEST(AugmentText, TypoWithinEditDistanceOne) {
  const std::string input = "hateful meme caption";
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto out = augment_text(input, TextAugment::TypoInduction, seed);
    EXPECT_LE(edit_distance(input, out), 1u) << "seed " << seed << ": " << out;
  }
}

TEST(AugmentText, TypoShortInputIsIdentity) {
  EXPECT_EQ(augment_text("x", TextAugment::TypoInduction, 9), "x");
  EXPECT_EQ(augment_text("", TextAugment::TypoInduction, 9), "");
}

// ---------------------------------------------------------------------------
// Paired views

TEST(MakePair, Deterministic) {
  const auto img = random_image(24, 24, ChannelMode::RGB8, 6);
  const auto a = make_pair(img, "some caption", 42);
  const auto b = make_pair(img, "some caption", 42);
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(a.text, b.text);
  EXPECT_EQ(a.choice.image_kind, b.choice.image_kind);
  EXPECT_EQ(a.choice.text_kind, b.choice.text_kind);
}

// Counting oracle over many seeds: each of the five image kinds should be
// picked with frequency 0.2 +- 0.02.
TEST(MakePair, KindFrequencies) {
  const auto img = uniform_image(4, 4, ChannelMode::Gray8, 100);
  std::map<ImageAugment, int> img_counts;
  std::map<TextAugment, int> txt_counts;
  const int n = 10000;
  for (int seed = 0; seed < n; ++seed) {
    const auto p = make_pair(img, "ab", static_cast<std::uint64_t>(seed));
    ++img_counts[p.choice.image_kind];
    ++txt_counts[p.choice.text_kind];
  }
  for (auto kind : kImageAugments) {
    EXPECT_NEAR(img_counts[kind] / static_cast<double>(n), 0.2, 0.02)
        << image_augment_name(kind);
  }
  for (auto kind : kTextAugments) {
    EXPECT_NEAR(txt_counts[kind] / static_cast<double>(n), 1.0 / 3.0, 0.02)
        << text_augment_name(kind);
  }
}

// Replay oracle: the recorded choice plus the derived per-modality seeds
// reproduce the pair through the public single-modality entry points.
TEST(MakePair, ChoiceReplaysExactly) {
  const auto img = random_image(20, 20, ChannelMode::RGB8, 7);
  const std::string text = "replay me please";
  for (std::uint64_t seed : {0ull, 5ull, 123456789ull}) {
    const auto p = make_pair(img, text, seed);
    EXPECT_EQ(augment_image(img, p.choice.image_kind, image_augment_seed(p.choice.seed)),
              p.image);
    EXPECT_EQ(augment_text(text, p.choice.text_kind, text_augment_seed(p.choice.seed)),
              p.text);
  }
}

TEST(AugmentChoice, JsonRoundTrip) {
  AugmentChoice c{ImageAugment::ColorJitter, TextAugment::TypoInduction, 987654321};
  const auto j = augment_choice_to_json(c);
  EXPECT_EQ(j.at("image_kind"), "color_jitter");
  EXPECT_EQ(j.at("text_kind"), "typo_induction");
  const auto back = augment_choice_from_json(j);
  EXPECT_EQ(back.image_kind, c.image_kind);
  EXPECT_EQ(back.text_kind, c.text_kind);
  EXPECT_EQ(back.seed, c.seed);
}
