#include "memekit/pipeline.hpp"

#include <gtest/gtest.h>

#include <fstream>

#include "memekit/config.hpp"
#include "test_util.hpp"

using namespace memekit;
using testutil::TempDir;

namespace {

void make_dataset(const std::filesystem::path& dir, int n_images, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  for (int i = 0; i < n_images; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "img%03d.png", i);
    save_png(testutil::random_image(32, 24, ChannelMode::RGB8, seed + i), dir / name);
  }
}

// Snapshot of every file under a tree: relative path -> bytes.
std::map<std::string, std::vector<std::uint8_t>> tree_snapshot(
    const std::filesystem::path& root) {
  std::map<std::string, std::vector<std::uint8_t>> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      out[std::filesystem::relative(e.path(), root).string()] =
          read_file_bytes(e.path());
    }
  }
  return out;
}

}  // namespace

TEST(Sha256, KnownVector) {
  const std::vector<std::uint8_t> abc{'a', 'b', 'c'};
  EXPECT_EQ(sha256_hex(abc),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex({}),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(AttackSpecJson, RoundTrip) {
  AttackSpec s;
  s.kind = AttackKind::SaltPepperImage;
  s.intensity = Intensity::High;
  s.density = 0.4;
  s.seed = 123456789;
  const auto back = attack_spec_from_json(attack_spec_to_json(s));
  EXPECT_EQ(back.kind, s.kind);
  EXPECT_EQ(back.intensity, s.intensity);
  EXPECT_DOUBLE_EQ(back.density, s.density);
  EXPECT_EQ(back.seed, s.seed);
  EXPECT_EQ(back.name(), "saltpepper_i_high");
}

TEST(Poison, EmptyInputGivesValidEmptyManifest) {
  TempDir in("poison_in"), out("poison_out");
  const auto manifest =
      poison_dataset(in.path(), RegionsNone{}, default_battery(), 7, out.path());
  EXPECT_TRUE(manifest.entries.empty());
  EXPECT_EQ(manifest.global_seed, 7u);
  const auto loaded = load_poison_manifest(out.path() / "manifest.json");
  EXPECT_TRUE(loaded.entries.empty());
  EXPECT_EQ(loaded.attacks.size(), 9u);
}

TEST(Poison, BatteryLayoutAndOriginalsCopy) {
  TempDir in("poison_in"), out("poison_out");
  make_dataset(in.path(), 3, 100);
  const auto manifest = poison_dataset(in.path(), RegionsBands{0.2}, default_battery(),
                                       7, out.path());
  // 9 attack subdirectories plus the originals copy.
  int dirs = 0;
  for (const auto& e : std::filesystem::directory_iterator(out.path())) {
    if (e.is_directory()) ++dirs;
  }
  EXPECT_EQ(dirs, 10);
  // One entry per (image, set) including originals.
  EXPECT_EQ(manifest.entries.size(), 3u * 10u);
  // Originals are byte-identical to the inputs.
  for (int i = 0; i < 3; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "img%03d.png", i);
    EXPECT_EQ(read_file_bytes(in.path() / name),
              read_file_bytes(out.path() / "originals" / name));
  }
  for (const auto& e : manifest.entries) {
    EXPECT_EQ(e.status, EntryStatus::Ok) << e.image_id << "/" << e.attack_kind
                                         << ": " << e.message;
  }
}

TEST(Poison, SchedulingIndependence) {
  TempDir in("poison_in"), out1("poison_o1"), out4("poison_o4");
  make_dataset(in.path(), 5, 200);
  PoisonOptions one;
  one.jobs = 1;
  PoisonOptions four;
  four.jobs = 4;
  poison_dataset(in.path(), RegionsBands{0.2}, default_battery(), 9, out1.path(), one);
  poison_dataset(in.path(), RegionsBands{0.2}, default_battery(), 9, out4.path(), four);
  EXPECT_EQ(tree_snapshot(out1.path()), tree_snapshot(out4.path()));
}

TEST(Poison, MissingRegionsWarnsAndPassesThrough) {
  TempDir in("poison_in"), out("poison_out");
  make_dataset(in.path(), 1, 300);
  std::vector<AttackSpec> battery;
  for (const auto& s : default_battery()) {
    if (s.name() == "saltpepper_t" || s.name() == "blur") battery.push_back(s);
  }
  const auto manifest =
      poison_dataset(in.path(), RegionsNone{}, battery, 7, out.path());
  int warnings = 0;
  for (const auto& e : manifest.entries) {
    if (e.status == EntryStatus::Warning) {
      ++warnings;
      // Passed-through output decodes to the identical pixels.
      const auto orig = decode_image(in.path() / "img000.png");
      const auto copy = decode_image(out.path() / e.output_path);
      EXPECT_EQ(orig.pixels, copy.pixels);
    }
  }
  EXPECT_EQ(warnings, 2);
}

TEST(Poison, UndecodableImageRecordedAsErrorRunContinues) {
  TempDir in("poison_in"), out("poison_out");
  make_dataset(in.path(), 2, 400);
  std::ofstream(in.path() / "broken.png") << "this is not a png";
  const auto manifest = poison_dataset(in.path(), RegionsBands{0.2}, default_battery(),
                                       7, out.path());
  int errors = 0, ok = 0;
  for (const auto& e : manifest.entries) {
    if (e.status == EntryStatus::Error) {
      ++errors;
      EXPECT_EQ(e.image_id, "broken");
    } else {
      ++ok;
    }
  }
  EXPECT_EQ(errors, 9);      // every attack on the broken file
  EXPECT_EQ(ok, 2 * 10 + 1);  // intact images fully processed + the raw byte copy
}

TEST(Verify, UntouchedTreePasses) {
  TempDir in("poison_in"), out("poison_out");
  make_dataset(in.path(), 2, 500);
  poison_dataset(in.path(), RegionsBands{0.2}, default_battery(), 7, out.path());
  const auto report = verify_manifest(out.path() / "manifest.json", out.path());
  EXPECT_TRUE(report.all_ok());
  EXPECT_EQ(report.ok, 2u * 10u);
}

TEST(Verify, DetectsSingleCorruptionAndDeletion) {
  TempDir in("poison_in"), out("poison_out");
  make_dataset(in.path(), 2, 600);
  poison_dataset(in.path(), RegionsBands{0.2}, default_battery(), 7, out.path());

  {  // truncate one file
    const auto victim = out.path() / "newsprint" / "img000.png";
    auto bytes = read_file_bytes(victim);
    bytes.resize(bytes.size() / 2);
    write_file_bytes(victim, bytes);
  }
  std::filesystem::remove(out.path() / "spread_low" / "img001.png");

  const auto report = verify_manifest(out.path() / "manifest.json", out.path());
  EXPECT_EQ(report.mismatch, 1u);
  EXPECT_EQ(report.missing, 1u);
  EXPECT_EQ(report.ok, 2u * 10u - 2u);
  EXPECT_FALSE(report.all_ok());
}

TEST(Verify, UnreadableManifestRejected) {
  TempDir dir("verify");
  const auto path = dir.path() / "manifest.json";
  std::ofstream(path) << "{ not json";
  try {
    verify_manifest(path, dir.path());
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
  }
}

// ---------------------------------------------------------------------------
// Config

TEST(Config, TomlOverridesDefaults) {
  TempDir dir("config");
  const auto path = dir.path() / "memekit.toml";
  std::ofstream(path) << "[attacks]\n"
                         "token = \"CARESS\"\n"
                         "saltpepper_image_high = 0.5\n"
                         "spread_high = 4\n"
                         "\n"
                         "[augment]\n"
                         "noise_sigma = 5.0  # quieter noise\n"
                         "\n"
                         "[regions]\n"
                         "band_fraction = 0.25\n"
                         "\n"
                         "[loss]\n"
                         "tau = 0.1\n";
  const auto cfg = load_config(path);
  EXPECT_EQ(cfg.attacks.token, "CARESS");
  EXPECT_DOUBLE_EQ(cfg.attacks.saltpepper_image_high, 0.5);
  EXPECT_EQ(cfg.attacks.spread_high, 4);
  EXPECT_DOUBLE_EQ(cfg.attacks.saltpepper_image_low, 0.2);  // untouched default
  EXPECT_DOUBLE_EQ(cfg.augment.noise_sigma, 5.0);
  EXPECT_DOUBLE_EQ(cfg.band_fraction, 0.25);
  EXPECT_DOUBLE_EQ(cfg.tau, 0.1);
}

TEST(Config, JsonEquivalent) {
  TempDir dir("config");
  const auto path = dir.path() / "memekit.json";
  std::ofstream(path) << R"({"attacks":{"token":"CARESS"},"loss":{"tau":2.0}})";
  const auto cfg = load_config(path);
  EXPECT_EQ(cfg.attacks.token, "CARESS");
  EXPECT_DOUBLE_EQ(cfg.tau, 2.0);
}

TEST(Config, BadTomlRejected) {
  TempDir dir("config");
  const auto path = dir.path() / "bad.toml";
  std::ofstream(path) << "this is not toml\n";
  try {
    load_config(path);
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
  }
}

TEST(SeedDerivation, PerImageSeedsAreOrderFree) {
  // Identical (seed, key) pairs map to identical seeds; distinct keys differ.
  EXPECT_EQ(hash_seed(7, "img000/newsprint"), hash_seed(7, "img000/newsprint"));
  EXPECT_NE(hash_seed(7, "img000/newsprint"), hash_seed(7, "img001/newsprint"));
  EXPECT_NE(hash_seed(7, "img000/newsprint"), hash_seed(8, "img000/newsprint"));
  EXPECT_NE(derive_seed(7, 0), derive_seed(7, 1));
}
