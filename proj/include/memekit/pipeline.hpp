#ifndef MEMEKIT_PIPELINE_HPP
#define MEMEKIT_PIPELINE_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "memekit/attacks.hpp"
#include "memekit/codec.hpp"
#include "memekit/errors.hpp"
#include "memekit/regions.hpp"
#include "memekit/rng.hpp"

namespace memekit {

inline std::string sha256_hex(const std::vector<std::uint8_t>& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  EVP_DigestUpdate(ctx, bytes.data(), bytes.size());
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// AttackSpec serialization

inline const char* attack_kind_name(AttackKind k) {
  switch (k) {
    case AttackKind::AddToken: return "add_token";
    case AttackKind::BlurText: return "blur_text";
    case AttackKind::SaltPepperText: return "saltpepper_text";
    case AttackKind::SaltPepperImage: return "saltpepper_image";
    case AttackKind::Newsprint: return "newsprint";
    case AttackKind::Spread: return "spread";
    case AttackKind::AddPlusSaltPepperImage: return "add_saltpepper_image";
  }
  return "?";
}

inline AttackKind attack_kind_from_name(const std::string& s) {
  for (AttackKind k : {AttackKind::AddToken, AttackKind::BlurText,
                       AttackKind::SaltPepperText, AttackKind::SaltPepperImage,
                       AttackKind::Newsprint, AttackKind::Spread,
                       AttackKind::AddPlusSaltPepperImage}) {
    if (s == attack_kind_name(k)) return k;
  }
  throw Error(ErrorCode::ParseError, "unknown attack kind '" + s + "'");
}

inline nlohmann::json attack_spec_to_json(const AttackSpec& s) {
  nlohmann::json j;
  j["kind"] = attack_kind_name(s.kind);
  j["intensity"] = s.intensity
                       ? nlohmann::json(*s.intensity == Intensity::High ? "high" : "low")
                       : nlohmann::json(nullptr);
  j["token"] = s.token;
  j["font_px"] = s.font_px;
  j["density"] = s.density;
  j["radius"] = s.radius;
  j["cell_px"] = s.cell_px;
  j["kernel"] = s.kernel;
  j["seed"] = s.seed;
  return j;
}

inline AttackSpec attack_spec_from_json(const nlohmann::json& j) {
  AttackSpec s;
  s.kind = attack_kind_from_name(j.at("kind").get<std::string>());
  if (j.contains("intensity") && !j.at("intensity").is_null()) {
    s.intensity = j.at("intensity").get<std::string>() == "high" ? Intensity::High
                                                                 : Intensity::Low;
  }
  if (j.contains("token")) s.token = j.at("token").get<std::string>();
  if (j.contains("font_px")) s.font_px = j.at("font_px").get<int>();
  if (j.contains("density")) s.density = j.at("density").get<double>();
  if (j.contains("radius")) s.radius = j.at("radius").get<int>();
  if (j.contains("cell_px")) s.cell_px = j.at("cell_px").get<int>();
  if (j.contains("kernel")) s.kernel = j.at("kernel").get<int>();
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

// ---------------------------------------------------------------------------
// Poison manifest

enum class EntryStatus { Ok, Warning, Error };

struct PoisonEntry {
  std::string image_id;
  std::string attack_kind;  // battery name, or "original"
  std::string output_path;  // relative to the output directory
  std::string sha256;
  nlohmann::json params_used;
  EntryStatus status = EntryStatus::Ok;
  std::string message;
};

struct PoisonManifest {
  std::string dataset_id;
  std::uint64_t global_seed = 0;
  std::vector<AttackSpec> attacks;
  std::vector<PoisonEntry> entries;
  std::string tool_version = MEMEKIT_VERSION;
};

inline const char* entry_status_name(EntryStatus s) {
  switch (s) {
    case EntryStatus::Ok: return "ok";
    case EntryStatus::Warning: return "warning";
    case EntryStatus::Error: return "error";
  }
  return "?";
}

inline nlohmann::json poison_manifest_to_json(const PoisonManifest& m) {
  nlohmann::json j;
  j["dataset_id"] = m.dataset_id;
  j["global_seed"] = m.global_seed;
  j["tool_version"] = m.tool_version;
  j["attacks"] = nlohmann::json::array();
  for (const auto& a : m.attacks) j["attacks"].push_back(attack_spec_to_json(a));
  j["entries"] = nlohmann::json::array();
  for (const auto& e : m.entries) {
    nlohmann::json je{{"image_id", e.image_id},
                      {"attack_kind", e.attack_kind},
                      {"output_path", e.output_path},
                      {"sha256", e.sha256},
                      {"params_used", e.params_used},
                      {"status", entry_status_name(e.status)}};
    if (!e.message.empty()) je["message"] = e.message;
    j["entries"].push_back(std::move(je));
  }
  return j;
}

inline PoisonManifest poison_manifest_from_json(const nlohmann::json& j) {
  PoisonManifest m;
  m.dataset_id = j.at("dataset_id").get<std::string>();
  m.global_seed = j.at("global_seed").get<std::uint64_t>();
  m.tool_version = j.value("tool_version", "");
  for (const auto& ja : j.at("attacks")) {
    m.attacks.push_back(attack_spec_from_json(ja));
  }
  for (const auto& je : j.at("entries")) {
    PoisonEntry e;
    e.image_id = je.at("image_id").get<std::string>();
    e.attack_kind = je.at("attack_kind").get<std::string>();
    e.output_path = je.at("output_path").get<std::string>();
    e.sha256 = je.at("sha256").get<std::string>();
    e.params_used = je.value("params_used", nlohmann::json(nullptr));
    const std::string st = je.value("status", "ok");
    e.status = st == "ok"        ? EntryStatus::Ok
               : st == "warning" ? EntryStatus::Warning
                                 : EntryStatus::Error;
    e.message = je.value("message", "");
    m.entries.push_back(std::move(e));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Region sources

struct RegionsNone {};
struct RegionsFromManifest {
  RegionManifest manifest;
};
struct RegionsBands {
  double fraction = 0.2;
};
using RegionSource = std::variant<RegionsNone, RegionsFromManifest, RegionsBands>;

/// Boxes for one image, or nullopt when the source has none for it.
inline std::optional<std::vector<BoundingBox>> resolve_regions(
    const RegionSource& source, const std::string& image_id, const RasterImage& img) {
  if (std::holds_alternative<RegionsNone>(source)) return std::nullopt;
  if (const auto* bands = std::get_if<RegionsBands>(&source)) {
    return heuristic_bands(img, bands->fraction, image_id).boxes;
  }
  const auto& manifest = std::get<RegionsFromManifest>(source).manifest;
  auto it = manifest.find(image_id);
  if (it == manifest.end() || it->second.boxes.empty()) return std::nullopt;
  return it->second.boxes;
}

// ---------------------------------------------------------------------------
// Poisoning

struct PoisonOptions {
  std::string dataset_id = "dataset";
  int jobs = 1;
};

inline std::vector<std::filesystem::path> list_dataset_images(
    const std::filesystem::path& input_dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(input_dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

/// Apply the attack battery to every image under input_dir. Output layout is
/// one subdirectory per attack plus an `originals` byte-for-byte copy. The
/// per-image seed is hash_seed(global_seed, image_id + "/" + attack_name), so
/// outputs do not depend on traversal order or worker count. The manifest is
/// written atomically last.
inline PoisonManifest poison_dataset(const std::filesystem::path& input_dir,
                                     const RegionSource& regions_source,
                                     const std::vector<AttackSpec>& attack_list,
                                     std::uint64_t global_seed,
                                     const std::filesystem::path& output_dir,
                                     const PoisonOptions& options = {}) {
  const auto files = list_dataset_images(input_dir);

  std::filesystem::create_directories(output_dir / "originals");
  for (const auto& spec : attack_list) {
    std::filesystem::create_directories(output_dir / spec.name());
  }

  struct Task {
    std::size_t file_index;
    int attack_index;  // -1 = originals copy
  };
  std::vector<Task> tasks;
  for (std::size_t f = 0; f < files.size(); ++f) {
    tasks.push_back({f, -1});
    for (int a = 0; a < static_cast<int>(attack_list.size()); ++a) {
      tasks.push_back({f, a});
    }
  }

  std::vector<PoisonEntry> entries(tasks.size());
  std::atomic<std::size_t> next{0};

  auto run_task = [&](const Task& task, PoisonEntry& entry) {
    const auto& file = files[task.file_index];
    const std::string image_id = file.stem().string();
    entry.image_id = image_id;
    if (task.attack_index < 0) {
      entry.attack_kind = "original";
      entry.output_path = "originals/" + file.filename().string();
      const auto bytes = read_file_bytes(file);
      write_file_bytes(output_dir / entry.output_path, bytes);
      entry.sha256 = sha256_hex(bytes);
      return;
    }
    AttackSpec spec = attack_list[task.attack_index];
    entry.attack_kind = spec.name();
    entry.output_path = spec.name() + "/" + image_id + ".png";
    spec.seed = hash_seed(global_seed, image_id + "/" + spec.name());

    RasterImage img = decode_image(file);
    std::vector<BoundingBox> boxes;
    if (attack_needs_regions(spec.kind)) {
      auto resolved = resolve_regions(regions_source, image_id, img);
      if (!resolved) {
        // No text regions known: pass the image through unchanged.
        entry.status = EntryStatus::Warning;
        entry.message = "no regions for region-scoped attack; image passed through";
      } else {
        boxes = std::move(*resolved);
      }
    }
    RasterImage out =
        entry.status == EntryStatus::Warning ? img : apply_attack(img, spec, boxes);
    const auto bytes = encode_png(out);
    write_file_bytes(output_dir / entry.output_path, bytes);
    entry.sha256 = sha256_hex(bytes);
    entry.params_used = attack_spec_to_json(spec);
  };

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      PoisonEntry& entry = entries[i];
      try {
        run_task(tasks[i], entry);
      } catch (const std::exception& e) {
        entry.image_id = files[tasks[i].file_index].stem().string();
        entry.attack_kind = tasks[i].attack_index < 0
                                ? "original"
                                : attack_list[tasks[i].attack_index].name();
        entry.status = EntryStatus::Error;
        entry.message = e.what();
      }
    }
  };

  const int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::sort(entries.begin(), entries.end(), [](const PoisonEntry& a, const PoisonEntry& b) {
    return std::tie(a.image_id, a.attack_kind) < std::tie(b.image_id, b.attack_kind);
  });

  PoisonManifest manifest;
  manifest.dataset_id = options.dataset_id;
  manifest.global_seed = global_seed;
  manifest.attacks = attack_list;
  manifest.entries = std::move(entries);

  const auto manifest_path = output_dir / "manifest.json";
  const auto tmp_path = output_dir / "manifest.json.tmp";
  {
    std::ofstream out(tmp_path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp_path.string());
    out << poison_manifest_to_json(manifest).dump(2) << "\n";
  }
  std::filesystem::rename(tmp_path, manifest_path);
  return manifest;
}

// ---------------------------------------------------------------------------
// Verification

enum class VerifyStatus { Ok, Mismatch, Missing };

struct VerifyResult {
  std::string image_id;
  std::string attack_kind;
  std::string output_path;
  VerifyStatus status = VerifyStatus::Ok;
};

struct VerifyReport {
  std::vector<VerifyResult> results;
  std::size_t ok = 0;
  std::size_t mismatch = 0;
  std::size_t missing = 0;

  bool all_ok() const { return mismatch == 0 && missing == 0; }
};

inline PoisonManifest load_poison_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    return poison_manifest_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

/// Recompute every entry checksum against the output tree.
inline VerifyReport verify_manifest(const std::filesystem::path& manifest_path,
                                    const std::filesystem::path& output_dir) {
  const PoisonManifest manifest = load_poison_manifest(manifest_path);
  VerifyReport report;
  for (const auto& e : manifest.entries) {
    if (e.status == EntryStatus::Error) continue;  // nothing was written
    VerifyResult r{e.image_id, e.attack_kind, e.output_path, VerifyStatus::Ok};
    const auto path = output_dir / e.output_path;
    if (!std::filesystem::exists(path)) {
      r.status = VerifyStatus::Missing;
      ++report.missing;
    } else if (sha256_hex(read_file_bytes(path)) != e.sha256) {
      r.status = VerifyStatus::Mismatch;
      ++report.mismatch;
    } else {
      ++report.ok;
    }
    report.results.push_back(std::move(r));
  }
  return report;
}

}  // namespace memekit

#endif  // MEMEKIT_PIPELINE_HPP
