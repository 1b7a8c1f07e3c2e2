#ifndef MEMEKIT_REGIONS_HPP
#define MEMEKIT_REGIONS_HPP

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "memekit/codec.hpp"
#include "memekit/errors.hpp"
#include "memekit/image.hpp"

namespace memekit {

/// Text bounding boxes for one image, typically OCR output.
struct RegionSet {
  std::string image_id;
  std::vector<BoundingBox> boxes;
  std::optional<std::string> recognized_text;

  bool operator==(const RegionSet&) const = default;
};

using RegionManifest = std::map<std::string, RegionSet>;

inline nlohmann::json region_set_to_json(const RegionSet& rs) {
  nlohmann::json j;
  j["image_id"] = rs.image_id;
  j["boxes"] = nlohmann::json::array();
  for (const auto& b : rs.boxes) {
    j["boxes"].push_back({{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}});
  }
  j["text"] = rs.recognized_text ? nlohmann::json(*rs.recognized_text)
                                 : nlohmann::json(nullptr);
  return j;
}

inline RegionSet region_set_from_json(const nlohmann::json& j) {
  RegionSet rs;
  rs.image_id = j.at("image_id").get<std::string>();
  if (rs.image_id.empty()) {
    throw Error(ErrorCode::ParseError, "empty image_id");
  }
  for (const auto& jb : j.at("boxes")) {
    BoundingBox b{jb.at("x").get<int>(), jb.at("y").get<int>(),
                  jb.at("w").get<int>(), jb.at("h").get<int>()};
    if (b.w < 1 || b.h < 1) {
      throw Error(ErrorCode::InvalidBox,
                  "box for '" + rs.image_id + "' has non-positive extent");
    }
    rs.boxes.push_back(b);
  }
  if (j.contains("text") && !j.at("text").is_null()) {
    rs.recognized_text = j.at("text").get<std::string>();
  }
  return rs;
}

/// Load a JSON-lines region manifest: one RegionSet object per line.
inline RegionManifest load_region_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  RegionManifest out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError,
                  path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    RegionSet rs;
    try {
      rs = region_set_from_json(j);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError,
                  path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!out.emplace(rs.image_id, rs).second) {
      throw Error(ErrorCode::DuplicateId, "duplicate image_id '" + rs.image_id + "'");
    }
  }
  return out;
}

inline void save_region_manifest(const RegionManifest& manifest,
                                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  for (const auto& [id, rs] : manifest) {
    out << region_set_to_json(rs).dump() << "\n";
  }
}

/// Run an external OCR process (command template with an {image} placeholder)
/// and parse the single RegionSet JSON object it prints on stdout. Boxes are
/// validated against the decoded image.
inline RegionSet ocr_via_external(const std::string& command_template,
                                  const std::filesystem::path& image_path) {
  const std::string placeholder = "{image}";
  auto pos = command_template.find(placeholder);
  if (pos == std::string::npos) {
    throw Error(ErrorCode::ParseError, "command template lacks {image} placeholder");
  }
  std::string cmd = command_template;
  cmd.replace(pos, placeholder.size(), "'" + image_path.string() + "'");

  const auto stderr_path =
      std::filesystem::temp_directory_path() /
      ("memekit_ocr_" + std::to_string(::getpid()) + ".stderr");
  cmd += " 2>'" + stderr_path.string() + "'";

  std::string output;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) throw Error(ErrorCode::OcrProcessFailed, "popen failed");
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) {
    output.append(buf, n);
  }
  const int status = ::pclose(pipe);

  std::string err_excerpt;
  {
    std::ifstream es(stderr_path);
    if (es) {
      std::ostringstream ss;
      ss << es.rdbuf();
      err_excerpt = ss.str().substr(0, 512);
    }
    std::error_code ec;
    std::filesystem::remove(stderr_path, ec);
  }

  if (status != 0) {
    throw Error(ErrorCode::OcrProcessFailed,
                "exit status " + std::to_string(status) +
                    (err_excerpt.empty() ? "" : ("; stderr: " + err_excerpt)));
  }
  RegionSet rs;
  try {
    rs = region_set_from_json(nlohmann::json::parse(output));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("OCR output: ") + e.what());
  }
  RasterImage img = decode_image(image_path);
  for (const auto& b : rs.boxes) {
    if (!b.inside(img)) {
      throw Error(ErrorCode::InvalidBox,
                  "OCR box outside " + std::to_string(img.width) + "x" +
                      std::to_string(img.height) + " image");
    }
  }
  return rs;
}

/// Fallback when no OCR is available: top and bottom caption bands.
inline RegionSet heuristic_bands(const RasterImage& img, double band_fraction = 0.2,
                                 const std::string& image_id = "") {
  if (!(band_fraction > 0.0 && band_fraction <= 0.5)) {
    throw Error(ErrorCode::InvalidFraction,
                "band_fraction " + std::to_string(band_fraction) + " not in (0, 0.5]");
  }
  const int band_h =
      std::max(1, static_cast<int>(std::lround(band_fraction * img.height)));
  RegionSet rs;
  rs.image_id = image_id;
  rs.boxes.push_back({0, 0, img.width, band_h});
  rs.boxes.push_back({0, img.height - band_h, img.width, band_h});
  return rs;
}

}  // namespace memekit

#endif  // MEMEKIT_REGIONS_HPP
