#ifndef MEMEKIT_CONFIG_HPP
#define MEMEKIT_CONFIG_HPP

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "memekit/attacks.hpp"
#include "memekit/augment.hpp"
#include "memekit/errors.hpp"

namespace memekit {

/// Every declared default in one place; any field may be overridden from a
/// JSON or TOML config file.
struct ToolConfig {
  AttackDefaults attacks;
  AugmentParams augment;
  double band_fraction = 0.2;
  double tau = 0.5;
};

namespace detail {

/// Minimal TOML reader covering the flat [section] key = value subset the
/// config uses: strings, numbers, booleans. Produces the same nested JSON
/// shape as a JSON config file.
inline nlohmann::json parse_config_toml(std::istream& in) {
  nlohmann::json root = nlohmann::json::object();
  nlohmann::json* section = &root;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(ErrorCode::ParseError,
                    "config line " + std::to_string(lineno) + ": bad section header");
      }
      section = &root[trim(line.substr(1, line.size() - 2))];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ParseError,
                  "config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) {
      throw Error(ErrorCode::ParseError,
                  "config line " + std::to_string(lineno) + ": empty key or value");
    }
    if (val.front() == '"' && val.back() == '"' && val.size() >= 2) {
      (*section)[key] = val.substr(1, val.size() - 2);
    } else if (val == "true" || val == "false") {
      (*section)[key] = (val == "true");
    } else {
      try {
        if (val.find_first_of(".eE") != std::string::npos) {
          (*section)[key] = std::stod(val);
        } else {
          (*section)[key] = std::stoll(val);
        }
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError,
                    "config line " + std::to_string(lineno) + ": bad value '" + val + "'");
      }
    }
  }
  return root;
}

template <typename T>
void maybe_set(const nlohmann::json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

}  // namespace detail

inline ToolConfig config_from_json(const nlohmann::json& j) {
  ToolConfig cfg;
  if (j.contains("attacks")) {
    const auto& a = j.at("attacks");
    detail::maybe_set(a, "token", cfg.attacks.token);
    detail::maybe_set(a, "font_px", cfg.attacks.font_px);
    detail::maybe_set(a, "blur_kernel", cfg.attacks.blur_kernel);
    detail::maybe_set(a, "saltpepper_text_density", cfg.attacks.saltpepper_text_density);
    detail::maybe_set(a, "saltpepper_image_low", cfg.attacks.saltpepper_image_low);
    detail::maybe_set(a, "saltpepper_image_high", cfg.attacks.saltpepper_image_high);
    detail::maybe_set(a, "newsprint_cell", cfg.attacks.newsprint_cell);
    detail::maybe_set(a, "spread_low", cfg.attacks.spread_low);
    detail::maybe_set(a, "spread_high", cfg.attacks.spread_high);
  }
  if (j.contains("augment")) {
    const auto& a = j.at("augment");
    detail::maybe_set(a, "blur_kernel", cfg.augment.blur_kernel);
    detail::maybe_set(a, "noise_sigma", cfg.augment.noise_sigma);
    detail::maybe_set(a, "jitter_lo", cfg.augment.jitter_lo);
    detail::maybe_set(a, "jitter_hi", cfg.augment.jitter_hi);
    detail::maybe_set(a, "casing_prob", cfg.augment.casing_prob);
    detail::maybe_set(a, "homoglyph_prob", cfg.augment.homoglyph_prob);
  }
  if (j.contains("regions")) {
    detail::maybe_set(j.at("regions"), "band_fraction", cfg.band_fraction);
  }
  if (j.contains("loss")) {
    detail::maybe_set(j.at("loss"), "tau", cfg.tau);
  }
  return cfg;
}

/// Load a config file; the format is picked by extension (.json vs .toml),
/// defaulting to TOML for anything else.
inline ToolConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  nlohmann::json j;
  if (path.extension() == ".json") {
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
  } else {
    j = detail::parse_config_toml(in);
  }
  return config_from_json(j);
}

}  // namespace memekit

#endif  // MEMEKIT_CONFIG_HPP
