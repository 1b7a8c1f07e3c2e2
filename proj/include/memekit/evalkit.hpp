#ifndef MEMEKIT_EVALKIT_HPP
#define MEMEKIT_EVALKIT_HPP

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "memekit/codec.hpp"
#include "memekit/errors.hpp"

namespace memekit {

/// One scored test item.
struct EvalRecord {
  std::string id;
  int gold = 0;
  int pred = 0;
  std::optional<std::vector<double>> probs;
};

/// Unweighted mean of per-class F1. Per-class precision, recall, and F1 are
/// defined as 0 whenever their denominator is 0.
inline double macro_f1(const std::vector<EvalRecord>& records, int n_classes = 2) {
  if (records.empty()) throw Error(ErrorCode::EmptyEval, "no records");
  if (n_classes < 1) throw Error(ErrorCode::InvalidLabel, "n_classes must be >= 1");
  std::vector<long long> tp(n_classes, 0), fp(n_classes, 0), fn(n_classes, 0);
  for (const auto& r : records) {
    if (r.gold < 0 || r.gold >= n_classes || r.pred < 0 || r.pred >= n_classes) {
      throw Error(ErrorCode::InvalidLabel,
                  "record '" + r.id + "' has label outside [0," +
                      std::to_string(n_classes) + ")");
    }
    if (r.pred == r.gold) {
      ++tp[r.gold];
    } else {
      ++fp[r.pred];
      ++fn[r.gold];
    }
  }
  double sum = 0.0;
  for (int c = 0; c < n_classes; ++c) {
    const double p_den = static_cast<double>(tp[c] + fp[c]);
    const double r_den = static_cast<double>(tp[c] + fn[c]);
    const double precision = p_den > 0 ? tp[c] / p_den : 0.0;
    const double recall = r_den > 0 ? tp[c] / r_den : 0.0;
    const double f_den = precision + recall;
    sum += f_den > 0 ? 2.0 * precision * recall / f_den : 0.0;
  }
  return sum / n_classes;
}

inline void require_percent(double v, const char* what) {
  if (!(v >= 0.0 && v <= 100.0)) {
    throw Error(ErrorCode::InvalidScore,
                std::string(what) + " = " + std::to_string(v) + " outside [0,100]");
  }
}

/// Macro-F1 drop in percentage points; positive means the attack hurt.
inline double attack_delta(double f1_before, double f1_after) {
  require_percent(f1_before, "f1_before");
  require_percent(f1_after, "f1_after");
  return f1_before - f1_after;
}

/// Countermeasure report tuple:
///   x = attacked score without countermeasure minus with countermeasure
///       (negative = the countermeasure helps)
///   y = remaining gap to the unattacked score, clamped at 0 from above
///       (0 = fully recovered).
inline std::pair<double, double> countermeasure_xy(double f1_unattacked,
                                                   double f1_attacked_nocm,
                                                   double f1_attacked_cm) {
  require_percent(f1_unattacked, "f1_unattacked");
  require_percent(f1_attacked_nocm, "f1_attacked_nocm");
  require_percent(f1_attacked_cm, "f1_attacked_cm");
  const double x = f1_attacked_nocm - f1_attacked_cm;
  const double y = std::min(0.0, f1_attacked_cm - f1_unattacked);
  return {x, y};
}

/// Mean bits-per-pixel over files, as recorded in container metadata.
inline double bit_depth_stats(const std::vector<std::filesystem::path>& image_paths) {
  if (image_paths.empty()) throw Error(ErrorCode::EmptyEval, "no images");
  double sum = 0.0;
  for (const auto& p : image_paths) sum += file_bit_depth(p);
  return sum / static_cast<double>(image_paths.size());
}

// ---------------------------------------------------------------------------
// Report tables

/// Either an attack delta or a countermeasure (x, y) tuple.
using ReportCell = std::variant<double, std::pair<double, double>>;

struct ReportTable {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<ReportCell>> cells;  // cells[row][col]

  void validate() const {
    if (cells.size() != row_labels.size()) {
      throw Error(ErrorCode::ShapeError, "row label / body mismatch");
    }
    for (const auto& row : cells) {
      if (row.size() != col_labels.size()) {
        throw Error(ErrorCode::ShapeError, "ragged report grid");
      }
    }
  }
};

/// Column-wise arithmetic mean of the body rows. For tuple cells both
/// components are averaged.
inline std::vector<ReportCell> average_row(const ReportTable& t) {
  t.validate();
  if (t.cells.empty()) throw Error(ErrorCode::ShapeError, "empty report");
  std::vector<ReportCell> avg;
  const double n = static_cast<double>(t.cells.size());
  for (std::size_t col = 0; col < t.col_labels.size(); ++col) {
    const bool tuple = std::holds_alternative<std::pair<double, double>>(t.cells[0][col]);
    double sx = 0.0, sy = 0.0;
    for (const auto& row : t.cells) {
      if (std::holds_alternative<std::pair<double, double>>(row[col]) != tuple) {
        throw Error(ErrorCode::ShapeError, "mixed cell kinds within a column");
      }
      if (tuple) {
        const auto& [x, y] = std::get<std::pair<double, double>>(row[col]);
        sx += x;
        sy += y;
      } else {
        sx += std::get<double>(row[col]);
      }
    }
    if (tuple) {
      avg.emplace_back(std::make_pair(sx / n, sy / n));
    } else {
      avg.emplace_back(sx / n);
    }
  }
  return avg;
}

inline std::string format_cell(const ReportCell& c) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  if (std::holds_alternative<double>(c)) {
    const double d = std::get<double>(c);
    os << std::showpos << d;
  } else {
    const auto& [x, y] = std::get<std::pair<double, double>>(c);
    os << "(" << x << ", " << y << ")";
  }
  return os.str();
}

/// Aligned text rendering with a trailing Average row.
inline std::string render_report_text(const ReportTable& t) {
  t.validate();
  const auto avg = average_row(t);

  std::vector<std::string> names = t.row_labels;
  names.push_back("Average");
  std::vector<std::vector<std::string>> body;
  for (const auto& row : t.cells) {
    std::vector<std::string> r;
    for (const auto& c : row) r.push_back(format_cell(c));
    body.push_back(std::move(r));
  }
  {
    std::vector<std::string> r;
    for (const auto& c : avg) r.push_back(format_cell(c));
    body.push_back(std::move(r));
  }

  std::size_t name_w = 0;
  for (const auto& n : names) name_w = std::max(name_w, n.size());
  std::vector<std::size_t> col_w(t.col_labels.size());
  for (std::size_t c = 0; c < col_w.size(); ++c) {
    col_w[c] = t.col_labels[c].size();
    for (const auto& row : body) col_w[c] = std::max(col_w[c], row[c].size());
  }

  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(name_w)) << "";
  for (std::size_t c = 0; c < col_w.size(); ++c) {
    os << "  " << std::right << std::setw(static_cast<int>(col_w[c])) << t.col_labels[c];
  }
  os << "\n";
  for (std::size_t r = 0; r < body.size(); ++r) {
    os << std::left << std::setw(static_cast<int>(name_w)) << names[r];
    for (std::size_t c = 0; c < col_w.size(); ++c) {
      os << "  " << std::right << std::setw(static_cast<int>(col_w[c])) << body[r][c];
    }
    os << "\n";
  }
  return os.str();
}

inline nlohmann::json report_to_json(const ReportTable& t) {
  t.validate();
  nlohmann::json j;
  j["rows"] = t.row_labels;
  j["cols"] = t.col_labels;
  j["cells"] = nlohmann::json::array();
  for (const auto& row : t.cells) {
    nlohmann::json jr = nlohmann::json::array();
    for (const auto& c : row) {
      if (std::holds_alternative<double>(c)) {
        jr.push_back(std::get<double>(c));
      } else {
        const auto& [x, y] = std::get<std::pair<double, double>>(c);
        jr.push_back({x, y});
      }
    }
    j["cells"].push_back(std::move(jr));
  }
  nlohmann::json javg = nlohmann::json::array();
  for (const auto& c : average_row(t)) {
    if (std::holds_alternative<double>(c)) {
      javg.push_back(std::get<double>(c));
    } else {
      const auto& [x, y] = std::get<std::pair<double, double>>(c);
      javg.push_back({x, y});
    }
  }
  j["average"] = std::move(javg);
  return j;
}

inline ReportTable report_from_json(const nlohmann::json& j) {
  ReportTable t;
  t.row_labels = j.at("rows").get<std::vector<std::string>>();
  t.col_labels = j.at("cols").get<std::vector<std::string>>();
  for (const auto& jr : j.at("cells")) {
    std::vector<ReportCell> row;
    for (const auto& jc : jr) {
      if (jc.is_array()) {
        row.emplace_back(std::make_pair(jc.at(0).get<double>(), jc.at(1).get<double>()));
      } else {
        row.emplace_back(jc.get<double>());
      }
    }
    t.cells.push_back(std::move(row));
  }
  t.validate();
  return t;
}

// ---------------------------------------------------------------------------
// Predictions file IO (JSON-lines: {"id", "gold", "pred", "probs"?})

inline std::vector<EvalRecord> load_eval_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<EvalRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      EvalRecord r;
      r.id = j.at("id").get<std::string>();
      r.gold = j.at("gold").get<int>();
      r.pred = j.at("pred").get<int>();
      if (j.contains("probs") && !j.at("probs").is_null()) {
        r.probs = j.at("probs").get<std::vector<double>>();
      }
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError,
                  path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace memekit

#endif  // MEMEKIT_EVALKIT_HPP
