// memekit command line: adversarial meme perturbation, contrastive-learning
// countermeasure kernels, and robustness evaluation reports.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "memekit/memekit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitUsage = 2;

memekit::AttackSpec spec_for_name(const std::string& name,
                                  const memekit::AttackDefaults& defaults) {
  for (auto& spec : memekit::default_battery(defaults)) {
    if (spec.name() == name) return spec;
  }
  throw memekit::Error(memekit::ErrorCode::ParseError,
                       "unknown attack name '" + name + "'");
}

memekit::RegionSource make_region_source(const std::string& arg, double band_fraction) {
  if (arg.empty() || arg == "none") return memekit::RegionsNone{};
  if (arg == "bands") return memekit::RegionsBands{band_fraction};
  return memekit::RegionsFromManifest{memekit::load_region_manifest(arg)};
}

std::vector<memekit::BoundingBox> regions_for_image(const memekit::RegionSource& source,
                                                    const std::string& image_id,
                                                    const memekit::RasterImage& img) {
  auto resolved = memekit::resolve_regions(source, image_id, img);
  return resolved ? *resolved : std::vector<memekit::BoundingBox>{};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarial meme perturbation and robustness evaluation toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string config_path;
  std::string format = "text";
  int jobs = 1;
  app.add_option("--seed", seed, "Global RNG seed");
  app.add_option("--config", config_path, "Config file (TOML or JSON)");
  app.add_option("--format", format, "Output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.fallthrough();  // accept the global options after a subcommand name too

  // --- attack ---------------------------------------------------------------
  auto* attack = app.add_subcommand("attack", "Apply one attack to one image");
  std::string atk_in, atk_out, atk_kind, atk_regions, atk_image_id;
  std::optional<std::string> atk_token;
  std::optional<double> atk_density;
  std::optional<int> atk_font_px, atk_radius, atk_cell, atk_kernel;
  attack->add_option("--in", atk_in, "Input image (PNG or JPEG)")->required();
  attack->add_option("--out", atk_out, "Output image (PNG)")->required();
  attack
      ->add_option("--kind", atk_kind,
                   "Attack: add, blur, saltpepper_t, saltpepper_i_low, "
                   "saltpepper_i_high, newsprint, spread_low, spread_high, "
                   "add_saltpepper_i")
      ->required();
  attack->add_option("--regions", atk_regions,
                     "Region manifest path, 'bands', or 'none'");
  attack->add_option("--image-id", atk_image_id, "Image id for manifest lookup");
  attack->add_option("--token", atk_token, "Token to stamp");
  attack->add_option("--font-px", atk_font_px, "Token glyph height in pixels");
  attack->add_option("--density", atk_density, "Salt-pepper density in [0,1]");
  attack->add_option("--radius", atk_radius, "Spread radius in pixels");
  attack->add_option("--cell", atk_cell, "Newsprint cell size in pixels");
  attack->add_option("--kernel", atk_kernel, "Blur kernel size (odd)");

  // --- poison ---------------------------------------------------------------
  auto* poison = app.add_subcommand("poison", "Run the attack battery over a dataset");
  std::string poi_in, poi_out, poi_regions = "none", poi_dataset = "dataset";
  std::vector<std::string> poi_attacks;
  poison->add_option("--input-dir", poi_in, "Directory of input images")->required();
  poison->add_option("--output-dir", poi_out, "Output directory")->required();
  poison->add_option("--regions", poi_regions,
                     "Region manifest path, 'bands', or 'none'");
  poison->add_option("--attacks", poi_attacks,
                     "Attack names (default: the full nine-attack battery)");
  poison->add_option("--dataset-id", poi_dataset, "Dataset id for the manifest");

  // --- augment --------------------------------------------------------------
  auto* augment = app.add_subcommand("augment", "Generate one contrastive training view");
  std::string aug_in, aug_out, aug_text;
  augment->add_option("--in", aug_in, "Input image")->required();
  augment->add_option("--out", aug_out, "Augmented image output (PNG)")->required();
  augment->add_option("--text", aug_text, "Caption text to augment")->required();

  // --- loss -----------------------------------------------------------------
  auto* loss = app.add_subcommand("loss", "Contrastive loss over an embedding file");
  std::string loss_file;
  std::optional<double> loss_tau;
  loss->add_option("--embeddings", loss_file, "Embedding JSONL file")->required();
  loss->add_option("--tau", loss_tau, "Temperature (> 0)");

  // --- perturb --------------------------------------------------------------
  auto* perturb = app.add_subcommand("perturb", "Noisy copies of an embedding vector");
  std::string per_in, per_kind = "gaussian";
  double per_magnitude = 0.0;
  std::size_t per_count = 3;
  perturb->add_option("--in", per_in, "JSON file holding {\"z\": [floats]}")->required();
  perturb->add_option("--kind", per_kind, "uniform or gaussian")
      ->check(CLI::IsMember({"uniform", "gaussian"}));
  perturb->add_option("--magnitude", per_magnitude, "eps (uniform) or sigma (gaussian)")
      ->required();
  perturb->add_option("--count", per_count, "Number of draws");

  // --- eval -----------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "Macro-F1 over a predictions file");
  std::string eval_file;
  int eval_classes = 2;
  eval->add_option("--predictions", eval_file, "Predictions JSONL file")->required();
  eval->add_option("--classes", eval_classes, "Number of classes");

  // --- report ---------------------------------------------------------------
  auto* report = app.add_subcommand("report", "Render a report table");
  std::string rep_in;
  report->add_option("--in", rep_in, "Report grid JSON file")->required();

  // --- stats ----------------------------------------------------------------
  auto* stats = app.add_subcommand("stats", "Average bit depth of image files");
  std::vector<std::string> stats_files;
  stats->add_option("images", stats_files, "Image files")->required();

  // --- verify ---------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "Verify a poison manifest");
  std::string ver_manifest, ver_dir;
  verify->add_option("--manifest", ver_manifest, "manifest.json path")->required();
  verify->add_option("--dir", ver_dir, "Poisoned output directory")->required();

  // --- ocr ------------------------------------------------------------------
  auto* ocr = app.add_subcommand("ocr", "Run an external OCR command for one image");
  std::string ocr_cmd, ocr_image;
  ocr->add_option("--command", ocr_cmd, "Command template with {image} placeholder")
      ->required();
  ocr->add_option("--image", ocr_image, "Image path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    memekit::ToolConfig cfg;
    if (!config_path.empty()) cfg = memekit::load_config(config_path);

    if (*attack) {
      memekit::AttackSpec spec = spec_for_name(atk_kind, cfg.attacks);
      spec.seed = seed;
      if (atk_token) spec.token = *atk_token;
      if (atk_font_px) spec.font_px = *atk_font_px;
      if (atk_density) spec.density = *atk_density;
      if (atk_radius) spec.radius = *atk_radius;
      if (atk_cell) spec.cell_px = *atk_cell;
      if (atk_kernel) spec.kernel = *atk_kernel;

      const auto img = memekit::decode_image(atk_in);
      const std::string image_id =
          atk_image_id.empty() ? fs::path(atk_in).stem().string() : atk_image_id;
      const auto source = make_region_source(atk_regions, cfg.band_fraction);
      const auto boxes = regions_for_image(source, image_id, img);
      memekit::save_png(memekit::apply_attack(img, spec, boxes), atk_out);
      if (format == "json") {
        std::cout << json{{"output", atk_out},
                          {"params", memekit::attack_spec_to_json(spec)}}
                         .dump()
                  << "\n";
      }
      return kExitOk;
    }

    if (*poison) {
      std::vector<memekit::AttackSpec> battery;
      if (poi_attacks.empty()) {
        battery = memekit::default_battery(cfg.attacks);
      } else {
        for (const auto& name : poi_attacks) {
          battery.push_back(spec_for_name(name, cfg.attacks));
        }
      }
      memekit::PoisonOptions opts;
      opts.dataset_id = poi_dataset;
      opts.jobs = jobs;
      const auto source = make_region_source(poi_regions, cfg.band_fraction);
      const auto manifest =
          memekit::poison_dataset(poi_in, source, battery, seed, poi_out, opts);
      std::size_t errors = 0, warnings = 0;
      for (const auto& e : manifest.entries) {
        if (e.status == memekit::EntryStatus::Error) ++errors;
        if (e.status == memekit::EntryStatus::Warning) ++warnings;
      }
      if (format == "json") {
        std::cout << json{{"entries", manifest.entries.size()},
                          {"errors", errors},
                          {"warnings", warnings}}
                         .dump()
                  << "\n";
      } else {
        std::cout << manifest.entries.size() << " entries, " << errors
                  << " errors, " << warnings << " warnings\n";
      }
      return errors > 0 ? kExitPartial : kExitOk;
    }

    if (*augment) {
      const auto img = memekit::decode_image(aug_in);
      const auto pair = memekit::make_pair(img, aug_text, seed, cfg.augment);
      memekit::save_png(pair.image, aug_out);
      std::cout << json{{"text", pair.text},
                        {"choice", memekit::augment_choice_to_json(pair.choice)}}
                       .dump()
                << "\n";
      return kExitOk;
    }

    if (*loss) {
      const auto batch = memekit::load_embedding_batch(loss_file);
      const double tau = loss_tau.value_or(cfg.tau);
      const double value = memekit::nt_xent_loss(batch, tau);
      std::cout << json{{"n_pairs", batch.n_pairs}, {"tau", tau}, {"loss", value}}.dump()
                << "\n";
      return kExitOk;
    }

    if (*perturb) {
      std::ifstream in(per_in);
      if (!in) {
        throw memekit::Error(memekit::ErrorCode::IoError, "cannot open " + per_in);
      }
      json j;
      in >> j;
      const memekit::Vec v = j.at("z").get<memekit::Vec>();
      const memekit::NoiseKind kind =
          per_kind == "uniform"
              ? memekit::NoiseKind{memekit::UniformNoise{per_magnitude}}
              : memekit::NoiseKind{memekit::GaussianNoise{per_magnitude}};
      const auto draws = memekit::perturb_embedding(v, kind, per_count, seed);
      for (std::size_t i = 0; i < draws.size(); ++i) {
        std::cout << json{{"draw", i}, {"z", draws[i]}}.dump() << "\n";
      }
      return kExitOk;
    }

    if (*eval) {
      const auto records = memekit::load_eval_records(eval_file);
      const double f1 = memekit::macro_f1(records, eval_classes);
      if (format == "json") {
        std::cout << json{{"records", records.size()}, {"macro_f1", f1}}.dump() << "\n";
      } else {
        std::cout << "macro-F1 = " << f1 << " over " << records.size() << " records\n";
      }
      return kExitOk;
    }

    if (*report) {
      std::ifstream in(rep_in);
      if (!in) {
        throw memekit::Error(memekit::ErrorCode::IoError, "cannot open " + rep_in);
      }
      json j;
      in >> j;
      const auto table = memekit::report_from_json(j);
      if (format == "json") {
        std::cout << memekit::report_to_json(table).dump(2) << "\n";
      } else {
        std::cout << memekit::render_report_text(table);
      }
      return kExitOk;
    }

    if (*stats) {
      std::vector<fs::path> paths(stats_files.begin(), stats_files.end());
      const double avg = memekit::bit_depth_stats(paths);
      if (format == "json") {
        std::cout << json{{"files", paths.size()}, {"avg_bit_depth", avg}}.dump() << "\n";
      } else {
        std::cout << "average bit depth = " << avg << " over " << paths.size()
                  << " files\n";
      }
      return kExitOk;
    }

    if (*verify) {
      const auto rep = memekit::verify_manifest(ver_manifest, ver_dir);
      for (const auto& r : rep.results) {
        if (r.status != memekit::VerifyStatus::Ok || format == "text") {
          const char* st = r.status == memekit::VerifyStatus::Ok        ? "ok"
                           : r.status == memekit::VerifyStatus::Mismatch ? "mismatch"
                                                                         : "missing";
          std::cout << st << "\t" << r.output_path << "\n";
        }
      }
      std::cout << rep.ok << " ok, " << rep.mismatch << " mismatch, " << rep.missing
                << " missing\n";
      return rep.all_ok() ? kExitOk : kExitPartial;
    }

    if (*ocr) {
      const auto rs = memekit::ocr_via_external(ocr_cmd, ocr_image);
      std::cout << memekit::region_set_to_json(rs).dump() << "\n";
      return kExitOk;
    }
  } catch (const memekit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == memekit::ErrorCode::ParseError ? kExitUsage : kExitPartial;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPartial;
  }
  return kExitUsage;
}
