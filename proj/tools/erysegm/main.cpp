// erysegm: erythema segmentation against a synthesised clear-skin reference.
//
//   erysegm pipeline  --input a.png [--reference b.png] [--labelmask m.png] --out-dir o/
//   erysegm align     --input a.png --reference b.png --out-dir o/
//   erysegm segment   --input a.png --reference aligned.png (--mask m.png | --labelmask l.png)
//   erysegm synth     --input a.png --adapter-command CMD --out-dir o/
//   erysegm histogram --delta-map o/delta_a.dmap --k 2.0 --out-dir o2/
//
// Exit status: 0 ok, 1 config/usage, 2 io, 3 adapter, 4 alignment,
// 5 masking, 6 segmentation.

#include <cstring>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "erysegm/config.hpp"
#include "erysegm/error.hpp"
#include "erysegm/pipeline.hpp"

using namespace erysegm;

namespace {

// --config is read before the real parse so that flags can override it.
std::string find_config_arg(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) return argv[i + 1];
    if (std::strncmp(argv[i], "--config=", 9) == 0) return argv[i] + 9;
  }
  return {};
}

struct Flags {
  std::string overlay_color;
  bool no_skin_mask = false;
  std::string config_file;
};

void add_common(CLI::App* app, PipelineConfig& c, Flags& f) {
  app->add_option("--out-dir", c.out_dir, "Directory for artifacts and report.json")
      ->capture_default_str();
  app->add_option("--config", f.config_file, "JSON config file (kebab-case keys)");
}

void add_align_flags(CLI::App* app, PipelineConfig& c) {
  app->add_option("--ratio-max", c.ratio_max, "Descriptor ratio-test bound")->capture_default_str();
  app->add_option("--inlier-px", c.inlier_px, "RANSAC inlier threshold (px)")
      ->capture_default_str();
  app->add_option("--ransac-iters", c.ransac_iters, "RANSAC iteration cap")->capture_default_str();
  app->add_option("--seed", c.seed, "RANSAC seed")->capture_default_str();
  app->add_option("--max-keypoints", c.max_keypoints, "Keypoint budget per image")
      ->capture_default_str();
  app->add_option("--crop-coverage", c.crop_coverage, "Minimum valid fraction of the crop")
      ->capture_default_str();
}

void add_segment_flags(CLI::App* app, PipelineConfig& c, Flags& f) {
  app->add_option("--k", c.k, "Threshold multiplier: tau = mu + k*sigma")->capture_default_str();
  app->add_option("--open-radius", c.open_radius)->capture_default_str();
  app->add_option("--close-radius", c.close_radius)->capture_default_str();
  app->add_option("--min-area-fraction", c.min_area_fraction,
                  "Smallest kept component, as a fraction of the domain")
      ->capture_default_str();
  app->add_option("--histogram-bins", c.histogram_bins)->capture_default_str();
  app->add_option("--overlay-color", f.overlay_color, "Overlay colour r,g,b");
  app->add_option("--overlay-alpha", c.overlay_alpha)->capture_default_str();
}

void add_mask_flags(CLI::App* app, PipelineConfig& c, Flags& f) {
  app->add_option("--labelmask", c.labelmask, "Face-parsing label map (8-bit ids)");
  app->add_option("--class-map", c.class_map, "Class-name table for the label map");
  app->add_flag("--no-skin-mask", f.no_skin_mask, "Analyse every pixel");
  app->add_option("--max-unknown-label-fraction", c.max_unknown_label_fraction)
      ->capture_default_str();
}

void add_adapter_flags(CLI::App* app, PipelineConfig& c) {
  app->add_option("--adapter-command", c.adapter.command, "Synthesizer adapter command");
  app->add_option("--source-prompt", c.adapter.source_prompt);
  app->add_option("--edit-prompt", c.adapter.edit_prompt);
  app->add_option("--steps", c.adapter.steps)->capture_default_str();
  app->add_option("--guidance", c.adapter.guidance)->capture_default_str();
  app->add_option("--adapter-seed", c.adapter.seed)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  PipelineConfig cfg;
  if (const std::string path = find_config_arg(argc, argv); !path.empty()) {
    try {
      cfg = merge_config_file(cfg, path);
    } catch (const Error& e) {
      std::cerr << "erysegm: config stage: " << e.what() << "\n";
      return 1;
    }
  }
  const bool skin_from_file = cfg.skin_mask;
  Flags flags;

  CLI::App app{"Erythema segmentation by CIELAB a* difference against a clear-skin reference"};
  app.require_subcommand(1);

  auto* pipeline = app.add_subcommand("pipeline", "Full run: synth (if needed), align, segment");
  pipeline->add_option("--input", cfg.input, "Original image")->required();
  pipeline->add_option("--reference", cfg.reference, "Clear-skin reference (else adapter)");
  add_common(pipeline, cfg, flags);
  add_align_flags(pipeline, cfg);
  add_mask_flags(pipeline, cfg, flags);
  add_segment_flags(pipeline, cfg, flags);
  add_adapter_flags(pipeline, cfg);

  auto* align = app.add_subcommand("align", "Register the reference onto the input");
  align->add_option("--input", cfg.input)->required();
  align->add_option("--reference", cfg.reference)->required();
  add_common(align, cfg, flags);
  add_align_flags(align, cfg);

  auto* segment = app.add_subcommand("segment", "Segment an already aligned pair");
  segment->add_option("--input", cfg.input)->required();
  segment->add_option("--reference", cfg.reference, "Aligned reference")->required();
  segment->add_option("--mask", cfg.mask, "Analysis mask PNG (nonzero = analyse)");
  segment->add_option("--valid-mask", cfg.valid_mask, "Alignment-valid mask PNG");
  add_common(segment, cfg, flags);
  add_mask_flags(segment, cfg, flags);
  add_segment_flags(segment, cfg, flags);

  auto* synth = app.add_subcommand("synth", "Run the synthesizer adapter only");
  synth->add_option("--input", cfg.input)->required();
  synth->add_flag("--no-skin-mask", flags.no_skin_mask, "Skip face parsing");
  add_common(synth, cfg, flags);
  add_adapter_flags(synth, cfg);

  auto* hist = app.add_subcommand("histogram", "Re-threshold a stored delta map");
  hist->add_option("--delta-map", cfg.delta_map, "delta_a.dmap from an earlier run")->required();
  hist->add_option("--input", cfg.input, "Original image, for the overlay");
  add_common(hist, cfg, flags);
  add_segment_flags(hist, cfg, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "erysegm: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    std::cerr << (subs.empty() ? app.help() : subs.front()->help());
    return 1;
  }

  try {
    if (!flags.overlay_color.empty()) cfg.overlay_color = parse_rgb(flags.overlay_color);
  } catch (const Error& e) {
    std::cerr << "erysegm: config stage: " << e.what() << "\n";
    return 1;
  }
  cfg.skin_mask = skin_from_file && !flags.no_skin_mask;
  for (auto* sub : {pipeline, synth}) {
    if (sub->parsed() && sub->count("--adapter-command") > 0) cfg.adapter.command_from_cli = true;
  }

  try {
    Report report;
    if (pipeline->parsed()) {
      report = run_pipeline(cfg);
    } else if (align->parsed()) {
      report = run_align(cfg);
    } else if (segment->parsed()) {
      report = run_segment(cfg);
    } else if (synth->parsed()) {
      report = run_synth(cfg);
    } else {
      report = run_histogram(cfg);
    }
    std::cout << report.artifacts.at("report") << "\n";
    if (report.segmentation) {
      const auto& s = *report.segmentation;
      std::cout << "mu=" << s.mu << " sigma=" << s.sigma << " tau=" << s.tau
                << " mask_pixels=" << s.mask_pixels << "/" << s.domain_pixels << "\n";
    }
  } catch (const StageError& e) {
    std::cerr << "erysegm: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "erysegm: unexpected failure: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
