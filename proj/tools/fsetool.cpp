// Copyright (c) 2026 The fse-toolkit authors
// SPDX-License-Identifier: Apache-2.0
//
// fsetool: loss simulation, frequency-selective reconstruction and PSNR
// benchmarking for grayscale images.
//
// Exit codes: 0 success, 2 configuration error, 3 I/O or data error,
// 4 verification failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fse/fse.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitVerify = 4;

int exit_code_for(fse::errc code) {
  switch (code) {
    case fse::errc::bad_argument:
      return kExitConfig;
    case fse::errc::symmetry_violation:
    case fse::errc::realness_violation:
      return kExitVerify;
    default:
      return kExitData;
  }
}

// Seed lists come as "1..10" (inclusive range) or "1,4,9".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  const auto parse_one = [](const std::string& tok) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(tok, &used);
    } catch (const std::exception&) {
      fse::raise(fse::errc::bad_argument, "invalid seed '" + tok + "'");
    }
    if (used != tok.size())
      fse::raise(fse::errc::bad_argument, "invalid seed '" + tok + "'");
    return v;
  };
  const auto range = text.find("..");
  if (range != std::string::npos) {
    const std::uint64_t lo = parse_one(text.substr(0, range));
    const std::uint64_t hi = parse_one(text.substr(range + 2));
    fse::require(lo <= hi && hi - lo < 100000, fse::errc::bad_argument,
                 "invalid seed range '" + text + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) seeds.push_back(parse_one(tok));
  fse::require(!seeds.empty(), fse::errc::bad_argument, "empty seed list");
  return seeds;
}

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(tok);
  return out;
}

struct PatternOptions {
  std::string pattern = "dense";
  std::uint64_t seed = 1;
  double density = -1.0;            // custom only
  double literal_threshold = -1.0;  // custom only
  int dilation = 8;

  void add_flags(CLI::App* cmd, bool with_seed) {
    cmd->add_option("--pattern", pattern, "Loss pattern: dense, sparse, custom")
        ->check(CLI::IsMember({"dense", "sparse", "custom"}))
        ->capture_default_str();
    if (with_seed)
      cmd->add_option("--seed", seed, "Pattern RNG seed")
          ->capture_default_str();
    cmd->add_option("--density", density,
                    "Target loss density (custom pattern)");
    cmd->add_option("--literal-threshold", literal_threshold,
                    "Literal seeding threshold t: seed where rand() > t "
                    "(custom pattern)");
    cmd->add_option("--dilation", dilation,
                    "Dilation square side in pixels")
        ->capture_default_str();
  }

  fse::LossPatternSpec make_spec() const {
    const bool has_density = density >= 0.0;
    const bool has_literal = literal_threshold >= 0.0;
    if (pattern != "custom") {
      fse::require(!has_density && !has_literal, fse::errc::bad_argument,
                   "--density/--literal-threshold require --pattern custom");
      fse::LossPatternSpec spec = pattern == "dense"
                                      ? fse::LossPatternSpec::dense(seed)
                                      : fse::LossPatternSpec::sparse(seed);
      spec.dilation_side = dilation;
      return spec;
    }
    fse::require(has_density != has_literal, fse::errc::bad_argument,
                 "custom pattern needs exactly one of --density or "
                 "--literal-threshold");
    if (has_literal)
      return fse::LossPatternSpec::literal(literal_threshold, dilation, seed);
    return fse::LossPatternSpec::calibrated(density, dilation, seed);
  }
};

int cmd_corrupt(const std::string& input, const PatternOptions& pattern,
                const std::string& out_path, const std::string& mask_path,
                double fill) {
  fse::require(!out_path.empty() || !mask_path.empty(), fse::errc::bad_argument,
               "corrupt needs --out and/or --mask");
  const fse::GrayImage image = fse::load_image(input);
  const fse::LossPatternSpec spec = pattern.make_spec();
  const fse::LossMask mask =
      fse::generate_pattern(image.width(), image.height(), spec);

  if (!mask_path.empty()) fse::save_mask(mask, mask_path);
  if (!out_path.empty())
    fse::save_image(fse::apply_loss(image, mask, fill), out_path);

  std::printf("pattern=%s seed=%llu dilation=%d density=%.6f lost=%zu/%zu\n",
              pattern.pattern.c_str(),
              static_cast<unsigned long long>(spec.rng_seed),
              spec.dilation_side, fse::measure_density(mask),
              mask.lost_count(), image.pixel_count());
  if (mask.lost_count() == 0)
    std::fprintf(stderr, "warning: pattern produced an empty mask\n");
  return kExitOk;
}

int cmd_reconstruct(const std::string& input, const std::string& mask_path,
                    const std::string& preset, const std::string& mode_name,
                    int iterations, const std::string& out_path,
                    const std::string& report_path, bool traces) {
  const fse::GrayImage image = fse::load_image(input);
  const fse::LossMask mask = fse::load_mask(mask_path);
  fse::FseParams params = fse::FseParams::preset(preset);
  if (iterations >= 0) params.iterations = iterations;
  const fse::Mode mode = fse::mode_from_name(mode_name);

  const bool json_report =
      std::filesystem::path(report_path).extension() == ".json";
  if (traces && !report_path.empty() && !json_report)
    std::fprintf(stderr,
                 "warning: --traces only affects JSON reports (.json)\n");

  const fse::ReconstructionResult res = fse::reconstruct_image(
      image, mask, params, mode, traces && json_report);
  fse::save_image(res.image, out_path);

  if (!report_path.empty()) {
    std::ofstream os(report_path, std::ios::binary);
    fse::require(os.good(), fse::errc::io_failure,
                 "cannot open report file " + report_path);
    if (json_report)
      res.report.write_json(os, traces);
    else
      res.report.write_csv(os);
    fse::require(os.good(), fse::errc::io_failure,
                 "failed writing report " + report_path);
  }

  std::printf("mode=%s preset=%s iterations=%d blocks=%zu fallback=%zu "
              "lost=%zu\n",
              fse::mode_name(mode), preset.c_str(), params.iterations,
              res.report.blocks.size(), res.report.fallback_blocks,
              res.report.lost_pixels);
  std::fprintf(stderr, "elapsed: %.2fs\n", res.report.elapsed_seconds);
  return kExitOk;
}

int cmd_bench(const std::vector<std::string>& inputs,
              const std::string& presets, const std::string& mode,
              const PatternOptions& pattern, const std::string& seeds,
              int iterations, bool border_exclude, const std::string& out_path,
              unsigned workers) {
  fse::BenchConfig config;
  for (const auto& path : inputs) {
    fse::BenchImage img;
    img.id = std::filesystem::path(path).stem().string();
    img.image = fse::load_image(path);
    config.images.push_back(std::move(img));
  }
  config.presets = split_csv_list(presets);
  if (mode == "both")
    config.modes = {fse::Mode::Fse, fse::Mode::CaFse};
  else
    config.modes = {fse::mode_from_name(mode)};
  config.seeds = parse_seeds(seeds);
  config.pattern = pattern.make_spec();
  config.variant = border_exclude ? fse::PsnrVariant::BorderExcluded
                                  : fse::PsnrVariant::AllReconstructed;
  config.iterations_override = iterations;
  config.workers = workers;

  const fse::BenchOutput out = fse::run_bench(config);

  std::ofstream os(out_path, std::ios::binary);
  fse::require(os.good(), fse::errc::io_failure,
               "cannot open output file " + out_path);
  out.write_csv(os);
  fse::require(os.good(), fse::errc::io_failure,
               "failed writing " + out_path);

  std::size_t failed = 0;
  for (const auto& row : out.rows)
    if (row.failed) {
      ++failed;
      std::fprintf(stderr, "warning: run %s/%s/%s seed %llu failed: %s\n",
                   row.image_id.c_str(), row.method.c_str(),
                   row.preset.c_str(),
                   static_cast<unsigned long long>(row.seed),
                   row.error.c_str());
    }
  std::printf("wrote %s (%zu runs, %zu failed, %zu aggregates)\n",
              out_path.c_str(), out.rows.size(), failed,
              out.aggregates.size());
  if (failed == out.rows.size()) {
    std::fprintf(stderr, "error: every benchmark run failed\n");
    return kExitData;
  }
  return kExitOk;
}

int cmd_oracle_check(int instances, int size, int iterations, double tolerance,
                     std::uint64_t seed, bool inject_fault) {
  const fse::OracleCheckResult res = fse::oracle_check(
      instances, size, iterations, tolerance, seed, inject_fault);
  if (res.instances == 0)
    std::fprintf(stderr, "warning: 0 instances checked, vacuous pass\n");
  std::printf("oracle-check: %d/%d instances within %g (worst rel %.3e)\n",
              res.instances - res.failures, res.instances, tolerance,
              res.worst_rel);
  if (!res.pass) {
    std::fprintf(stderr, "error: fast path deviates from the oracle\n%s\n",
                 res.first_failure.c_str());
    return kExitVerify;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency-selective extrapolation toolkit for grayscale "
               "image reconstruction"};
  app.require_subcommand(1);

  // corrupt ------------------------------------------------------------
  auto* corrupt = app.add_subcommand(
      "corrupt", "Generate a loss pattern and apply it to an image");
  std::string c_input, c_out, c_mask;
  double c_fill = 0.0;
  PatternOptions c_pattern;
  corrupt->add_option("input", c_input, "Input image (PGM or PNG)")
      ->required();
  c_pattern.add_flags(corrupt, true);
  corrupt->add_option("--out", c_out, "Corrupted image output path");
  corrupt->add_option("--mask", c_mask, "Loss mask output path");
  corrupt->add_option("--fill", c_fill, "Fill value for lost pixels")
      ->capture_default_str();

  // reconstruct ----------------------------------------------------------
  auto* reconstruct = app.add_subcommand(
      "reconstruct", "Reconstruct the masked pixels of an image");
  std::string r_input, r_mask, r_out, r_report;
  std::string r_preset = "bs16", r_mode = "fse";
  int r_iterations = -1;
  bool r_traces = false;
  reconstruct->add_option("input", r_input, "Corrupted image")->required();
  reconstruct->add_option("--mask", r_mask, "Loss mask image")->required();
  reconstruct->add_option("--preset", r_preset, "bs4, bs8 or bs16")
      ->check(CLI::IsMember({"bs4", "bs8", "bs16"}))
      ->capture_default_str();
  reconstruct->add_option("--mode", r_mode, "fse or ca-fse")
      ->check(CLI::IsMember({"fse", "ca-fse"}))
      ->capture_default_str();
  reconstruct->add_option("--iterations", r_iterations,
                          "Override the preset iteration count");
  reconstruct->add_option("--out", r_out, "Reconstructed image output")
      ->required();
  reconstruct->add_option("--report", r_report,
                          "Per-block report (.csv or .json)");
  reconstruct->add_flag("--traces", r_traces,
                        "Include per-iteration traces in JSON reports");

  // bench ----------------------------------------------------------------
  auto* bench = app.add_subcommand(
      "bench", "Corrupt/reconstruct/evaluate sweep over images and seeds");
  std::vector<std::string> b_inputs;
  std::string b_presets = "bs16", b_mode = "both", b_seeds = "1", b_out;
  PatternOptions b_pattern;
  int b_iterations = -1;
  bool b_border = false;
  unsigned b_workers = 0;
  bench->add_option("images", b_inputs, "Input images")->required();
  bench->add_option("--preset", b_presets,
                    "Comma-separated preset list (bs4,bs8,bs16)")
      ->capture_default_str();
  bench->add_option("--mode", b_mode, "fse, ca-fse or both")
      ->check(CLI::IsMember({"fse", "ca-fse", "both"}))
      ->capture_default_str();
  b_pattern.add_flags(bench, false);
  bench->add_option("--seeds", b_seeds, "Seed list: '1..10' or '1,4,9'")
      ->capture_default_str();
  bench->add_option("--iterations", b_iterations,
                    "Override the preset iteration count");
  bench->add_flag("--border-exclude", b_border,
                  "Evaluate PSNR on lost pixels at least 16 px from the "
                  "image border");
  bench->add_option("--out", b_out, "Output CSV path")->required();
  bench->add_option("--workers", b_workers,
                    "Worker threads (0 = hardware; FSE_WORKERS caps)");

  // oracle-check -----------------------------------------------------------
  auto* oracle = app.add_subcommand(
      "oracle-check",
      "Compare the fast model generator against the brute-force oracle");
  int o_instances = 50, o_size = 16, o_iterations = 100;
  double o_tolerance = 1e-9;
  std::uint64_t o_seed = 1234;
  bool o_inject = false;
  oracle->add_option("--instances", o_instances, "Random instances to check")
      ->capture_default_str();
  oracle->add_option("--size", o_size, "Transform size per instance")
      ->capture_default_str();
  oracle->add_option("--iterations", o_iterations, "Iterations per instance")
      ->capture_default_str();
  oracle->add_option("--tolerance", o_tolerance,
                     "Relative coefficient tolerance")
      ->capture_default_str();
  oracle->add_option("--seed", o_seed, "Instance RNG seed")
      ->capture_default_str();
  oracle->add_flag("--inject-fault", o_inject,
                   "Flip one fast-path coefficient (self-test, must fail)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (corrupt->parsed())
      return cmd_corrupt(c_input, c_pattern, c_out, c_mask, c_fill);
    if (reconstruct->parsed())
      return cmd_reconstruct(r_input, r_mask, r_preset, r_mode, r_iterations,
                             r_out, r_report, r_traces);
    if (bench->parsed())
      return cmd_bench(b_inputs, b_presets, b_mode, b_pattern, b_seeds,
                       b_iterations, b_border, b_out, b_workers);
    if (oracle->parsed())
      return cmd_oracle_check(o_instances, o_size, o_iterations, o_tolerance,
                              o_seed, o_inject);
  } catch (const fse::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return kExitConfig;  // unreachable: a subcommand is required
}
