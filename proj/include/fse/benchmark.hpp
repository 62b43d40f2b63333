// Copyright (c) 2026 The fse-toolkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fse/error.hpp"
#include "fse/image.hpp"
#include "fse/loss_pattern.hpp"
#include "fse/metrics.hpp"
#include "fse/params.hpp"
#include "fse/reconstruct.hpp"

namespace fse {

struct BenchImage {
  std::string id;
  GrayImage image;
};

// A bench invocation sweeps image x preset x mode x seed with one loss
// pattern family; every run is fully determined by this config.
struct BenchConfig {
  std::vector<BenchImage> images;
  std::vector<std::string> presets = {"bs16"};
  std::vector<Mode> modes = {Mode::Fse, Mode::CaFse};
  std::vector<std::uint64_t> seeds = {1};
  LossPatternSpec pattern = LossPatternSpec::dense(1);  // rng_seed per run
  PsnrVariant variant = PsnrVariant::AllReconstructed;
  int border = 16;
  int iterations_override = -1;  // < 0 keeps the preset default
  unsigned workers = 0;          // 0 = hardware, capped by FSE_WORKERS
};

struct BenchRow {
  std::string image_id;
  std::string method;
  std::string preset;
  std::uint64_t seed = 0;
  EvalResult eval;
  bool failed = false;
  std::string error;
};

struct BenchAggregate {
  std::string image_id;
  std::string method;
  std::string preset;
  AggregateResult agg;
  bool has_diff = false;
  double diff_db = 0.0;  // mean(CA-FSE) - mean(FSE), on CA-FSE rows
};

struct BenchOutput {
  std::vector<BenchRow> rows;            // fixed enumeration order
  std::vector<BenchAggregate> aggregates;
  std::string variant_label;

  void write_csv(std::ostream& os) const {
    os << "row_type,image_id,method,preset,pattern_seed,variant,psnr_db,"
          "pixel_count,diff_db,status\n";
    for (const auto& r : rows) {
      os << "run," << r.image_id << ',' << r.method << ',' << r.preset << ','
         << r.seed << ',' << variant_label << ',';
      if (r.failed)
        os << ",0,,error\n";
      else
        os << detail::fmt_double("%.6f", r.eval.psnr_db) << ','
           << r.eval.pixel_count << ",,ok\n";
    }
    for (const auto& a : aggregates) {
      os << "aggregate," << a.image_id << ',' << a.method << ',' << a.preset
         << ",," << variant_label << ','
         << detail::fmt_double("%.6f", a.agg.mean_db) << ','
         << a.agg.total_pixels << ',';
      if (a.has_diff) os << detail::fmt_double("%.6f", a.diff_db);
      os << ",ok\n";
    }
  }
};

namespace detail {

inline unsigned resolve_workers(unsigned configured, std::size_t jobs) {
  unsigned cap = configured;
  if (cap == 0) {
    cap = std::thread::hardware_concurrency();
    if (cap == 0) cap = 1;
  }
  if (const char* env = std::getenv("FSE_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) cap = static_cast<unsigned>(v);
  }
  if (jobs < cap) cap = static_cast<unsigned>(jobs);
  return cap == 0 ? 1 : cap;
}

}  // namespace detail

inline std::string variant_label(PsnrVariant v, int border) {
  return v == PsnrVariant::AllReconstructed
             ? std::string("all")
             : "border" + std::to_string(border);
}

// Runs the full sweep. Jobs are independent and may execute on several
// threads; each writes only its own result slot and rows are emitted in
// enumeration order, so the output is byte-identical for any worker count.
inline BenchOutput run_bench(const BenchConfig& config) {
  require(!config.images.empty(), errc::bad_argument,
          "bench needs at least one input image");
  require(!config.presets.empty() && !config.modes.empty() &&
              !config.seeds.empty(),
          errc::bad_argument, "bench sweep is empty");

  struct Job {
    const BenchImage* image;
    std::string preset;
    Mode mode;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& img : config.images)
    for (const auto& preset : config.presets)
      for (const Mode mode : config.modes)
        for (const std::uint64_t seed : config.seeds)
          jobs.push_back({&img, preset, mode, seed});

  BenchOutput out;
  out.variant_label = variant_label(config.variant, config.border);
  out.rows.resize(jobs.size());

  const auto run_job = [&](std::size_t i) {
    const Job& job = jobs[i];
    BenchRow& row = out.rows[i];
    row.image_id = job.image->id;
    row.method = mode_name(job.mode);
    row.preset = job.preset;
    row.seed = job.seed;
    try {
      FseParams params = FseParams::preset(job.preset);
      if (config.iterations_override >= 0)
        params.iterations = config.iterations_override;
      LossPatternSpec pattern = config.pattern;
      pattern.rng_seed = job.seed;
      const LossMask mask = generate_pattern(job.image->image.width(),
                                             job.image->image.height(),
                                             pattern);
      const GrayImage corrupted = apply_loss(job.image->image, mask, 0.0);
      const ReconstructionResult rec =
          reconstruct_image(corrupted, mask, params, job.mode);
      row.eval = config.variant == PsnrVariant::AllReconstructed
                     ? psnr_reconstructed(job.image->image, rec.image, mask)
                     : psnr_excluding_border(job.image->image, rec.image,
                                             mask, config.border);
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
  };

  const unsigned workers = detail::resolve_workers(config.workers, jobs.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&]() {
        for (std::size_t i = next.fetch_add(1); i < jobs.size();
             i = next.fetch_add(1))
          run_job(i);
      });
    for (auto& th : pool) th.join();
  }

  // Aggregates per (image, preset, mode) in enumeration order, with the
  // CA-FSE minus FSE gain attached to the CA-FSE rows.
  std::map<std::pair<std::string, std::string>, double> fse_means;
  for (const auto& img : config.images) {
    for (const auto& preset : config.presets) {
      for (const Mode mode : config.modes) {
        std::vector<EvalResult> evals;
        for (const auto& row : out.rows)
          if (!row.failed && row.image_id == img.id && row.preset == preset &&
              row.method == mode_name(mode))
            evals.push_back(row.eval);
        if (evals.empty()) continue;
        BenchAggregate agg;
        agg.image_id = img.id;
        agg.method = mode_name(mode);
        agg.preset = preset;
        agg.agg = aggregate(evals);
        if (mode == Mode::Fse) {
          fse_means[{img.id, preset}] = agg.agg.mean_db;
        } else if (mode == Mode::CaFse) {
          const auto it = fse_means.find({img.id, preset});
          if (it != fse_means.end() && agg.agg.finite_count > 0 &&
              !std::isinf(it->second)) {
            agg.has_diff = true;
            agg.diff_db = agg.agg.mean_db - it->second;
          }
        }
        out.aggregates.push_back(std::move(agg));
      }
    }
  }
  return out;
}

}  // namespace fse
