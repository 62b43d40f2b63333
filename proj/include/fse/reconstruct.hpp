// Copyright (c) 2026 The fse-toolkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "fse/blocks.hpp"
#include "fse/error.hpp"
#include "fse/image.hpp"
#include "fse/model.hpp"
#include "fse/params.hpp"
#include "fse/weighting.hpp"

namespace fse {

namespace detail {

inline std::string fmt_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace detail

// Writes the clamped model values to exactly the still-lost pixels of the
// block and flips their state; known and previously reconstructed pixels
// are never touched.
inline void reconstruct_block(GrayImage& image, PixelStateMap& state,
                              const Block& block,
                              const ModelSpectrum& spectrum,
                              const AreaGeometry& geo) {
  std::vector<PixelCoord> lost_image, lost_area;
  for (int r = block.row; r < block.row + block.height; ++r) {
    for (int c = block.col; c < block.col + block.width; ++c) {
      if (state.at(r, c) != PixelState::Lost) continue;
      lost_image.push_back({r, c});
      lost_area.push_back(geo.to_area(r, c));
    }
  }
  if (lost_image.empty()) return;
  const std::vector<double> values = evaluate_model(spectrum, lost_area);
  for (std::size_t i = 0; i < lost_image.size(); ++i) {
    const auto [r, c] = lost_image[i];
    image.at(r, c) = std::clamp(values[i], 0.0, 255.0);
    state.mark_reconstructed(r, c);
  }
}

struct BlockReport {
  int row = 0, col = 0;  // block origin
  int bi_count = 0;      // lost pixels inside the block at issue time
  int priority = 0;      // scheduler priority at issue time
  int iterations = 0;    // model iterations executed
  double final_energy = 0.0;
  bool fallback = false;  // filled with the global mean, no model
  IterationTrace trace;   // populated only when traces are requested
};

struct RunReport {
  std::vector<BlockReport> blocks;
  std::size_t lost_pixels = 0;
  std::size_t fallback_blocks = 0;
  long long total_iterations = 0;
  double elapsed_seconds = 0.0;  // informational; never serialized

  // One row per block in processing order plus a trailing totals row.
  void write_csv(std::ostream& os) const {
    os << "row_type,block_row,block_col,bi_count,priority,iterations,"
          "final_energy,fallback\n";
    for (const auto& b : blocks) {
      os << "block," << b.row << ',' << b.col << ',' << b.bi_count << ','
         << b.priority << ',' << b.iterations << ','
         << detail::fmt_double("%.9e", b.final_energy) << ','
         << (b.fallback ? 1 : 0) << '\n';
    }
    os << "totals,,," << lost_pixels << ",," << total_iterations << ",,"
       << fallback_blocks << '\n';
  }

  void write_json(std::ostream& os, bool include_traces = false) const {
    os << "{\n  \"blocks\": [";
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const auto& b = blocks[i];
      os << (i ? ",\n    " : "\n    ") << "{\"row\": " << b.row
         << ", \"col\": " << b.col << ", \"bi_count\": " << b.bi_count
         << ", \"priority\": " << b.priority
         << ", \"iterations\": " << b.iterations << ", \"final_energy\": "
         << detail::fmt_double("%.17g", b.final_energy)
         << ", \"fallback\": " << (b.fallback ? "true" : "false");
      if (include_traces && !b.trace.steps.empty()) {
        os << ", \"trace\": [";
        for (std::size_t t = 0; t < b.trace.steps.size(); ++t) {
          const auto& s = b.trace.steps[t];
          os << (t ? ", " : "") << "{\"k1\": " << s.k1 << ", \"k2\": " << s.k2
             << ", \"re\": " << detail::fmt_double("%.17g", s.increment.real())
             << ", \"im\": " << detail::fmt_double("%.17g", s.increment.imag())
             << ", \"energy_after\": "
             << detail::fmt_double("%.17g", s.energy_after) << '}';
        }
        os << ']';
      }
      os << '}';
    }
    os << "\n  ],\n  \"totals\": {\"lost_pixels\": " << lost_pixels
       << ", \"processed_blocks\": " << blocks.size()
       << ", \"fallback_blocks\": " << fallback_blocks
       << ", \"total_iterations\": " << total_iterations << "}\n}\n";
  }
};

struct ReconstructionResult {
  GrayImage image;
  RunReport report;
};

// Whole-image driver: processes blocks in scheduler order; per block the
// weighting window is centered on the block center (FSE) or on the
// centroid of its lost pixels (CA-FSE). A block whose window has no
// support at all falls back to the mean of the originally known pixels.
inline ReconstructionResult reconstruct_image(const GrayImage& image,
                                              const LossMask& mask,
                                              const FseParams& params,
                                              Mode mode,
                                              bool keep_traces = false) {
  params.validate();
  require(mask.matches(image), errc::dimension_mismatch,
          "mask dimensions do not match image");
  const auto start = std::chrono::steady_clock::now();

  ReconstructionResult result{image, {}};
  result.report.lost_pixels = mask.lost_count();
  if (result.report.lost_pixels == 0) return result;

  // Fallback value for blocks without any usable support: mean of all
  // originally known pixels (mid-gray when the whole image is lost).
  double known_sum = 0.0;
  std::size_t known_count = 0;
  for (int r = 0; r < image.height(); ++r)
    for (int c = 0; c < image.width(); ++c)
      if (!mask.is_lost(r, c)) {
        known_sum += image.at(r, c);
        ++known_count;
      }
  const double fallback_value =
      known_count > 0 ? known_sum / static_cast<double>(known_count) : 128.0;

  PixelStateMap state = PixelStateMap::initial(mask);
  BlockScheduler scheduler(
      make_grid(image.width(), image.height(), params.block_size), state,
      params.border_width);

  GrayImage& out = result.image;
  while (auto issued = scheduler.next_block()) {
    const Block& block = issued->block;
    const ExtrapolationArea area = extract_area(out, state, block, params);

    BlockReport report_row;
    report_row.row = block.row;
    report_row.col = block.col;
    report_row.bi_count = static_cast<int>(
        area.classification.count(PixelCategory::LostInside));
    report_row.priority = issued->priority;

    const WeightCenter center = mode == Mode::CaFse
                                    ? centroid_of_lost(area.classification)
                                    : block_center(area.geometry);
    const WeightWindow weights = build_weights(area.classification, center,
                                               params.rho, params.delta);
    if (!weights.has_support()) {
      for (int r = block.row; r < block.row + block.height; ++r)
        for (int c = block.col; c < block.col + block.width; ++c)
          if (state.at(r, c) == PixelState::Lost)
            out.at(r, c) = fallback_value;
      report_row.fallback = true;
      ++result.report.fallback_blocks;
    } else {
      ModelResult model =
          generate_model(area, weights, params.gamma, params.iterations);
      reconstruct_block(out, state, block, model.spectrum, area.geometry);
      report_row.iterations =
          static_cast<int>(model.trace.steps.size());
      report_row.final_energy = model.trace.final_energy();
      result.report.total_iterations += report_row.iterations;
      if (keep_traces) report_row.trace = std::move(model.trace);
    }
    scheduler.mark_reconstructed(block, state);
    result.report.blocks.push_back(std::move(report_row));
  }

  require(state.count(PixelState::Lost) == 0, errc::bad_argument,
          "scheduler left lost pixels behind");
  result.report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace fse
