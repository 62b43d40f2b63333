// Copyright (c) 2026 The fse-toolkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "fse/error.hpp"
#include "fse/image.hpp"

namespace fse {

enum class PsnrVariant { AllReconstructed, BorderExcluded };

inline const char* variant_name(PsnrVariant v) noexcept {
  return v == PsnrVariant::AllReconstructed ? "all" : "border16";
}

struct EvalResult {
  double psnr_db = 0.0;  // +infinity when the error is exactly zero
  std::size_t pixel_count = 0;
  PsnrVariant variant = PsnrVariant::AllReconstructed;
  int border = 0;

  bool infinite() const noexcept { return std::isinf(psnr_db); }
};

namespace detail {

inline EvalResult psnr_over(const GrayImage& original,
                            const GrayImage& reconstructed,
                            const LossMask& mask, int border,
                            PsnrVariant variant) {
  require(mask.matches(original) && mask.matches(reconstructed),
          errc::dimension_mismatch, "PSNR inputs must share dimensions");
  double sq_sum = 0.0;
  std::size_t count = 0;
  const int r0 = border, c0 = border;
  const int r1 = original.height() - border, c1 = original.width() - border;
  for (int r = r0; r < r1; ++r) {
    for (int c = c0; c < c1; ++c) {
      if (!mask.is_lost(r, c)) continue;
      const double d = original.at(r, c) - reconstructed.at(r, c);
      sq_sum += d * d;
      ++count;
    }
  }
  require(count > 0, errc::empty_selection,
          "no lost pixels in the evaluation region");
  EvalResult res;
  res.pixel_count = count;
  res.variant = variant;
  res.border = border;
  const double mse = sq_sum / static_cast<double>(count);
  res.psnr_db = mse == 0.0 ? std::numeric_limits<double>::infinity()
                           : 10.0 * std::log10(255.0 * 255.0 / mse);
  return res;
}

}  // namespace detail

// PSNR over the lost (= reconstructed) pixels only; peak fixed at 255.
inline EvalResult psnr_reconstructed(const GrayImage& original,
                                     const GrayImage& reconstructed,
                                     const LossMask& mask) {
  return detail::psnr_over(original, reconstructed, mask, 0,
                           PsnrVariant::AllReconstructed);
}

// Same, restricted to lost pixels at least `border` pixels away from
// every image edge.
inline EvalResult psnr_excluding_border(const GrayImage& original,
                                        const GrayImage& reconstructed,
                                        const LossMask& mask,
                                        int border = 16) {
  require(border >= 0, errc::bad_argument, "border must be >= 0");
  require(original.width() > 2 * border && original.height() > 2 * border,
          errc::bad_argument, "image not larger than twice the border");
  return detail::psnr_over(original, reconstructed, mask, border,
                           PsnrVariant::BorderExcluded);
}

struct AggregateResult {
  double mean_db = 0.0;
  std::size_t finite_count = 0;
  std::size_t infinite_count = 0;  // excluded from the mean, flagged upstream
  std::size_t total_pixels = 0;    // over finite results
};

// Arithmetic mean of the per-pattern PSNR values in dB. Infinite results
// (perfect reconstruction) cannot be averaged in dB and are excluded; the
// caller is expected to surface a warning when infinite_count > 0.
inline AggregateResult aggregate(const std::vector<EvalResult>& results) {
  require(!results.empty(), errc::empty_selection,
          "cannot aggregate zero results");
  AggregateResult agg;
  double sum = 0.0;
  for (const auto& r : results) {
    if (r.infinite()) {
      ++agg.infinite_count;
      continue;
    }
    sum += r.psnr_db;
    agg.total_pixels += r.pixel_count;
    ++agg.finite_count;
  }
  if (agg.finite_count > 0) sum /= static_cast<double>(agg.finite_count);
  agg.mean_db = agg.finite_count > 0
                    ? sum
                    : std::numeric_limits<double>::infinity();
  return agg;
}

}  // namespace fse
