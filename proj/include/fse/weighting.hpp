// Copyright (c) 2026 The fse-toolkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <vector>

#include "fse/blocks.hpp"
#include "fse/error.hpp"

namespace fse {

// Fractional area-local coordinates the weighting window decays from.
struct WeightCenter {
  double row = 0.0;
  double col = 0.0;
};

// Isotropic decay window over the transform grid: rho^dist on known
// pixels, delta * rho^dist on reconstructed ones, zero elsewhere.
struct WeightWindow {
  int size = 0;  // N
  std::vector<double> w;
  double total = 0.0;  // sum of all weights

  double at(int r, int c) const noexcept {
    return w[static_cast<std::size_t>(r) * size + c];
  }
  bool has_support() const noexcept { return total > 0.0; }
};

// Center of the block rectangle: coordinate mean of its pixels, fractional
// for even side lengths (the FSE center of Eq. 1 in block-centered form).
inline WeightCenter block_center(const AreaGeometry& geo) {
  return {geo.block_row0 + (geo.block_height - 1) / 2.0,
          geo.block_col0 + (geo.block_width - 1) / 2.0};
}

// Centroid of the lost pixels inside the block (the CA-FSE center).
// Coordinate sums are integer-exact, so a fully lost block reproduces
// block_center() bit for bit — the degenerate case where CA-FSE and FSE
// coincide.
inline WeightCenter centroid_of_lost(const AreaClassification& cls) {
  long long sum_r = 0, sum_c = 0, count = 0;
  for (int r = 0; r < cls.size; ++r)
    for (int c = 0; c < cls.size; ++c)
      if (cls.at(r, c) == PixelCategory::LostInside) {
        sum_r += r;
        sum_c += c;
        ++count;
      }
  require(count > 0, errc::empty_selection,
          "centroid undefined: block has no lost pixels");
  return {static_cast<double>(sum_r) / static_cast<double>(count),
          static_cast<double>(sum_c) / static_cast<double>(count)};
}

inline WeightWindow build_weights(const AreaClassification& cls,
                                  const WeightCenter& center, double rho,
                                  double delta) {
  require(rho > 0.0 && rho < 1.0, errc::bad_argument, "rho must be in (0,1)");
  require(delta > 0.0 && delta <= 1.0, errc::bad_argument,
          "delta must be in (0,1]");
  WeightWindow win;
  win.size = cls.size;
  win.w.assign(static_cast<std::size_t>(cls.size) * cls.size, 0.0);
  const double log_rho = std::log(rho);
  std::size_t i = 0;
  for (int r = 0; r < cls.size; ++r) {
    for (int c = 0; c < cls.size; ++c, ++i) {
      const PixelCategory cat = cls.cells[i];
      if (cat != PixelCategory::Known && cat != PixelCategory::Reconstructed)
        continue;
      const double dr = r - center.row;
      const double dc = c - center.col;
      const double dist = std::sqrt(dr * dr + dc * dc);
      double value = std::exp(dist * log_rho);  // rho^dist
      if (cat == PixelCategory::Reconstructed) value *= delta;
      win.w[i] = value;
      win.total += value;
    }
  }
  return win;
}

}  // namespace fse
