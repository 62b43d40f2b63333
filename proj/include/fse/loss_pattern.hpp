// Copyright (c) 2026 The fse-toolkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fse/error.hpp"
#include "fse/image.hpp"

namespace fse {

enum class LossPatternMode { LiteralThreshold, DensityCalibrated };

// Seed-and-dilate loss pattern generator: an independent Bernoulli seed
// grid is dilated with a square structuring element. The literal mode
// reproduces the classic rand(...) > threshold seeding; the calibrated
// mode solves for the seed probability that yields a requested expected
// loss density.
struct LossPatternSpec {
  LossPatternMode mode = LossPatternMode::DensityCalibrated;
  double seed_probability = 0.0;  // literal mode; equals 1 - threshold
  double target_density = 0.0;    // calibrated mode
  int dilation_side = 8;
  std::uint64_t rng_seed = 0;

  static LossPatternSpec dense(std::uint64_t seed) {
    return calibrated(0.28, 8, seed);
  }
  static LossPatternSpec sparse(std::uint64_t seed) {
    return calibrated(0.04, 8, seed);
  }
  static LossPatternSpec calibrated(double density, int side,
                                    std::uint64_t seed) {
    LossPatternSpec s;
    s.mode = LossPatternMode::DensityCalibrated;
    s.target_density = density;
    s.dilation_side = side;
    s.rng_seed = seed;
    return s;
  }
  static LossPatternSpec literal(double threshold, int side,
                                 std::uint64_t seed) {
    require(threshold >= 0.0 && threshold <= 1.0, errc::bad_argument,
            "threshold out of [0,1]");
    LossPatternSpec s;
    s.mode = LossPatternMode::LiteralThreshold;
    s.seed_probability = 1.0 - threshold;
    s.dilation_side = side;
    s.rng_seed = seed;
    return s;
  }

  void validate() const {
    require(dilation_side >= 1, errc::bad_argument, "dilation side must be >= 1");
    require(seed_probability >= 0.0 && seed_probability <= 1.0,
            errc::bad_argument, "seed probability out of [0,1]");
    if (mode == LossPatternMode::DensityCalibrated)
      require(target_density >= 0.0 && target_density < 1.0, errc::bad_argument,
              "target density out of [0,1)");
  }
};

// Solves 1 - (1-p)^(s^2) = target for p: the probability that a pixel is
// covered by at least one seed in its s x s neighborhood, assuming
// independent seeds (border effects ignored).
inline double calibrate_seed_probability(double target_density,
                                         int dilation_side) {
  require(target_density >= 0.0 && target_density < 1.0, errc::bad_argument,
          "target density out of [0,1)");
  require(dilation_side >= 1, errc::bad_argument, "dilation side must be >= 1");
  const double cells = static_cast<double>(dilation_side) * dilation_side;
  return 1.0 - std::pow(1.0 - target_density, 1.0 / cells);
}

// Dilation with a side x side square structuring element whose origin sits
// at offset ((side-1)/2, (side-1)/2) from the element's top-left cell;
// clipped at the borders. A seed at (r, c) marks rows [r-o, r-o+side) and
// the same column range lost.
inline LossMask dilate_seeds(const std::vector<PixelCoord>& seeds, int width,
                             int height, int side) {
  require(width > 0 && height > 0, errc::bad_argument,
          "dimensions must be positive");
  require(side >= 1, errc::bad_argument, "dilation side must be >= 1");
  LossMask mask(width, height);
  const int o = (side - 1) / 2;
  for (const auto& s : seeds) {
    const int r0 = std::max(0, s.row - o);
    const int r1 = std::min(height, s.row - o + side);
    const int c0 = std::max(0, s.col - o);
    const int c1 = std::min(width, s.col - o + side);
    for (int r = r0; r < r1; ++r)
      for (int c = c0; c < c1; ++c) mask.set_lost(r, c);
  }
  return mask;
}

namespace detail {
// Canonical 53-bit uniform in [0,1); bit-stable across platforms, unlike
// std::uniform_real_distribution.
inline double canonical_u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
}  // namespace detail

// Deterministic for fixed (seed, dimensions, spec). The uniform draw
// sequence depends only on the RNG seed, so raising the seed probability
// can only add lost pixels.
inline LossMask generate_pattern(int width, int height,
                                 const LossPatternSpec& spec) {
  require(width > 0 && height > 0, errc::bad_argument,
          "dimensions must be positive");
  spec.validate();
  const double p =
      spec.mode == LossPatternMode::DensityCalibrated
          ? calibrate_seed_probability(spec.target_density, spec.dilation_side)
          : spec.seed_probability;

  std::mt19937_64 rng(spec.rng_seed);
  std::vector<PixelCoord> seeds;
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      if (detail::canonical_u01(rng) < p) seeds.push_back({r, c});
  return dilate_seeds(seeds, width, height, spec.dilation_side);
}

inline double measure_density(const LossMask& mask) {
  return static_cast<double>(mask.lost_count()) /
         (static_cast<double>(mask.width()) * mask.height());
}

}  // namespace fse
