// Copyright (c) 2026 The fse-toolkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fse/blocks.hpp"
#include "fse/model.hpp"
#include "fse/weighting.hpp"

namespace fse {

// Randomized extrapolation-area instances and a model comparator, used to
// cross-check the fast transform-domain path against the brute-force
// oracle. Deliberately part of the library: the test suite and the CLI
// verification command must agree on what an instance is.

struct RandomInstance {
  ExtrapolationArea area;
  WeightWindow window;
  WeightCenter center;
};

// Random classification (known / reconstructed / lost inside a centered
// block / lost outside), random samples on the supported pixels, centroid-
// or block-centered weighting at random.
inline RandomInstance make_random_instance(int n, std::uint64_t seed) {
  require(Fft::is_pow2(n) && n >= 4, errc::bad_argument,
          "instance size must be a power of two >= 4");
  std::mt19937_64 rng(seed);
  const auto u01 = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };

  RandomInstance inst;
  AreaClassification& cls = inst.area.classification;
  cls.size = n;
  cls.cells.assign(static_cast<std::size_t>(n) * n, PixelCategory::Outside);
  inst.area.samples.assign(cls.cells.size(), 0.0);

  // Centered block covering the middle quarter of the grid.
  const int b0 = n / 4;
  const int bs = n / 2;
  AreaGeometry& geo = inst.area.geometry;
  geo.area_size = n;
  geo.block_row0 = geo.block_col0 = b0;
  geo.block_height = geo.block_width = bs;
  geo.image_row0 = geo.image_col0 = 0;
  geo.frame_row0 = geo.frame_col0 = 0;
  geo.frame_row1 = geo.frame_col1 = n;

  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const bool in_block = geo.in_block(r, c);
      const double roll = u01();
      PixelCategory cat;
      if (in_block) {
        cat = roll < 0.4 ? PixelCategory::LostInside
              : roll < 0.8 ? PixelCategory::Known
                           : PixelCategory::Reconstructed;
      } else {
        cat = roll < 0.15  ? PixelCategory::LostOutside
              : roll < 0.8 ? PixelCategory::Known
              : roll < 0.95 ? PixelCategory::Reconstructed
                            : PixelCategory::Outside;
      }
      cls.at(r, c) = cat;
      if (cat == PixelCategory::Known || cat == PixelCategory::Reconstructed)
        inst.area.samples[static_cast<std::size_t>(r) * n + c] = 255.0 * u01();
    }
  }
  // The instance must have at least one lost pixel in the block and some
  // support; force both deterministically.
  cls.at(b0, b0) = PixelCategory::LostInside;
  inst.area.samples[static_cast<std::size_t>(b0) * n + b0] = 0.0;
  cls.at(0, 0) = PixelCategory::Known;
  inst.area.samples[0] = 255.0 * u01();

  inst.center = (rng() & 1) ? centroid_of_lost(cls) : block_center(geo);
  inst.window = build_weights(cls, inst.center, 0.7, 0.5);
  return inst;
}

struct ModelComparison {
  bool ok = true;
  double worst_rel = 0.0;      // worst relative coefficient deviation
  int first_divergence = -1;   // iteration of the first selection mismatch
  std::string detail;
};

// Selection sequences must match exactly; coefficient increments, traced
// energies, and final coefficients must agree within `tol` relative to the
// larger magnitude (with a small absolute floor near zero). The energy
// check is deliberately cross-route: the fast path tracks the weighted
// residual energy by closed-form decrements, the oracle recomputes it
// spatially from scratch every iteration.
inline ModelComparison compare_models(const ModelResult& fast,
                                      const ModelResult& oracle, double tol) {
  ModelComparison cmp;
  const auto rel = [](cplx a, cplx b) {
    const double scale = std::max({std::abs(a), std::abs(b), 255.0});
    return std::abs(a - b) / scale;
  };
  const auto rel_energy = [](double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1.0});
    return std::abs(a - b) / scale;
  };

  if (fast.trace.steps.size() != oracle.trace.steps.size()) {
    cmp.ok = false;
    cmp.detail = "trace lengths differ";
    return cmp;
  }
  cmp.worst_rel = rel_energy(fast.trace.initial_energy,
                             oracle.trace.initial_energy);
  for (std::size_t t = 0; t < fast.trace.steps.size(); ++t) {
    const IterationStep& a = fast.trace.steps[t];
    const IterationStep& b = oracle.trace.steps[t];
    if (a.k1 != b.k1 || a.k2 != b.k2) {
      cmp.ok = false;
      cmp.first_divergence = static_cast<int>(t);
      cmp.detail = "selection differs at iteration " + std::to_string(t) +
                   ": fast (" + std::to_string(a.k1) + "," +
                   std::to_string(a.k2) + ") vs oracle (" +
                   std::to_string(b.k1) + "," + std::to_string(b.k2) + ")";
      return cmp;
    }
    cmp.worst_rel = std::max({cmp.worst_rel, rel(a.increment, b.increment),
                              rel_energy(a.energy_before, b.energy_before),
                              rel_energy(a.energy_after, b.energy_after)});
  }
  if (fast.spectrum.size != oracle.spectrum.size) {
    cmp.ok = false;
    cmp.detail = "spectrum sizes differ";
    return cmp;
  }
  for (std::size_t i = 0; i < fast.spectrum.c.size(); ++i)
    cmp.worst_rel =
        std::max(cmp.worst_rel, rel(fast.spectrum.c[i], oracle.spectrum.c[i]));
  if (cmp.worst_rel >= tol) {
    cmp.ok = false;
    cmp.detail = "worst relative coefficient deviation " +
                 std::to_string(cmp.worst_rel) + " exceeds tolerance";
  }
  return cmp;
}

struct OracleCheckResult {
  bool pass = true;
  int instances = 0;
  int failures = 0;
  double worst_rel = 0.0;
  std::string first_failure;
};

// Runs generate_model and oracle_generate_model on `instances` random
// areas. `inject_fault` flips the sign of one fast-path coefficient before
// comparing — a self-test that the comparison actually bites.
inline OracleCheckResult oracle_check(int instances, int size, int iterations,
                                      double tol, std::uint64_t seed,
                                      bool inject_fault = false) {
  require(instances >= 0, errc::bad_argument, "instances must be >= 0");
  OracleCheckResult res;
  res.instances = instances;
  for (int i = 0; i < instances; ++i) {
    const RandomInstance inst = make_random_instance(size, seed + i);
    ModelResult fast =
        generate_model(inst.area, inst.window, 0.5, iterations);
    const ModelResult oracle =
        oracle_generate_model(inst.area, inst.window, 0.5, iterations);
    if (inject_fault && !fast.spectrum.c.empty()) {
      // Deterministic sign flip on the first nonzero coefficient.
      for (auto& c : fast.spectrum.c)
        if (c != cplx(0.0)) {
          c = -c;
          break;
        }
    }
    const ModelComparison cmp = compare_models(fast, oracle, tol);
    res.worst_rel = std::max(res.worst_rel, cmp.worst_rel);
    if (!cmp.ok) {
      ++res.failures;
      if (res.first_failure.empty())
        res.first_failure =
            "instance " + std::to_string(i) + " (seed " +
            std::to_string(seed + i) + "): " + cmp.detail;
    }
  }
  res.pass = res.failures == 0;
  return res;
}

}  // namespace fse
