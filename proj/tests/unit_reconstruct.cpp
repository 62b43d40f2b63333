// Copyright (c) 2026 The fse-toolkit authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "fse/reconstruct.hpp"

using namespace fse;
using Catch::Matchers::WithinAbs;

namespace {

GrayImage gradient_image(int w, int h) {
  GrayImage img(w, h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      img.at(r, c) = std::fmin(255.0, 0.5 * r + 0.7 * c);
  return img;
}

LossMask random_mask(int w, int h, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LossMask mask(w, h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (static_cast<double>(rng() >> 11) * 0x1.0p-53 < p)
        mask.set_lost(r, c);
  return mask;
}

}  // namespace

TEST_CASE("a lost pixel in a constant image is restored to the constant") {
  const GrayImage img(64, 64, 105.0);
  LossMask mask(64, 64);
  mask.set_lost(10, 10);

  for (Mode mode : {Mode::Fse, Mode::CaFse}) {
    CAPTURE(mode_name(mode));
    const ReconstructionResult res =
        reconstruct_image(img, mask, FseParams::bs8(), mode);
    CHECK_THAT(res.image.at(10, 10), WithinAbs(105.0, 0.5));
    // Every other pixel is untouched, bit for bit.
    for (int r = 0; r < 64; ++r)
      for (int c = 0; c < 64; ++c)
        if (r != 10 || c != 10) REQUIRE(res.image.at(r, c) == 105.0);
    CHECK(res.report.lost_pixels == 1);
    REQUIRE(res.report.blocks.size() == 1);
    CHECK(res.report.blocks[0].bi_count == 1);
    CHECK(res.report.blocks[0].fallback == false);
  }
}

TEST_CASE("reconstruct_block clamps model values to the pixel range") {
  const FseParams params = FseParams::bs8();
  GrayImage img(64, 64, 100.0);
  LossMask mask(64, 64);
  mask.set_lost(2, 3);
  mask.set_lost(2, 4);
  PixelStateMap state = PixelStateMap::initial(mask);
  const auto grid = make_grid(64, 64, 8);
  const ExtrapolationArea area = extract_area(img, state, grid[0], params);

  ModelSpectrum dc;
  dc.size = params.fft_size;
  dc.c.assign(static_cast<std::size_t>(dc.size) * dc.size, cplx(0.0, 0.0));

  SECTION("negative model value clamps to 0") {
    dc.at(0, 0) = cplx(-3.2, 0.0);
    reconstruct_block(img, state, grid[0], dc, area.geometry);
    CHECK(img.at(2, 3) == 0.0);
    CHECK(img.at(2, 4) == 0.0);
  }
  SECTION("overshooting model value clamps to 255") {
    dc.at(0, 0) = cplx(300.0, 0.0);
    reconstruct_block(img, state, grid[0], dc, area.geometry);
    CHECK(img.at(2, 3) == 255.0);
  }
  SECTION("in-range value is written unquantized") {
    dc.at(0, 0) = cplx(123.25, 0.0);
    reconstruct_block(img, state, grid[0], dc, area.geometry);
    CHECK(img.at(2, 3) == 123.25);
    CHECK(state.at(2, 3) == PixelState::Reconstructed);
  }
  // Known pixels are never written.
  CHECK(img.at(2, 5) == 100.0);
}

TEST_CASE("reconstruct_block without lost pixels is a no-op") {
  const FseParams params = FseParams::bs8();
  GrayImage img(64, 64, 42.0);
  LossMask mask(64, 64);
  mask.set_lost(40, 40);  // different block
  PixelStateMap state = PixelStateMap::initial(mask);
  const auto grid = make_grid(64, 64, 8);
  const ExtrapolationArea area = extract_area(img, state, grid[0], params);
  ModelSpectrum dc;
  dc.size = params.fft_size;
  dc.c.assign(static_cast<std::size_t>(dc.size) * dc.size, cplx(0.0, 0.0));
  dc.at(0, 0) = cplx(200.0, 0.0);
  const GrayImage before = img;
  reconstruct_block(img, state, grid[0], dc, area.geometry);
  CHECK(img == before);
}

TEST_CASE("an empty mask returns the input image unchanged") {
  const GrayImage img = gradient_image(48, 40);
  const LossMask mask(48, 40);
  const ReconstructionResult res =
      reconstruct_image(img, mask, FseParams::bs4(), Mode::Fse);
  CHECK(res.image == img);  // bitwise
  CHECK(res.report.blocks.empty());
  CHECK(res.report.lost_pixels == 0);
  CHECK(res.report.total_iterations == 0);
}

TEST_CASE("fully lost grid-aligned block: FSE and CA-FSE coincide") {
  // With Bi covering the whole block the centroid equals the block center
  // exactly, so both modes must produce bit-identical images.
  const GrayImage img = gradient_image(64, 64);
  LossMask mask(64, 64);
  for (int r = 24; r < 32; ++r)
    for (int c = 32; c < 40; ++c) mask.set_lost(r, c);

  const ReconstructionResult a =
      reconstruct_image(img, mask, FseParams::bs8(), Mode::Fse);
  const ReconstructionResult b =
      reconstruct_image(img, mask, FseParams::bs8(), Mode::CaFse);
  CHECK(a.image == b.image);
  // And the result actually fills the hole with something plausible.
  for (int r = 24; r < 32; ++r)
    for (int c = 32; c < 40; ++c) {
      CHECK(a.image.at(r, c) >= 0.0);
      CHECK(a.image.at(r, c) <= 255.0);
      CHECK_THAT(a.image.at(r, c), WithinAbs(img.at(r, c), 25.0));
    }
}

TEST_CASE("partially lost block: modes genuinely differ") {
  // An asymmetric loss pattern shifts the CA-FSE window; the outputs
  // should not be identical (this guards against the mode being ignored).
  const GrayImage img = gradient_image(64, 64);
  LossMask mask(64, 64);
  mask.set_lost(24, 32);
  mask.set_lost(24, 33);
  mask.set_lost(25, 32);

  const ReconstructionResult a =
      reconstruct_image(img, mask, FseParams::bs8(), Mode::Fse);
  const ReconstructionResult b =
      reconstruct_image(img, mask, FseParams::bs8(), Mode::CaFse);
  CHECK(a.image != b.image);
}

TEST_CASE("random dense loss: known pixels survive and the hole is filled") {
  const GrayImage img = gradient_image(64, 64);
  const LossMask mask = random_mask(64, 64, 0.28, 7);
  REQUIRE(mask.lost_count() > 0);

  const ReconstructionResult res =
      reconstruct_image(img, mask, FseParams::bs8(), Mode::CaFse);

  std::size_t bi_sum = 0;
  long long iter_sum = 0;
  for (const auto& b : res.report.blocks) {
    bi_sum += static_cast<std::size_t>(b.bi_count);
    iter_sum += b.iterations;
  }
  CHECK(bi_sum == mask.lost_count());
  CHECK(iter_sum == res.report.total_iterations);
  CHECK(res.report.lost_pixels == mask.lost_count());

  for (int r = 0; r < 64; ++r)
    for (int c = 0; c < 64; ++c) {
      if (mask.is_lost(r, c)) {
        REQUIRE(res.image.at(r, c) >= 0.0);
        REQUIRE(res.image.at(r, c) <= 255.0);
      } else {
        REQUIRE(res.image.at(r, c) == img.at(r, c));
      }
    }
}

TEST_CASE("a fully lost image falls back to a flat fill and completes") {
  const GrayImage img = gradient_image(32, 32);
  const LossMask mask(32, 32, true);
  const ReconstructionResult res =
      reconstruct_image(img, mask, FseParams::bs8(), Mode::Fse);
  CHECK(res.report.fallback_blocks >= 1);
  CHECK(res.report.blocks.size() == 16);
  // The first issued block has no support anywhere: flat 128 fill.
  const auto& first = res.report.blocks.front();
  CHECK(first.fallback);
  for (int r = first.row; r < first.row + 8; ++r)
    for (int c = first.col; c < first.col + 8; ++c)
      CHECK(res.image.at(r, c) == 128.0);
  for (int r = 0; r < 32; ++r)
    for (int c = 0; c < 32; ++c) {
      REQUIRE(res.image.at(r, c) >= 0.0);
      REQUIRE(res.image.at(r, c) <= 255.0);
    }
}

TEST_CASE("mask dimension mismatch is rejected") {
  const GrayImage img(32, 32, 10.0);
  const LossMask mask(16, 16);
  try {
    reconstruct_image(img, mask, FseParams::bs8(), Mode::Fse);
    FAIL("expected dimension_mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == errc::dimension_mismatch);
  }
}

TEST_CASE("traces are recorded only on request") {
  const GrayImage img = gradient_image(64, 64);
  LossMask mask(64, 64);
  for (int r = 24; r < 30; ++r)
    for (int c = 24; c < 30; ++c) mask.set_lost(r, c);

  const ReconstructionResult plain =
      reconstruct_image(img, mask, FseParams::bs8(), Mode::Fse, false);
  for (const auto& b : plain.report.blocks) CHECK(b.trace.steps.empty());

  const ReconstructionResult traced =
      reconstruct_image(img, mask, FseParams::bs8(), Mode::Fse, true);
  REQUIRE_FALSE(traced.report.blocks.empty());
  for (const auto& b : traced.report.blocks) {
    if (b.fallback) continue;
    REQUIRE(b.trace.steps.size() == static_cast<std::size_t>(b.iterations));
    double prev = b.trace.steps.front().energy_before;
    for (const auto& s : b.trace.steps) {
      CHECK(s.energy_before == prev);
      CHECK(s.energy_after <=
            s.energy_before + 1e-12 * std::abs(s.energy_before));
      prev = s.energy_after;
    }
    CHECK(b.final_energy == b.trace.final_energy());
  }
  // Trace bookkeeping must not change the pixels.
  CHECK(plain.image == traced.image);
}

TEST_CASE("reconstruction is deterministic") {
  const GrayImage img = gradient_image(48, 48);
  const LossMask mask = random_mask(48, 48, 0.3, 11);
  const ReconstructionResult a =
      reconstruct_image(img, mask, FseParams::bs4(), Mode::CaFse);
  const ReconstructionResult b =
      reconstruct_image(img, mask, FseParams::bs4(), Mode::CaFse);
  CHECK(a.image == b.image);
  REQUIRE(a.report.blocks.size() == b.report.blocks.size());
  for (std::size_t i = 0; i < a.report.blocks.size(); ++i) {
    CHECK(a.report.blocks[i].row == b.report.blocks[i].row);
    CHECK(a.report.blocks[i].final_energy == b.report.blocks[i].final_energy);
  }
}

TEST_CASE("report serialization") {
  RunReport report;
  BlockReport b;
  b.row = 8;
  b.col = 16;
  b.bi_count = 5;
  b.priority = 900;
  b.iterations = 100;
  b.final_energy = 1234.5;
  report.blocks.push_back(b);
  report.lost_pixels = 5;
  report.total_iterations = 100;
  report.elapsed_seconds = 3.25;  // must never appear in any output

  SECTION("csv") {
    std::ostringstream os;
    report.write_csv(os);
    const std::string text = os.str();
    CHECK(text.find("row_type,block_row,block_col,bi_count,priority,"
                    "iterations,final_energy,fallback\n") == 0);
    CHECK(text.find("block,8,16,5,900,100,1.234500000e+03,0\n") !=
          std::string::npos);
    CHECK(text.find("totals,,,5,,100,,0\n") != std::string::npos);
    CHECK(text.find("3.25") == std::string::npos);
  }
  SECTION("json") {
    std::ostringstream os;
    report.write_json(os);
    const std::string text = os.str();
    CHECK(text.find("\"blocks\"") != std::string::npos);
    CHECK(text.find("\"lost_pixels\": 5") != std::string::npos);
    CHECK(text.find("\"fallback\": false") != std::string::npos);
    CHECK(text.find("trace") == std::string::npos);
    CHECK(text.find("3.25") == std::string::npos);

    IterationStep s;
    s.k1 = 1;
    s.k2 = 2;
    s.increment = cplx(0.5, -0.25);
    s.energy_after = 10.0;
    report.blocks[0].trace.steps.push_back(s);
    std::ostringstream os2;
    report.write_json(os2, true);
    CHECK(os2.str().find("\"trace\"") != std::string::npos);
    CHECK(os2.str().find("\"k1\": 1") != std::string::npos);
  }
}
