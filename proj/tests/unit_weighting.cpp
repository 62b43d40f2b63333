// Copyright (c) 2026 The fse-toolkit authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "fse/blocks.hpp"
#include "fse/params.hpp"
#include "fse/weighting.hpp"

using namespace fse;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Builds the extrapolation area for the first block of an image whose lost
// pixels are exactly `lost`, using the given preset.
ExtrapolationArea area_for(const FseParams& params, int img_w, int img_h,
                           const std::vector<PixelCoord>& lost,
                           double fill = 100.0) {
  GrayImage img(img_w, img_h, fill);
  LossMask mask(img_w, img_h);
  for (const auto& p : lost) mask.set_lost(p.row, p.col);
  PixelStateMap state = PixelStateMap::initial(mask);
  const auto grid = make_grid(img_w, img_h, params.block_size);
  return extract_area(img, state, grid.front(), params);
}

}  // namespace

TEST_CASE("block_center is the geometric center of the block in the area") {
  SECTION("full 4x4 block in a 32-area (bs4 preset)") {
    const auto area =
        area_for(FseParams::bs4(), 64, 64, {PixelCoord{0, 0}});
    const WeightCenter c = block_center(area.geometry);
    CHECK(c.row == 15.5);
    CHECK(c.col == 15.5);
  }
  SECTION("clipped edge block keeps its own extent") {
    // 34x30 image, bs4: last block column starts at 32 with width 2.
    const FseParams params = FseParams::bs4();
    GrayImage img(34, 30, 0.0);
    LossMask mask(34, 30);
    mask.set_lost(0, 33);
    PixelStateMap state = PixelStateMap::initial(mask);
    const auto grid = make_grid(34, 30, 4);
    const Block& edge = grid[8];  // row 0, col 32, 4x2
    REQUIRE(edge.col == 32);
    REQUIRE(edge.width == 2);
    const auto area = extract_area(img, state, edge, params);
    const WeightCenter c = block_center(area.geometry);
    CHECK(c.row == 14.0 + (4 - 1) / 2.0);
    CHECK(c.col == 14.0 + (2 - 1) / 2.0);  // 14.5
  }
}

TEST_CASE("centroid_of_lost averages Bi coordinates") {
  const FseParams params = FseParams::bs4();

  SECTION("single lost pixel -> centroid at that pixel") {
    const auto area = area_for(params, 64, 64, {PixelCoord{1, 2}});
    const WeightCenter c = centroid_of_lost(area.classification);
    CHECK(c.row == 15.0);  // area row of image row 1 = 14 + 1
    CHECK(c.col == 16.0);
  }
  SECTION("fully lost block -> centroid equals block center bitwise") {
    std::vector<PixelCoord> all;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) all.push_back({r, c});
    const auto area = area_for(params, 64, 64, all);
    const WeightCenter centroid = centroid_of_lost(area.classification);
    const WeightCenter center = block_center(area.geometry);
    CHECK(centroid.row == center.row);  // exact, not approximate
    CHECK(centroid.col == center.col);
  }
  SECTION("three-pixel example") {
    // Lost image pixels (0,0), (0,1), (3,3) -> area rows {14,14,17},
    // cols {14,15,17}: centroid (15, 46/3).
    const auto area = area_for(
        params, 64, 64, {PixelCoord{0, 0}, PixelCoord{0, 1}, PixelCoord{3, 3}});
    const WeightCenter c = centroid_of_lost(area.classification);
    CHECK(c.row == 15.0);
    CHECK_THAT(c.col, WithinRel(46.0 / 3.0, 1e-15));
  }
  SECTION("no lost pixels is an error") {
    GrayImage img(64, 64, 0.0);
    LossMask mask(64, 64);
    mask.set_lost(40, 40);  // in another block
    PixelStateMap state = PixelStateMap::initial(mask);
    const auto grid = make_grid(64, 64, 4);
    const auto area = extract_area(img, state, grid.front(), params);
    try {
      centroid_of_lost(area.classification);
      FAIL("expected empty_selection");
    } catch (const Error& e) {
      CHECK(e.code() == errc::empty_selection);
    }
  }
}

TEST_CASE("build_weights follows the isotropic decay model") {
  const FseParams params = FseParams::bs4();
  // One lost pixel at the exact block center cell is impossible (centers
  // fall between cells), so use a full block and the block center.
  std::vector<PixelCoord> all;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) all.push_back({r, c});
  const auto area = area_for(params, 64, 64, all);
  const WeightCenter center = block_center(area.geometry);
  const WeightWindow w =
      build_weights(area.classification, center, 0.7, 0.5);

  REQUIRE(w.size == 32);
  CHECK(w.has_support());

  SECTION("known pixel at distance: rho^dist") {
    // Area cell (15.5 - 2.5, 15.5 + 0.5)? Use an axis-aligned case:
    // cell (15, 18) has offsets (-0.5, 2.5), dist = sqrt(6.5).
    const double expected = std::pow(0.7, std::sqrt(6.5));
    CHECK_THAT(w.at(15, 18), WithinRel(expected, 1e-14));
  }
  SECTION("weights vanish on Bi and Outside") {
    CHECK(w.at(15, 15) == 0.0);  // lost block cell
    CHECK(w.at(0, 0) == 0.0);    // outside the image
  }
  SECTION("radial monotonicity along a row") {
    double prev = w.at(16, 18);
    for (int col = 19; col < 28; ++col) {
      const double cur = w.at(16, col);
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("reconstructed pixels receive the delta multiplier") {
  const FseParams params = FseParams::bs4();
  GrayImage img(64, 64, 100.0);
  LossMask mask(64, 64);
  mask.set_lost(1, 1);  // pending, inside block (0,0)
  mask.set_lost(1, 5);  // will be marked as already reconstructed
  PixelStateMap state = PixelStateMap::initial(mask);
  state.mark_reconstructed(1, 5);

  const auto grid = make_grid(64, 64, 4);
  const auto area = extract_area(img, state, grid.front(), params);
  const WeightCenter center = block_center(area.geometry);
  const WeightWindow w =
      build_weights(area.classification, center, 0.7, 0.5);

  const PixelCoord rec = area.geometry.to_area(1, 5);
  const PixelCoord known = area.geometry.to_area(1, 6);
  REQUIRE(area.classification.at(rec.row, rec.col) ==
          PixelCategory::Reconstructed);

  const double dr_rec = rec.row - center.row;
  const double dc_rec = rec.col - center.col;
  const double dist_rec = std::sqrt(dr_rec * dr_rec + dc_rec * dc_rec);
  CHECK_THAT(w.at(rec.row, rec.col),
             WithinRel(0.5 * std::pow(0.7, dist_rec), 1e-14));

  const double dr_k = known.row - center.row;
  const double dc_k = known.col - center.col;
  const double dist_k = std::sqrt(dr_k * dr_k + dc_k * dc_k);
  CHECK_THAT(w.at(known.row, known.col),
             WithinRel(std::pow(0.7, dist_k), 1e-14));
}

TEST_CASE("degenerate full-block loss gives identical windows per mode") {
  // When Bi covers the entire block, centroid == block_center exactly, so
  // the two weighting modes must produce bitwise identical windows.
  for (const FseParams& params :
       {FseParams::bs4(), FseParams::bs8(), FseParams::bs16()}) {
    CAPTURE(params.block_size);
    std::vector<PixelCoord> all;
    for (int r = 0; r < params.block_size; ++r)
      for (int c = 0; c < params.block_size; ++c) all.push_back({r, c});
    const auto area = area_for(params, 96, 96, all);
    const WeightWindow a = build_weights(
        area.classification, block_center(area.geometry), 0.7, 0.5);
    const WeightWindow b = build_weights(
        area.classification, centroid_of_lost(area.classification), 0.7, 0.5);
    CHECK(a.w == b.w);  // exact vector equality
  }
}

TEST_CASE("centroid displacement for the corner-pixel fixture is 1.5*sqrt(2)") {
  // bs4 block covering image pixels (0..3)^2 with only (0,0) lost: the
  // centroid sits at the lost cell, 1.5 cells diagonally from the center.
  const auto area = area_for(FseParams::bs4(), 64, 64, {PixelCoord{0, 0}});
  const WeightCenter centroid = centroid_of_lost(area.classification);
  const WeightCenter center = block_center(area.geometry);
  const double dr = centroid.row - center.row;
  const double dc = centroid.col - center.col;
  const double displacement = std::sqrt(dr * dr + dc * dc);
  CHECK_THAT(displacement, WithinAbs(1.5 * std::sqrt(2.0), 1e-12));
}

TEST_CASE("window with no support reports has_support false") {
  // Whole image lost: every cell is Bi, Bo or Outside -> zero support.
  const FseParams params = FseParams::bs8();
  GrayImage img(32, 32, 0.0);
  LossMask mask(32, 32, true);
  PixelStateMap state = PixelStateMap::initial(mask);
  const auto grid = make_grid(32, 32, 8);
  const auto area = extract_area(img, state, grid.front(), params);
  const WeightWindow w = build_weights(
      area.classification, block_center(area.geometry), 0.7, 0.5);
  CHECK_FALSE(w.has_support());
  CHECK(w.total == 0.0);
}

TEST_CASE("build_weights validates its parameters") {
  const auto area = area_for(FseParams::bs4(), 64, 64, {PixelCoord{0, 0}});
  const WeightCenter c = block_center(area.geometry);
  CHECK_THROWS_AS(build_weights(area.classification, c, 0.0, 0.5), Error);
  CHECK_THROWS_AS(build_weights(area.classification, c, 1.5, 0.5), Error);
  CHECK_THROWS_AS(build_weights(area.classification, c, 0.7, -0.1), Error);
  CHECK_THROWS_AS(build_weights(area.classification, c, 0.7, 1.1), Error);
}
