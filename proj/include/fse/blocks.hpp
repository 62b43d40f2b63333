// Copyright (c) 2026 The fse-toolkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "fse/error.hpp"
#include "fse/image.hpp"
#include "fse/params.hpp"

namespace fse {

// One tile of the non-overlapping block grid. Edge blocks are clipped, so
// height/width may be smaller than the nominal block size.
struct Block {
  int row = 0;
  int col = 0;
  int height = 0;
  int width = 0;
  int index = 0;  // raster position in the grid

  bool contains(int r, int c) const noexcept {
    return r >= row && r < row + height && c >= col && c < col + width;
  }
};

inline std::vector<Block> make_grid(int width, int height, int block_size) {
  require(width > 0 && height > 0, errc::bad_argument,
          "dimensions must be positive");
  require(block_size >= 1, errc::bad_argument, "block size must be >= 1");
  std::vector<Block> blocks;
  int index = 0;
  for (int r = 0; r < height; r += block_size)
    for (int c = 0; c < width; c += block_size)
      blocks.push_back({r, c, std::min(block_size, height - r),
                        std::min(block_size, width - c), index++});
  return blocks;
}

// Categories of the pixels in the transform grid: originally known,
// already reconstructed, lost inside the current block, lost outside of
// it, and cells beyond the image or beyond the extrapolation area.
enum class PixelCategory : std::uint8_t {
  Known,
  Reconstructed,
  LostInside,
  LostOutside,
  Outside,
};

struct AreaClassification {
  int size = 0;  // transform grid side N
  std::vector<PixelCategory> cells;

  PixelCategory at(int r, int c) const noexcept {
    return cells[static_cast<std::size_t>(r) * size + c];
  }
  PixelCategory& at(int r, int c) noexcept {
    return cells[static_cast<std::size_t>(r) * size + c];
  }

  std::size_t count(PixelCategory cat) const noexcept {
    std::size_t n = 0;
    for (auto c : cells)
      if (c == cat) ++n;
    return n;
  }
};

// Mapping between area-local and image coordinates, plus the block and
// extrapolation-area placement inside the transform grid.
struct AreaGeometry {
  int area_size = 0;  // N
  int block_row0 = 0, block_col0 = 0;
  int block_height = 0, block_width = 0;
  int image_row0 = 0, image_col0 = 0;  // image coords of area cell (0,0)
  int frame_row0 = 0, frame_col0 = 0;  // L bounds, half-open
  int frame_row1 = 0, frame_col1 = 0;

  PixelCoord to_image(int area_row, int area_col) const noexcept {
    return {image_row0 + area_row, image_col0 + area_col};
  }
  PixelCoord to_area(int image_row, int image_col) const noexcept {
    return {image_row - image_row0, image_col - image_col0};
  }
  bool in_block(int area_row, int area_col) const noexcept {
    return area_row >= block_row0 && area_row < block_row0 + block_height &&
           area_col >= block_col0 && area_col < block_col0 + block_width;
  }
  bool in_frame(int area_row, int area_col) const noexcept {
    return area_row >= frame_row0 && area_row < frame_row1 &&
           area_col >= frame_col0 && area_col < frame_col1;
  }
};

struct ExtrapolationArea {
  std::vector<double> samples;  // N x N, zero outside A and R
  AreaClassification classification;
  AreaGeometry geometry;
};

// Copies the N x N neighborhood of `block` and classifies every cell.
// Pixels beyond the image are Outside and never fabricate support.
inline ExtrapolationArea extract_area(const GrayImage& image,
                                      const PixelStateMap& state,
                                      const Block& block,
                                      const FseParams& params) {
  const int n = params.fft_size;
  const int off = params.block_offset();
  const int d = params.border_width;

  ExtrapolationArea area;
  area.geometry = AreaGeometry{
      n,
      off,
      off,
      block.height,
      block.width,
      block.row - off,
      block.col - off,
      off - d,
      off - d,
      off + block.height + d,
      off + block.width + d,
  };
  area.classification.size = n;
  area.classification.cells.assign(static_cast<std::size_t>(n) * n,
                                   PixelCategory::Outside);
  area.samples.assign(static_cast<std::size_t>(n) * n, 0.0);

  const AreaGeometry& geo = area.geometry;
  for (int ar = 0; ar < n; ++ar) {
    for (int ac = 0; ac < n; ++ac) {
      const auto [ir, ic] = geo.to_image(ar, ac);
      if (!image.contains(ir, ic) || !geo.in_frame(ar, ac)) continue;
      PixelCategory cat;
      switch (state.at(ir, ic)) {
        case PixelState::Known:
          cat = PixelCategory::Known;
          break;
        case PixelState::Reconstructed:
          cat = PixelCategory::Reconstructed;
          break;
        default:
          cat = geo.in_block(ar, ac) ? PixelCategory::LostInside
                                     : PixelCategory::LostOutside;
          break;
      }
      area.classification.at(ar, ac) = cat;
      if (cat == PixelCategory::Known || cat == PixelCategory::Reconstructed)
        area.samples[static_cast<std::size_t>(ar) * n + ac] = image.at(ir, ic);
    }
  }
  return area;
}

struct IssuedBlock {
  Block block;
  int priority = 0;
};

// Greedy support-first processing order. A block's priority is the number
// of available (known or reconstructed) pixels in its support frame of
// width d, recounted as reconstructions commit; the pending block with the
// highest priority is issued next, ties broken by raster order. Large lost
// regions are thereby filled from the border towards the center.
class BlockScheduler {
 public:
  BlockScheduler(std::vector<Block> grid, const PixelStateMap& state,
                 int border_width)
      : grid_(std::move(grid)),
        border_(border_width),
        image_width_(state.width()),
        image_height_(state.height()) {
    require(border_width >= 0, errc::bad_argument, "border width must be >= 0");
    blocks_x_ = 0;
    nominal_ = 0;
    for (const auto& b : grid_) {
      if (b.row == 0) ++blocks_x_;
      nominal_ = std::max({nominal_, b.height, b.width});
    }
    require(!grid_.empty(), errc::bad_argument, "empty block grid");

    // Prefix sums of the available-pixel indicator for O(1) initial
    // frame counts.
    const int w = image_width_, h = image_height_;
    avail_sum_.assign(static_cast<std::size_t>(h + 1) * (w + 1), 0);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        const int a = state.is_available(r, c) ? 1 : 0;
        avail_sum_[idx(r + 1, c + 1)] = avail_sum_[idx(r, c + 1)] +
                                        avail_sum_[idx(r + 1, c)] -
                                        avail_sum_[idx(r, c)] + a;
      }
    }

    priority_.assign(grid_.size(), 0);
    pending_.assign(grid_.size(), 0);
    issued_open_.assign(grid_.size(), 0);
    for (const auto& b : grid_) {
      bool has_lost = false;
      for (int r = b.row; r < b.row + b.height && !has_lost; ++r)
        for (int c = b.col; c < b.col + b.width; ++c)
          if (state.at(r, c) == PixelState::Lost) {
            has_lost = true;
            break;
          }
      if (!has_lost) continue;
      pending_[b.index] = 1;
      priority_[b.index] = frame_available(b);
      heap_.push({priority_[b.index], b.index});
      ++pending_count_;
    }
  }

  std::size_t pending_count() const noexcept { return pending_count_; }

  int current_priority(const Block& b) const { return priority_[b.index]; }

  std::optional<IssuedBlock> next_block() {
    while (!heap_.empty()) {
      const Entry top = heap_.top();
      heap_.pop();
      if (!pending_[top.idx] || top.pri != priority_[top.idx]) continue;
      pending_[top.idx] = 0;
      issued_open_[top.idx] = 1;
      --pending_count_;
      return IssuedBlock{grid_[top.idx], top.pri};
    }
    return std::nullopt;
  }

  // Commits a reconstructed block: flips any of its still-Lost pixels to
  // Reconstructed and bumps the priorities of every pending block whose
  // support frame gained those pixels.
  void mark_reconstructed(const Block& block, PixelStateMap& state) {
    require(block.index >= 0 &&
                block.index < static_cast<int>(grid_.size()) &&
                issued_open_[block.index] != 0,
            errc::never_issued, "block was not issued by this scheduler");
    issued_open_[block.index] = 0;
    for (int r = block.row; r < block.row + block.height; ++r) {
      for (int c = block.col; c < block.col + block.width; ++c) {
        const PixelState s = state.at(r, c);
        if (s == PixelState::Known) continue;
        if (s == PixelState::Lost) state.mark_reconstructed(r, c);
        bump_neighbors(r, c);
      }
    }
  }

 private:
  struct Entry {
    int pri;
    int idx;
    bool operator<(const Entry& o) const noexcept {
      return pri < o.pri || (pri == o.pri && idx > o.idx);
    }
  };

  std::size_t idx(int r, int c) const noexcept {
    return static_cast<std::size_t>(r) * (image_width_ + 1) + c;
  }

  // Available pixels in [r0,r1) x [c0,c1), clipped to the image.
  int rect_available(int r0, int c0, int r1, int c1) const noexcept {
    r0 = std::max(r0, 0);
    c0 = std::max(c0, 0);
    r1 = std::min(r1, image_height_);
    c1 = std::min(c1, image_width_);
    if (r0 >= r1 || c0 >= c1) return 0;
    return avail_sum_[idx(r1, c1)] - avail_sum_[idx(r0, c1)] -
           avail_sum_[idx(r1, c0)] + avail_sum_[idx(r0, c0)];
  }

  int frame_available(const Block& b) const noexcept {
    return rect_available(b.row - border_, b.col - border_,
                          b.row + b.height + border_,
                          b.col + b.width + border_) -
           rect_available(b.row, b.col, b.row + b.height, b.col + b.width);
  }

  static int floor_div(int a, int b) noexcept {
    return a >= 0 ? a / b : -((-a + b - 1) / b);
  }

  void bump_neighbors(int r, int c) {
    const int bs = nominal_;
    const int d = border_;
    const int jr0 = std::max(0, floor_div(r - d - bs + 1, bs));
    const int jr1 = std::min((image_height_ - 1) / bs, floor_div(r + d, bs));
    const int jc0 = std::max(0, floor_div(c - d - bs + 1, bs));
    const int jc1 = std::min((image_width_ - 1) / bs, floor_div(c + d, bs));
    for (int jr = jr0; jr <= jr1; ++jr) {
      for (int jc = jc0; jc <= jc1; ++jc) {
        const int j = jr * blocks_x_ + jc;
        if (!pending_[j]) continue;
        const Block& b = grid_[j];
        if (r < b.row - d || r >= b.row + b.height + d || c < b.col - d ||
            c >= b.col + b.width + d)
          continue;
        heap_.push({++priority_[j], j});
      }
    }
  }

  std::vector<Block> grid_;
  int border_;
  int image_width_, image_height_;
  int blocks_x_ = 0;
  int nominal_ = 0;  // nominal block size (max tile side)
  std::vector<int> avail_sum_;
  std::vector<int> priority_;
  std::vector<std::uint8_t> pending_, issued_open_;
  std::priority_queue<Entry> heap_;
  std::size_t pending_count_ = 0;
};

}  // namespace fse
