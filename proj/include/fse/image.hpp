// Copyright (c) 2026 The fse-toolkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "fse/error.hpp"

namespace fse {

struct PixelCoord {
  int row = 0;
  int col = 0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

// Grayscale image with real-valued samples in [0, 255], row-major.
// Samples stay real through the whole pipeline; quantization to 8 bit
// happens only on file output.
class GrayImage {
 public:
  GrayImage() = default;

  GrayImage(int width, int height, double fill = 0.0)
      : width_(width), height_(height) {
    require(width > 0 && height > 0, errc::bad_argument,
            "image dimensions must be positive");
    require(fill >= 0.0 && fill <= 255.0, errc::bad_argument,
            "fill value out of [0,255]");
    samples_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  static GrayImage from_samples(int width, int height,
                                std::vector<double> samples) {
    require(width > 0 && height > 0, errc::bad_argument,
            "image dimensions must be positive");
    require(samples.size() == static_cast<std::size_t>(width) * height,
            errc::bad_argument, "sample count does not match dimensions");
    for (double v : samples)
      require(v >= 0.0 && v <= 255.0, errc::bad_argument,
              "sample out of [0,255]");
    GrayImage img;
    img.width_ = width;
    img.height_ = height;
    img.samples_ = std::move(samples);
    return img;
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return samples_.size(); }

  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * width_ + col;
  }
  bool contains(int row, int col) const noexcept {
    return row >= 0 && row < height_ && col >= 0 && col < width_;
  }

  double at(int row, int col) const noexcept { return samples_[index(row, col)]; }
  double& at(int row, int col) noexcept { return samples_[index(row, col)]; }

  const std::vector<double>& samples() const noexcept { return samples_; }
  std::vector<double>& samples() noexcept { return samples_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> samples_;
};

// Per-pixel loss indicator (true = lost).
class LossMask {
 public:
  LossMask() = default;

  LossMask(int width, int height, bool lost = false)
      : width_(width), height_(height) {
    require(width > 0 && height > 0, errc::bad_argument,
            "mask dimensions must be positive");
    flags_.assign(static_cast<std::size_t>(width) * height,
                  lost ? std::uint8_t{1} : std::uint8_t{0});
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * width_ + col;
  }

  bool is_lost(int row, int col) const noexcept {
    return flags_[index(row, col)] != 0;
  }
  void set_lost(int row, int col, bool lost = true) noexcept {
    flags_[index(row, col)] = lost ? 1 : 0;
  }

  std::size_t lost_count() const noexcept {
    std::size_t n = 0;
    for (auto f : flags_) n += f;
    return n;
  }

  const std::vector<std::uint8_t>& flags() const noexcept { return flags_; }

  bool matches(const GrayImage& img) const noexcept {
    return width_ == img.width() && height_ == img.height();
  }

  friend bool operator==(const LossMask&, const LossMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> flags_;
};

enum class PixelState : std::uint8_t { Known, Lost, Reconstructed };

// Tracks reconstruction progress. Known pixels never change state and
// Reconstructed is only reachable from Lost.
class PixelStateMap {
 public:
  PixelStateMap() = default;

  static PixelStateMap initial(const LossMask& mask) {
    PixelStateMap map;
    map.width_ = mask.width();
    map.height_ = mask.height();
    map.states_.resize(mask.flags().size());
    for (std::size_t i = 0; i < map.states_.size(); ++i)
      map.states_[i] = mask.flags()[i] ? PixelState::Lost : PixelState::Known;
    return map;
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  PixelState at(int row, int col) const noexcept {
    return states_[static_cast<std::size_t>(row) * width_ + col];
  }

  void mark_reconstructed(int row, int col) {
    PixelState& s = states_[static_cast<std::size_t>(row) * width_ + col];
    require(s == PixelState::Lost, errc::bad_argument,
            "only Lost pixels may become Reconstructed");
    s = PixelState::Reconstructed;
  }

  bool is_available(int row, int col) const noexcept {
    return at(row, col) != PixelState::Lost;
  }

  std::size_t count(PixelState s) const noexcept {
    std::size_t n = 0;
    for (auto v : states_)
      if (v == s) ++n;
    return n;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<PixelState> states_;
};

// ITU-R BT.601 luma. Result is real-valued, not quantized.
inline double to_luminance(double r, double g, double b) {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

// Replaces lost pixels with `fill`; everything else is untouched.
inline GrayImage apply_loss(const GrayImage& image, const LossMask& mask,
                            double fill = 0.0) {
  require(mask.matches(image), errc::dimension_mismatch,
          "mask dimensions do not match image");
  require(fill >= 0.0 && fill <= 255.0, errc::bad_argument,
          "fill value out of [0,255]");
  GrayImage out = image;
  const auto& flags = mask.flags();
  auto& samples = out.samples();
  for (std::size_t i = 0; i < flags.size(); ++i)
    if (flags[i]) samples[i] = fill;
  return out;
}

}  // namespace fse
