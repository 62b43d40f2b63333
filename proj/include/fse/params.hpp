// Copyright (c) 2026 The fse-toolkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include "fse/error.hpp"
#include "fse/fft.hpp"

namespace fse {

// Extrapolation parameter set: block size, support border width, transform
// size, weighting decay rho, reconstructed-pixel attenuation delta,
// orthogonality correction gamma, and the per-block iteration budget.
struct FseParams {
  int block_size = 8;
  int border_width = 12;
  int fft_size = 32;
  double rho = 0.7;
  double delta = 0.5;
  double gamma = 0.5;
  int iterations = 100;

  static FseParams bs4() { return {4, 14, 32, 0.7, 0.5, 0.5, 100}; }
  static FseParams bs8() { return {8, 12, 32, 0.7, 0.5, 0.5, 100}; }
  static FseParams bs16() { return {16, 16, 64, 0.7, 0.5, 0.5, 100}; }

  static FseParams preset(std::string_view name) {
    if (name == "bs4") return bs4();
    if (name == "bs8") return bs8();
    if (name == "bs16") return bs16();
    raise(errc::bad_argument, "unknown preset '" + std::string(name) +
                                  "' (expected bs4, bs8 or bs16)");
  }

  // Area side length: block plus the support frame on both sides.
  int area_side() const noexcept { return block_size + 2 * border_width; }
  // Placement of the block inside the transform grid.
  int block_offset() const noexcept { return (fft_size - block_size) / 2; }

  void validate() const {
    require(block_size >= 1, errc::bad_argument, "block size must be >= 1");
    require(border_width >= 0, errc::bad_argument, "border width must be >= 0");
    require(Fft::is_pow2(fft_size), errc::bad_argument,
            "FFT size must be a power of two");
    require(area_side() <= fft_size, errc::bad_argument,
            "block + 2*border must fit in the FFT grid");
    require(block_offset() >= border_width, errc::bad_argument,
            "support frame does not fit around the centered block");
    require(rho > 0.0 && rho < 1.0, errc::bad_argument, "rho out of (0,1)");
    require(delta > 0.0 && delta <= 1.0, errc::bad_argument,
            "delta out of (0,1]");
    require(gamma > 0.0 && gamma <= 1.0, errc::bad_argument,
            "gamma out of (0,1]");
    require(iterations >= 0, errc::bad_argument, "iterations must be >= 0");
  }
};

enum class Mode { Fse, CaFse };

inline const char* mode_name(Mode m) {
  return m == Mode::Fse ? "fse" : "ca-fse";
}

inline Mode mode_from_name(std::string_view name) {
  if (name == "fse") return Mode::Fse;
  if (name == "ca-fse" || name == "cafse") return Mode::CaFse;
  raise(errc::bad_argument,
        "unknown mode '" + std::string(name) + "' (expected fse or ca-fse)");
}

}  // namespace fse
