// Copyright (c) 2026 The fse-toolkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fse/error.hpp"

namespace fse {

using cplx = std::complex<double>;

// Iterative radix-2 complex FFT for power-of-two sizes. Forward uses the
// e^{-i 2 pi k m / n} kernel, inverse e^{+i ...}; both are unnormalized.
// The transform sizes in this project are tiny (<= 64 per axis), so a
// self-contained implementation keeps the hot path deterministic and
// dependency-free.
class Fft {
 public:
  static bool is_pow2(int n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

  explicit Fft(int n) : n_(n) {
    require(is_pow2(n), errc::bad_argument, "FFT size must be a power of two");
    bitrev_.resize(n);
    int log2n = 0;
    while ((1 << log2n) < n) ++log2n;
    for (int i = 0; i < n; ++i) {
      int r = 0;
      for (int b = 0; b < log2n; ++b)
        if (i & (1 << b)) r |= 1 << (log2n - 1 - b);
      bitrev_[i] = r;
    }
    // Stage twiddles, stages len = 2,4,...,n concatenated.
    tw_fwd_.reserve(n - 1);
    tw_inv_.reserve(n - 1);
    for (int len = 2; len <= n; len <<= 1) {
      for (int j = 0; j < len / 2; ++j) {
        const double ang = 2.0 * std::numbers::pi * j / len;
        tw_fwd_.emplace_back(std::cos(ang), -std::sin(ang));
        tw_inv_.emplace_back(std::cos(ang), std::sin(ang));
      }
    }
  }

  int size() const noexcept { return n_; }

  void forward(cplx* data) const { transform(data, tw_fwd_); }
  void inverse(cplx* data) const { transform(data, tw_inv_); }

  // In-place 2-D transforms on an n x n row-major grid.
  void forward_2d(cplx* grid) const { transform_2d(grid, tw_fwd_); }
  void inverse_2d(cplx* grid) const { transform_2d(grid, tw_inv_); }

 private:
  void transform(cplx* a, const std::vector<cplx>& tw) const {
    const int n = n_;
    for (int i = 0; i < n; ++i) {
      const int r = bitrev_[i];
      if (i < r) std::swap(a[i], a[r]);
    }
    std::size_t tbase = 0;
    for (int len = 2; len <= n; len <<= 1) {
      const int half = len / 2;
      const cplx* w = tw.data() + tbase;
      for (int i = 0; i < n; i += len) {
        for (int j = 0; j < half; ++j) {
          const cplx u = a[i + j];
          const cplx v = a[i + j + half] * w[j];
          a[i + j] = u + v;
          a[i + j + half] = u - v;
        }
      }
      tbase += half;
    }
  }

  void transform_2d(cplx* grid, const std::vector<cplx>& tw) const {
    const int n = n_;
    for (int r = 0; r < n; ++r) transform(grid + static_cast<std::size_t>(r) * n, tw);
    std::vector<cplx> col(n);
    for (int c = 0; c < n; ++c) {
      for (int r = 0; r < n; ++r) col[r] = grid[static_cast<std::size_t>(r) * n + c];
      transform(col.data(), tw);
      for (int r = 0; r < n; ++r) grid[static_cast<std::size_t>(r) * n + c] = col[r];
    }
  }

  int n_;
  std::vector<int> bitrev_;
  std::vector<cplx> tw_fwd_, tw_inv_;
};

}  // namespace fse
