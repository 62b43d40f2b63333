// Copyright (c) 2026 The fse-toolkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "fse/blocks.hpp"
#include "fse/error.hpp"
#include "fse/fft.hpp"
#include "fse/weighting.hpp"

namespace fse {

// Sparse-in-practice Fourier model of one extrapolation area: N x N complex
// coefficients over the full 2-D frequency grid, conjugate-symmetric at all
// times so that the spatial model stays real.
struct ModelSpectrum {
  int size = 0;
  std::vector<cplx> c;

  cplx at(int k1, int k2) const noexcept {
    return c[static_cast<std::size_t>(k1) * size + k2];
  }
  cplx& at(int k1, int k2) noexcept {
    return c[static_cast<std::size_t>(k1) * size + k2];
  }
};

inline int mirror_component(int k, int n) noexcept {
  return k == 0 ? 0 : n - k;
}

// Bins whose frequency components are both in {0, N/2} are their own
// mirror and must stay real.
inline bool self_conjugate(int k1, int k2, int n) noexcept {
  const int h = n / 2;
  return (k1 == 0 || k1 == h) && (k2 == 0 || k2 == h);
}

// Visits one representative per conjugate pair in lexicographic (k1,k2)
// order; the representative is always the lexicographically smaller bin
// of the pair. f(k1, k2, self_conjugate).
template <class F>
inline void for_each_canonical(int n, F&& f) {
  const int h = n / 2;
  for (int k1 = 0; k1 <= h; ++k1) {
    const bool edge_row = (k1 == 0 || k1 == h);
    const int k2_max = edge_row ? h : n - 1;
    for (int k2 = 0; k2 <= k2_max; ++k2)
      f(k1, k2, edge_row && (k2 == 0 || k2 == h));
  }
}

struct IterationStep {
  int k1 = 0, k2 = 0;     // selected basis index u
  cplx increment;         // coefficient increment applied at u
  // Weighted residual energy sum w*(f-g)^2 — the objective the projection
  // update minimizes — before and after this step.
  double energy_before = 0.0;
  double energy_after = 0.0;
};

struct IterationTrace {
  double initial_energy = 0.0;  // weighted residual energy before any step
  std::vector<IterationStep> steps;

  double final_energy() const noexcept {
    return steps.empty() ? initial_energy : steps.back().energy_after;
  }
};

struct ModelResult {
  ModelSpectrum spectrum;
  IterationTrace trace;
};

namespace detail {

inline void validate_model_args(const ExtrapolationArea& area,
                                const WeightWindow& win, double gamma,
                                int iterations) {
  require(win.size == area.geometry.area_size, errc::dimension_mismatch,
          "weight window does not match area size");
  require(Fft::is_pow2(win.size) && win.size >= 2, errc::bad_argument,
          "area size must be a power of two >= 2");
  require(gamma > 0.0 && gamma <= 1.0, errc::bad_argument,
          "gamma must be in (0,1]");
  require(iterations >= 0, errc::bad_argument, "iterations must be >= 0");
  require(win.has_support(), errc::no_support,
          "weight window has no support anywhere");
}

}  // namespace detail

// Fast transform-domain model generation. Per iteration the basis function
// that reduces the weighted approximation error the most is strengthened:
// u = argmax |R_w[k]|^2, then dc = gamma * R_w[u] / W[0,0] is added to the
// spectrum at u (conjugate at the mirror bin) and the weighted residual
// spectrum is updated in place by the two shifted copies of W.
//
// The traced energy sum w*(f-g)^2 is maintained by an exact closed-form
// decrement (see the loop body); no spatial pass per iteration is needed.
//
// Only the canonical half of the spectrum is stored and scanned: exact
// conjugate symmetry is enforced on W once after the FFT, which makes the
// incremental updates preserve symmetry bit-exactly (self-conjugate bins
// keep a zero imaginary part through exact cancellation). The argmax
// therefore never depends on floating-point noise between mirror bins, and
// ties across distinct pairs break to the lexicographically smaller index.
inline ModelResult generate_model(const ExtrapolationArea& area,
                                  const WeightWindow& win, double gamma,
                                  int iterations) {
  detail::validate_model_args(area, win, gamma, iterations);
  const int n = win.size;
  const int h = n / 2;
  const int mask = n - 1;
  const std::size_t n2 = static_cast<std::size_t>(n) * n;

  // Initial weighted residual energy: g = 0, so E = sum w * f^2.
  double energy = 0.0;
  for (std::size_t i = 0; i < n2; ++i)
    energy += win.w[i] * area.samples[i] * area.samples[i];

  // Forward transforms of w and r*w (r = f on supported pixels).
  Fft fft(n);
  std::vector<cplx> wbuf(n2), rbuf(n2);
  for (std::size_t i = 0; i < n2; ++i) {
    wbuf[i] = win.w[i];
    rbuf[i] = area.samples[i] * win.w[i];
  }
  fft.forward_2d(wbuf.data());
  fft.forward_2d(rbuf.data());

  std::vector<double> wre(n2), wim(n2), rre(n2), rim(n2);
  for (std::size_t i = 0; i < n2; ++i) {
    wre[i] = wbuf[i].real();
    wim[i] = wbuf[i].imag();
    rre[i] = rbuf[i].real();
    rim[i] = rbuf[i].imag();
  }
  // Repair FFT round-off asymmetries once; the update rule keeps the
  // symmetry exact afterwards. R_w is only ever read on canonical bins.
  for_each_canonical(n, [&](int k1, int k2, bool self) {
    const std::size_t i = static_cast<std::size_t>(k1) * n + k2;
    if (self) {
      wim[i] = 0.0;
      rim[i] = 0.0;
      return;
    }
    const std::size_t m =
        static_cast<std::size_t>(mirror_component(k1, n)) * n +
        mirror_component(k2, n);
    wre[m] = wre[i];
    wim[m] = -wim[i];
  });
  const double w00 = wre[0];

  std::vector<double> cre(n2, 0.0), cim(n2, 0.0);

  struct Scan {
    int u1 = 0, u2 = 0;
  };
  // One fused pass over the canonical half: applies the residual update
  // for the previous selection (when do_update) and finds the next argmax.
  // `au` must be halved by the caller when u is self-conjugate (the two
  // shifted-W terms then coincide).
  const auto scan = [&](bool do_update, int u1, int u2, double au,
                        double bu) -> Scan {
    const int v1 = mirror_component(u1, n);
    const int v2 = mirror_component(u2, n);
    Scan out;
    double best = -1.0;
    for (int k1 = 0; k1 <= h; ++k1) {
      const bool edge_row = (k1 == 0 || k1 == h);
      const int k2_max = edge_row ? h : n - 1;
      const std::size_t row = static_cast<std::size_t>(k1) * n;
      const std::size_t wrow1 =
          static_cast<std::size_t>((k1 - u1 + n) & mask) * n;
      const std::size_t wrow2 =
          static_cast<std::size_t>((k1 - v1 + n) & mask) * n;
      if (do_update) {
        for (int k2 = 0; k2 <= k2_max; ++k2) {
          const std::size_t i = row + k2;
          const std::size_t w1 = wrow1 + ((k2 - u2 + n) & mask);
          const std::size_t w2 = wrow2 + ((k2 - v2 + n) & mask);
          rre[i] -= au * (wre[w1] + wre[w2]) - bu * (wim[w1] - wim[w2]);
          rim[i] -= au * (wim[w1] + wim[w2]) + bu * (wre[w1] - wre[w2]);
          const double nrm = rre[i] * rre[i] + rim[i] * rim[i];
          if (nrm > best) {
            best = nrm;
            out.u1 = k1;
            out.u2 = k2;
          }
        }
      } else {
        for (int k2 = 0; k2 <= k2_max; ++k2) {
          const std::size_t i = row + k2;
          const double nrm = rre[i] * rre[i] + rim[i] * rim[i];
          if (nrm > best) {
            best = nrm;
            out.u1 = k1;
            out.u2 = k2;
          }
        }
      }
    }
    return out;
  };

  ModelResult result;
  result.trace.steps.reserve(static_cast<std::size_t>(iterations));
  result.trace.initial_energy = energy;

  Scan s = scan(false, 0, 0, 0.0, 0.0);
  for (int t = 0; t < iterations; ++t) {
    const int u1 = s.u1, u2 = s.u2;
    const int v1 = mirror_component(u1, n);
    const int v2 = mirror_component(u2, n);
    const std::size_t ui = static_cast<std::size_t>(u1) * n + u2;
    const std::size_t vi = static_cast<std::size_t>(v1) * n + v2;
    const bool self = (ui == vi);
    const double a = gamma * rre[ui] / w00;
    const double b = self ? 0.0 : gamma * rim[ui] / w00;
    // Exact change of E = sum w*(f-g)^2 under g += dc*phi_u + conj at the
    // mirror: the linear term is -4*gamma*|R_w[u]|^2/W[0,0] and the
    // quadratic cross terms collapse to W at bin 2u. Because w >= 0 gives
    // |W[2u]| <= W[0,0], the change is <= -4*gamma*(1-gamma)*|R_w[u]|^2
    // / W[0,0] <= 0 for gamma <= 1: the traced energy never increases.
    double delta;
    if (self) {
      delta = -(2.0 - gamma) * a * rre[ui];
    } else {
      const std::size_t w2i =
          static_cast<std::size_t>((2 * u1) & mask) * n + ((2 * u2) & mask);
      delta = -4.0 * (a * rre[ui] + b * rim[ui]) +
              2.0 * (a * a + b * b) * w00 +
              2.0 * ((a * a - b * b) * wre[w2i] + 2.0 * a * b * wim[w2i]);
    }
    cre[ui] += a;
    cim[ui] += b;
    if (!self) {
      cre[vi] += a;
      cim[vi] -= b;
    }
    IterationStep step;
    step.k1 = u1;
    step.k2 = u2;
    step.increment = cplx(a, b);
    step.energy_before = energy;
    energy += delta;
    step.energy_after = energy;
    result.trace.steps.push_back(step);
    s = scan(true, u1, u2, self ? 0.5 * a : a, b);
  }

  result.spectrum.size = n;
  result.spectrum.c.resize(n2);
  for (std::size_t i = 0; i < n2; ++i)
    result.spectrum.c[i] = cplx(cre[i], cim[i]);
  return result;
}

// Brute-force reference with the same contract as generate_model but no
// fast transform and no incremental update: every projection is an
// explicit spatial sum against conj(phi_k) and the residual is re-derived
// from the spatial model each iteration. Intended for small N.
inline ModelResult oracle_generate_model(const ExtrapolationArea& area,
                                         const WeightWindow& win, double gamma,
                                         int iterations) {
  detail::validate_model_args(area, win, gamma, iterations);
  const int n = win.size;
  const std::size_t n2 = static_cast<std::size_t>(n) * n;

  // Unit roots e^{-i 2 pi t / n}; phi_k[m,l] is the conjugate of
  // root[(k1 m + k2 l) mod n].
  std::vector<double> root_re(n), root_im(n);
  for (int t = 0; t < n; ++t) {
    const double ang = 2.0 * std::numbers::pi * t / n;
    root_re[t] = std::cos(ang);
    root_im[t] = -std::sin(ang);
  }

  double w00 = 0.0;
  for (double v : win.w) w00 += v;

  std::vector<double> g(n2, 0.0), rw(n2, 0.0);
  std::vector<double> cre(n2, 0.0), cim(n2, 0.0);

  // Rebuilds the weighted residual and returns E = sum w*(f-g)^2, both
  // straight from the spatial model — no incremental bookkeeping.
  const auto refresh_residual = [&]() {
    double e = 0.0;
    for (std::size_t i = 0; i < n2; ++i) {
      const double d = area.samples[i] - g[i];
      rw[i] = d * win.w[i];
      e += win.w[i] * d * d;
    }
    return e;
  };

  ModelResult result;
  result.trace.steps.reserve(static_cast<std::size_t>(iterations));
  double energy = refresh_residual();
  result.trace.initial_energy = energy;

  for (int t = 0; t < iterations; ++t) {
    // Projection of the weighted residual on every canonical basis
    // function; strict maximum in lexicographic order.
    double best = -1.0;
    int u1 = 0, u2 = 0;
    double pu_re = 0.0, pu_im = 0.0;
    for_each_canonical(n, [&](int k1, int k2, bool self) {
      double pre = 0.0, pim = 0.0;
      for (int m = 0; m < n; ++m) {
        for (int l = 0; l < n; ++l) {
          const int tt = (k1 * m + k2 * l) % n;
          const double x = rw[static_cast<std::size_t>(m) * n + l];
          pre += x * root_re[tt];
          pim += x * root_im[tt];
        }
      }
      if (self) pim = 0.0;
      const double nrm = pre * pre + pim * pim;
      if (nrm > best) {
        best = nrm;
        u1 = k1;
        u2 = k2;
        pu_re = pre;
        pu_im = pim;
      }
    });

    const double a = gamma * pu_re / w00;
    const double b = gamma * pu_im / w00;
    const std::size_t ui = static_cast<std::size_t>(u1) * n + u2;
    const bool self = self_conjugate(u1, u2, n);
    cre[ui] += a;
    cim[ui] += b;
    if (!self) {
      const std::size_t vi =
          static_cast<std::size_t>(mirror_component(u1, n)) * n +
          mirror_component(u2, n);
      cre[vi] += a;
      cim[vi] -= b;
    }

    // Spatial model update: dc*phi_u + conj for the mirror (factor 2),
    // or the single real term when u is its own mirror.
    const double factor = self ? 1.0 : 2.0;
    for (int m = 0; m < n; ++m) {
      for (int l = 0; l < n; ++l) {
        const int tt = (u1 * m + u2 * l) % n;
        // Re(dc * e^{+i theta}) with root = e^{-i theta}.
        g[static_cast<std::size_t>(m) * n + l] +=
            factor * (a * root_re[tt] + b * root_im[tt]);
      }
    }

    IterationStep step;
    step.k1 = u1;
    step.k2 = u2;
    step.increment = cplx(a, b);
    step.energy_before = energy;
    energy = refresh_residual();
    step.energy_after = energy;
    result.trace.steps.push_back(step);
  }

  result.spectrum.size = n;
  result.spectrum.c.resize(n2);
  for (std::size_t i = 0; i < n2; ++i)
    result.spectrum.c[i] = cplx(cre[i], cim[i]);
  return result;
}

namespace detail {

inline void check_spectrum_symmetry(const ModelSpectrum& s) {
  require(s.size >= 2 && Fft::is_pow2(s.size) &&
              s.c.size() == static_cast<std::size_t>(s.size) * s.size,
          errc::bad_argument, "malformed spectrum");
  bool ok = true;
  for_each_canonical(s.size, [&](int k1, int k2, bool self) {
    const cplx v = s.at(k1, k2);
    if (self) {
      if (v.imag() != 0.0) ok = false;
      return;
    }
    const cplx m =
        s.at(mirror_component(k1, s.size), mirror_component(k2, s.size));
    if (m != std::conj(v)) ok = false;
  });
  require(ok, errc::symmetry_violation,
          "spectrum violates conjugate symmetry");
}

}  // namespace detail

inline constexpr double kRealnessTolerance = 1e-6 * 255.0;

// g[m,n] = sum_k c_k e^{+i 2 pi (k1 m + k2 n) / N} over the full grid.
// The imaginary residue is asserted tiny, the real part returned unclamped.
inline std::vector<double> evaluate_model_grid(const ModelSpectrum& spectrum) {
  detail::check_spectrum_symmetry(spectrum);
  const int n = spectrum.size;
  std::vector<cplx> grid = spectrum.c;
  Fft fft(n);
  fft.inverse_2d(grid.data());  // unnormalized: exactly the model sum
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(std::abs(grid[i].imag()) < kRealnessTolerance,
            errc::realness_violation,
            "model evaluation has a non-negligible imaginary part");
    out[i] = grid[i].real();
  }
  return out;
}

inline std::vector<double> evaluate_model(
    const ModelSpectrum& spectrum, const std::vector<PixelCoord>& coords) {
  const std::vector<double> grid = evaluate_model_grid(spectrum);
  const int n = spectrum.size;
  std::vector<double> out;
  out.reserve(coords.size());
  for (const auto& p : coords) {
    require(p.row >= 0 && p.row < n && p.col >= 0 && p.col < n,
            errc::bad_argument, "coordinate outside the model grid");
    out.push_back(grid[static_cast<std::size_t>(p.row) * n + p.col]);
  }
  return out;
}

}  // namespace fse
