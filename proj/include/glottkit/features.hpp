// Copyright 2026 The glottkit Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Glottal features: normalised amplitude quotient, quasi-open quotient,
// H1-H2 and harmonic richness factor, plus the band-limited spectral
// distortion used to score an estimate against its reference.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "glottkit/dsp_core.hpp"
#include "glottkit/error.hpp"
#include "glottkit/fft.hpp"
#include "glottkit/lf_source.hpp"

namespace glottkit {

// AC flow amplitude over |min derivative| * period, both on the same sample
// grid (flow is the running sum of dflow). The AC amplitude max - min equals
// max(flow) for a flow that closes to zero, and is insensitive to the
// integration constant of an estimate.
inline double naq(std::span<const double> flow, std::span<const double> dflow, double t0) {
  if (flow.empty() || dflow.empty()) throw InvalidParameter("naq: empty cycle");
  if (!(t0 > 0.0)) throw InvalidParameter("naq: t0 must be positive");
  const auto [fmin, fmax] = std::minmax_element(flow.begin(), flow.end());
  const double dmin = *std::min_element(dflow.begin(), dflow.end());
  if (!(dmin < 0.0)) throw NumericalError("naq: derivative never negative (no closure event)");
  return (*fmax - *fmin) / (-dmin * t0);
}

// Ground truth for a synthesised cycle (flow is in derivative-times-seconds).
inline double naq(const GlottalCycle& c) {
  const double fmax = *std::max_element(c.flow.begin(), c.flow.end());
  const double dmin = *std::min_element(c.dflow.begin(), c.dflow.end());
  return fmax / (-dmin * static_cast<double>(c.period()) / c.fs);
}

// Samples above min + 0.5 (max - min) in the longest run containing the flow
// maximum, over t0. The cycle is treated circularly so the result does not
// depend on where the period boundary falls.
inline double qoq(std::span<const double> flow, double t0) {
  if (flow.empty()) throw InvalidParameter("qoq: empty cycle");
  if (!(t0 > 0.0)) throw InvalidParameter("qoq: t0 must be positive");
  const auto [mn, mx] = std::minmax_element(flow.begin(), flow.end());
  if (*mx == *mn) throw NumericalError("qoq: constant flow");
  const double thr = *mn + 0.5 * (*mx - *mn);
  const std::size_t n = flow.size();
  const std::size_t peak = static_cast<std::size_t>(mx - flow.begin());
  std::size_t fwd = 0;
  while (fwd + 1 < n && flow[(peak + fwd + 1) % n] > thr) ++fwd;
  std::size_t back = 0;
  while (fwd + back + 1 < n && flow[(peak + n - back - 1) % n] > thr) ++back;
  return static_cast<double>(1 + fwd + back) / t0;
}

inline double qoq(const GlottalCycle& c) {
  return qoq(c.flow, static_cast<double>(c.period()));
}

struct CycleShape {
  double naq = 0.0;
  double qoq = 0.0;
};

// NAQ and QOQ of the period ending at `gci` in an estimated derivative: the
// samples (gci - t0, gci], integrated from the start of that span.
inline CycleShape cycle_shape(std::span<const double> dflow, std::size_t gci, std::size_t t0) {
  if (gci + 1 < t0 || gci >= dflow.size()) {
    throw InvalidParameter("cycle_shape: period before the GCI is not inside the estimate");
  }
  const auto cycle = dflow.subspan(gci + 1 - t0, t0);
  const auto flow = integrate(cycle, 1.0);
  return {naq(flow, cycle, static_cast<double>(t0)), qoq(flow, static_cast<double>(t0))};
}

// ---------------------------------------------------------------------------
// Harmonic amplitudes

namespace detail {
struct HarmonicSpectrum {
  std::vector<double> mag;
  double bin_hz = 0.0;
};

inline HarmonicSpectrum harmonic_spectrum(std::span<const double> x, double f0, double fs) {
  if (!(f0 > 0.0) || !(fs > 0.0)) throw InvalidParameter("harmonics: f0 and fs must be positive");
  if (2.0 * f0 * 1.25 >= fs / 2.0) {
    throw InvalidParameter("harmonics: second harmonic not below Nyquist");
  }
  if (static_cast<double>(x.size()) < 4.0 * fs / f0 - 0.5) {
    throw InvalidParameter("harmonics: need at least four periods of signal");
  }
  const auto w = hann(x.size());
  const auto xw = multiply(x, w);
  const std::size_t nfft = std::max<std::size_t>(8192, fft::next_power_of_two(4 * x.size()));
  const auto spec = fft::forward(xw, nfft);
  HarmonicSpectrum h;
  h.bin_hz = fs / static_cast<double>(nfft);
  h.mag.resize(nfft / 2 + 1);
  for (std::size_t k = 0; k <= nfft / 2; ++k) h.mag[k] = std::abs(spec[k]);
  return h;
}

// Maximum magnitude within +-f0/4 of harmonic k.
inline double harmonic_amplitude(const HarmonicSpectrum& h, double f0, int k) {
  const double lo = (k - 0.25) * f0 / h.bin_hz;
  const double hi = (k + 0.25) * f0 / h.bin_hz;
  const auto b0 = static_cast<std::size_t>(std::ceil(lo));
  const auto b1 = std::min(static_cast<std::size_t>(std::floor(hi)), h.mag.size() - 1);
  double best = 0.0;
  for (std::size_t b = b0; b <= b1; ++b) best = std::max(best, h.mag[b]);
  return best;
}
}  // namespace detail

// 20 log10 |S(f0)| / |S(2 f0)| on a Hann-weighted, zero-padded spectrum.
inline double h1h2(std::span<const double> x, double f0, double fs) {
  const auto h = detail::harmonic_spectrum(x, f0, fs);
  const double a1 = detail::harmonic_amplitude(h, f0, 1);
  const double a2 = detail::harmonic_amplitude(h, f0, 2);
  const double peak = *std::max_element(h.mag.begin(), h.mag.end());
  if (!(a2 > 1e-12 * peak) || !(a1 > 1e-12 * peak)) {
    throw NumericalError("h1h2: harmonic below the noise floor");
  }
  return 20.0 * std::log10(a1 / a2);
}

// 20 log10 (sum_{k=2..K} |S(k f0)|) / |S(f0)|, K capped at floor(fs/2/f0) - 1.
// Returns -infinity when there is no harmonic energy above the fundamental.
inline double hrf(std::span<const double> x, double f0, double fs, int n_harmonics) {
  const auto h = detail::harmonic_spectrum(x, f0, fs);
  const int cap = static_cast<int>(std::floor(fs / 2.0 / f0)) - 1;
  const int kmax = std::min(n_harmonics, cap);
  if (kmax < 2) throw InvalidParameter("hrf: fewer than two harmonics resolvable");
  const double a1 = detail::harmonic_amplitude(h, f0, 1);
  const double peak = *std::max_element(h.mag.begin(), h.mag.end());
  if (!(a1 > 1e-12 * peak)) throw NumericalError("hrf: fundamental below the noise floor");
  double sum = 0.0;
  for (int k = 2; k <= kmax; ++k) sum += detail::harmonic_amplitude(h, f0, k);
  if (!(sum > 1e-12 * a1)) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(sum / a1);
}

// ---------------------------------------------------------------------------
// Spectral distortion

// sqrt( (2/8000) * sum_{20 Hz <= f_k <= 4000 Hz} (20 log10 |E(f_k)/R(f_k)|)^2 * df )
// over the bins of an nfft-point transform (nfft >= 4096).
inline double spectral_distortion(std::span<const double> estimate,
                                  std::span<const double> reference, double fs) {
  if (estimate.size() != reference.size()) {
    throw InvalidParameter("spectral_distortion: signals differ in length");
  }
  if (estimate.empty()) throw InvalidParameter("spectral_distortion: empty signals");
  const std::size_t nfft = std::max<std::size_t>(4096, fft::next_power_of_two(estimate.size()));
  const auto se = fft::forward(estimate, nfft);
  const auto sr = fft::forward(reference, nfft);
  const double df = fs / static_cast<double>(nfft);
  double acc = 0.0;
  for (std::size_t k = 0; k <= nfft / 2; ++k) {
    const double f = static_cast<double>(k) * df;
    if (f < 20.0 || f > 4000.0) continue;
    const double me = std::abs(se[k]);
    const double mr = std::abs(sr[k]);
    if (!(mr > 1e-300)) {
      throw NumericalError("spectral_distortion: reference spectral zero at " +
                           std::to_string(f) + " Hz");
    }
    if (!(me > 1e-300)) {
      throw NumericalError("spectral_distortion: estimate spectral zero at " +
                           std::to_string(f) + " Hz");
    }
    const double d = 20.0 * std::log10(me / mr);
    acc += d * d * df;
  }
  return std::sqrt(2.0 / 8000.0 * acc);
}

// Scale a derivative so that its running sum spans exactly one unit.
inline std::vector<double> normalize_unit_flow(std::span<const double> dflow) {
  const auto flow = integrate(dflow, 1.0);
  const auto [mn, mx] = std::minmax_element(flow.begin(), flow.end());
  const double range = *mx - *mn;
  if (!(range > 0.0) || !std::isfinite(range)) {
    throw NumericalError("normalize_unit_flow: flow has no excursion");
  }
  std::vector<double> out(dflow.begin(), dflow.end());
  for (double& v : out) v /= range;
  return out;
}

}  // namespace glottkit
