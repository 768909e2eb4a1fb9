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


#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "glottkit/ar_model.hpp"
#include "glottkit/error.hpp"

namespace glottkit {

struct Formant {
  double frequency = 0.0;  // Hz
  double bandwidth = 0.0;  // Hz
};

struct VowelPreset {
  std::string label;
  std::vector<Formant> formants;

  double f1() const { return formants.empty() ? 0.0 : formants.front().frequency; }
};

inline void validate(const VowelPreset& v, double fs) {
  double prev = 0.0;
  for (const auto& f : v.formants) {
    if (!(f.bandwidth > 0.0)) {
      throw InvalidParameter("vowel '" + v.label + "': bandwidths must be positive");
    }
    if (!(f.frequency > prev)) {
      throw InvalidParameter("vowel '" + v.label + "': formant frequencies must increase");
    }
    if (!(f.frequency < fs / 2.0)) {
      throw InvalidParameter("vowel '" + v.label + "': formant at " +
                             std::to_string(f.frequency) + " Hz is above Nyquist");
    }
    prev = f.frequency;
  }
}

// Fourteen vowels from adult formant tables (SAMPA-like labels). Above F3
// the formants follow a 17.5 cm uniform tube, (2n-1)*500 Hz, up to Nyquist
// at 16 kHz, so the whole band carries resonances as in an order-18 LPC fit
// of real speech. Bandwidths grow with formant index.
inline const std::vector<VowelPreset>& vowel_presets() {
  static const std::vector<VowelPreset> presets = [] {
    constexpr double kB[8] = {60.0, 90.0, 120.0, 200.0, 250.0, 300.0, 350.0, 400.0};
    struct Row {
      const char* label;
      double f1, f2, f3;
    };
    constexpr Row rows[] = {
        {"i", 270, 2290, 3010},  {"y", 280, 1750, 2200},  {"u", 300, 870, 2240},
        {"I", 390, 1990, 2550},  {"e", 420, 2100, 2700},  {"U", 440, 1020, 2240},
        {"o", 450, 800, 2400},   {"3r", 490, 1350, 1690}, {"E", 530, 1840, 2480},
        {"O", 570, 840, 2410},   {"V", 640, 1190, 2390},  {"ae", 660, 1720, 2410},
        {"A", 730, 1090, 2440},  {"a", 800, 1300, 2500},
    };
    std::vector<VowelPreset> out;
    for (const auto& r : rows) {
      out.push_back({r.label,
                     {{r.f1, kB[0]}, {r.f2, kB[1]}, {r.f3, kB[2]}, {3500.0, kB[3]}, {4500.0, kB[4]},
                      {5500.0, kB[5]}, {6500.0, kB[6]}, {7500.0, kB[7]}}});
    }
    return out;
  }();
  return presets;
}

// Look up a preset in `table` (the built-in one by default).
inline const VowelPreset& find_vowel(std::string_view label,
                                     const std::vector<VowelPreset>& table = vowel_presets()) {
  for (const auto& v : table) {
    if (v.label == label) return v;
  }
  throw InvalidParameter("unknown vowel label '" + std::string(label) + "'");
}

// Pole pair r*exp(+-j*theta) per formant with r = exp(-pi*B/fs),
// theta = 2*pi*F/fs; remaining coefficients zero. Unit gain.
inline ARModel ar_from_formants(const VowelPreset& preset, double fs, std::size_t order = 18) {
  validate(preset, fs);
  if (2 * preset.formants.size() > order) {
    throw InvalidParameter("ar_from_formants: order " + std::to_string(order) +
                           " too small for " + std::to_string(preset.formants.size()) +
                           " formants");
  }
  std::vector<double> poly{1.0};
  for (const auto& f : preset.formants) {
    const double r = std::exp(-std::numbers::pi * f.bandwidth / fs);
    const double c = -2.0 * r * std::cos(2.0 * std::numbers::pi * f.frequency / fs);
    const double d = r * r;
    std::vector<double> next(poly.size() + 2, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i];
      next[i + 1] += c * poly[i];
      next[i + 2] += d * poly[i];
    }
    poly = std::move(next);
  }
  std::vector<double> a(order, 0.0);
  for (std::size_t i = 1; i < poly.size(); ++i) a[i - 1] = poly[i];
  return ARModel(std::move(a), 1.0);
}

// y(n) = gain * x(n) - sum_k a_k y(n-k), zero initial state.
inline std::vector<double> filter(std::span<const double> x, const ARModel& m) {
  const auto& a = m.coeffs();
  std::vector<double> y(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    double acc = m.gain() * x[n];
    const std::size_t kmax = std::min(a.size(), n);
    for (std::size_t k = 1; k <= kmax; ++k) acc -= a[k - 1] * y[n - k];
    y[n] = acc;
  }
  return y;
}

// FIR application of A(z) / gain.
inline std::vector<double> inverse_filter(std::span<const double> y, const ARModel& m) {
  const auto& a = m.coeffs();
  std::vector<double> x(y.size());
  const double inv_gain = 1.0 / m.gain();
  for (std::size_t n = 0; n < y.size(); ++n) {
    double acc = y[n];
    const std::size_t kmax = std::min(a.size(), n);
    for (std::size_t k = 1; k <= kmax; ++k) acc += a[k - 1] * y[n - k];
    x[n] = acc * inv_gain;
  }
  return x;
}

inline double mean_power(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return x.empty() ? 0.0 : acc / static_cast<double>(x.size());
}

// White Gaussian noise scaled so that the realised SNR equals snr_db.
inline std::vector<double> add_noise(std::span<const double> x, double snr_db, std::uint64_t seed) {
  const double ps = mean_power(x);
  if (!(ps > 0.0)) throw NumericalError("add_noise: signal has zero energy");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> w(x.size());
  for (double& v : w) v = gauss(rng);
  const double pw = mean_power(w);
  const double scale = std::sqrt(ps / (pw * std::pow(10.0, snr_db / 10.0)));
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + scale * w[i];
  return y;
}

// Zero-phase second-order Butterworth high-pass (applied forward then
// backward). Used to remove sub-phonatory drift before IAIF.
inline std::vector<double> highpass_zero_phase(std::span<const double> x, double cutoff_hz,
                                               double fs) {
  const double k = std::tan(std::numbers::pi * cutoff_hz / fs);
  const double q = std::numbers::sqrt2 / 2.0;
  const double norm = 1.0 / (1.0 + k / q + k * k);
  const double b0 = norm, b1 = -2.0 * norm, b2 = norm;
  const double a1 = 2.0 * (k * k - 1.0) * norm;
  const double a2 = (1.0 - k / q + k * k) * norm;
  auto run = [&](std::vector<double> v) {
    double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
    // Start from the steady state of the first sample to avoid a step transient.
    if (!v.empty()) x1 = x2 = v.front();
    for (double& s : v) {
      const double in = s;
      const double out = b0 * in + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
      x2 = x1;
      x1 = in;
      y2 = y1;
      y1 = out;
      s = out;
    }
    return v;
  };
  auto y = run(std::vector<double>(x.begin(), x.end()));
  std::reverse(y.begin(), y.end());
  y = run(std::move(y));
  std::reverse(y.begin(), y.end());
  return y;
}

}  // namespace glottkit
