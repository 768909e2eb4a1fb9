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


// Synthetic benchmark over the LF x vowel x SNR grid, error statistics,
// histogram divergences and the voice-quality separability protocol.

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "glottkit/dsp_core.hpp"
#include "glottkit/error.hpp"
#include "glottkit/estimators.hpp"
#include "glottkit/features.hpp"
#include "glottkit/lf_source.hpp"
#include "glottkit/vocal_tract.hpp"

namespace glottkit {

// Seeds derived from (seed, index) with splitmix64 so that work items do not
// depend on scheduling.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Grid

// Inclusive start:step:stop.
struct Range {
  double start = 0.0;
  double step = 1.0;
  double stop = 0.0;

  std::vector<double> values() const {
    if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
      throw InvalidParameter("Range: need step > 0 and start <= stop");
    }
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> v(n);
    // Round to 1e-9 so 0.3 + 3*0.05 prints as 0.45.
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9;
    }
    return v;
  }
};

inline const std::array<Method, 3>& bench_methods() {
  static const std::array<Method, 3> m{Method::CPIF, Method::IAIF, Method::CCD};
  return m;
}

struct GridSpec {
  Range f0{100.0, 5.0, 240.0};
  Range oq{0.3, 0.05, 0.9};
  Range alpha_m{0.55, 0.05, 0.8};
  std::vector<std::string> vowels = [] {
    std::vector<std::string> v;
    for (const auto& p : vowel_presets()) v.push_back(p.label);
    return v;
  }();
  std::vector<double> snr_db{10, 20, 30, 40, 50, 60, 70, 80};
  std::uint64_t seed = 1;
  double fs = 16000.0;
  double qa = 0.1;
  std::size_t cycles = 7;  // analysed cycle is the middle one
  std::size_t order = 18;
  double threshold = 0.2;
  std::vector<VowelPreset> presets = vowel_presets();  // table the labels refer to

  static GridSpec desk() {
    GridSpec g;
    g.f0 = {100.0, 20.0, 240.0};
    g.oq = {0.3, 0.1, 0.9};
    g.alpha_m = {0.55, 0.05, 0.8};
    g.vowels = {"a", "i", "u", "E"};
    g.snr_db = {10, 40, 80};
    return g;
  }
};

struct GridPoint {
  std::size_t index = 0;
  std::size_t source_index = 0;  // index with the SNR axis removed
  double f0 = 0.0;
  double oq = 0.0;
  double alpha_m = 0.0;
  std::string vowel;
  double snr_db = 0.0;
};

class Grid {
 public:
  explicit Grid(const GridSpec& spec)
      : spec_(spec),
        f0_(spec.f0.values()),
        oq_(spec.oq.values()),
        am_(spec.alpha_m.values()) {
    if (spec.vowels.empty()) throw InvalidParameter("GridSpec: no vowels");
    if (spec.snr_db.empty()) throw InvalidParameter("GridSpec: no SNR levels");
    for (const auto& v : spec.vowels) validate(find_vowel(v, spec.presets), spec.fs);
    if (spec.cycles < 3) throw InvalidParameter("GridSpec: need at least 3 cycles");
  }

  std::size_t size() const {
    return f0_.size() * oq_.size() * am_.size() * spec_.vowels.size() * spec_.snr_db.size();
  }

  // Row-major: f0, oq, alpha_m, vowel, SNR (fastest).
  GridPoint at(std::size_t idx) const {
    if (idx >= size()) throw InvalidParameter("Grid: index out of range");
    GridPoint p;
    p.index = idx;
    std::size_t r = idx;
    const std::size_t is = r % spec_.snr_db.size();
    r /= spec_.snr_db.size();
    p.source_index = r;
    const std::size_t iv = r % spec_.vowels.size();
    r /= spec_.vowels.size();
    const std::size_t ia = r % am_.size();
    r /= am_.size();
    const std::size_t io = r % oq_.size();
    r /= oq_.size();
    p.f0 = f0_[r];
    p.oq = oq_[io];
    p.alpha_m = am_[ia];
    p.vowel = spec_.vowels[iv];
    p.snr_db = spec_.snr_db[is];
    return p;
  }

  const GridSpec& spec() const { return spec_; }

 private:
  GridSpec spec_;
  std::vector<double> f0_, oq_, am_;
};

// ---------------------------------------------------------------------------
// One grid point

struct MethodMetrics {
  bool valid = false;
  double naq = std::numeric_limits<double>::quiet_NaN();
  double qoq = std::numeric_limits<double>::quiet_NaN();
  double rel_err_naq = std::numeric_limits<double>::quiet_NaN();
  double rel_err_qoq = std::numeric_limits<double>::quiet_NaN();
  double sd = std::numeric_limits<double>::quiet_NaN();
  std::string diagnostic;
};

struct BenchRecord {
  GridPoint point;
  double f0_realized = 0.0;
  double f1 = 0.0;
  bool synth_ok = false;
  std::string synth_error;
  double naq_true = std::numeric_limits<double>::quiet_NaN();
  double qoq_true = std::numeric_limits<double>::quiet_NaN();
  std::array<MethodMetrics, 3> methods;  // bench_methods() order
};

struct Stimulus {
  std::vector<double> speech;
  LFTrain source;
  AnalysisContext ctx;
};

// LF train through the vowel filter plus white noise. Noise depends on
// `noise_seed` only, so the same realisation (rescaled) is used at every SNR.
inline Stimulus make_stimulus(const LFParams& p, std::size_t cycles, const VowelPreset& vowel,
                              double snr_db, std::uint64_t noise_seed, double fs,
                              std::size_t order = 18) {
  Stimulus s;
  const std::vector<LFParams> train(cycles, p);
  s.source = synth_lf_train(train, fs);
  const auto vt = ar_from_formants(vowel, fs, order);
  s.speech = add_noise(filter(s.source.dflow, vt), snr_db, noise_seed);
  s.ctx.gci = s.source.gci;
  s.ctx.goi = s.source.goi;
  s.ctx.t0 = s.source.periods.front();
  s.ctx.fs = fs;
  s.ctx.anchor = cycles / 2;
  return s;
}

// Unit-flow derivative of a two-period estimate seen through the GCI window.
inline std::vector<double> sd_view(const GlottalEstimate& e, std::size_t t0, bool windowed) {
  if (e.gci < t0 || e.gci + t0 > e.dflow.size()) {
    throw InvalidParameter("sd_view: estimate does not cover two periods around the GCI");
  }
  std::vector<double> d(e.dflow.begin() + static_cast<std::ptrdiff_t>(e.gci - t0),
                        e.dflow.begin() + static_cast<std::ptrdiff_t>(e.gci + t0));
  if (!windowed) d = multiply(d, gci_window(t0));
  return normalize_unit_flow(d);
}

inline BenchRecord run_point(const GridSpec& spec, const GridPoint& pt) {
  BenchRecord rec;
  rec.point = pt;
  for (auto& m : rec.methods) m.diagnostic = "not run";
  try {
    const auto& vowel = find_vowel(pt.vowel, spec.presets);
    rec.f1 = vowel.f1();
    LFParams p;
    p.f0 = pt.f0;
    p.oq = pt.oq;
    p.alpha_m = pt.alpha_m;
    p.qa = spec.qa;
    const auto st = make_stimulus(p, spec.cycles, vowel, pt.snr_db,
                                  mix_seed(spec.seed, pt.source_index), spec.fs, spec.order);
    const std::size_t t0 = st.ctx.t0;
    rec.f0_realized = spec.fs / static_cast<double>(t0);
    const std::size_t g = st.ctx.gci[st.ctx.anchor];
    const auto truth = cycle_shape(st.source.dflow, g, t0);
    rec.naq_true = truth.naq;
    rec.qoq_true = truth.qoq;
    const auto ref = normalize_unit_flow(
        make_frame(st.source.dflow, g, t0, spec.fs).samples);
    rec.synth_ok = true;

    EstimatorOptions opt;
    opt.order = spec.order;
    for (std::size_t k = 0; k < bench_methods().size(); ++k) {
      const Method m = bench_methods()[k];
      auto& mm = rec.methods[k];
      const auto est = estimate(m, st.speech, st.ctx, opt);
      mm.diagnostic = est.diagnostic;
      if (!est.valid) continue;
      try {
        const auto shape = cycle_shape(est.dflow, est.gci, t0);
        const bool mixed = m == Method::CCD || m == Method::ZZT;
        const auto view = sd_view(est, t0, mixed);
        mm.naq = shape.naq;
        mm.qoq = shape.qoq;
        mm.rel_err_naq = std::abs(shape.naq - truth.naq) / truth.naq;
        mm.rel_err_qoq = std::abs(shape.qoq - truth.qoq) / truth.qoq;
        mm.sd = spectral_distortion(view, ref, spec.fs);
        mm.valid = std::isfinite(mm.sd) && std::isfinite(mm.rel_err_naq) &&
                   std::isfinite(mm.rel_err_qoq);
        if (!mm.valid) mm.diagnostic = "non-finite metric";
      } catch (const Error& err) {
        mm.valid = false;
        mm.diagnostic = err.what();
      }
    }
  } catch (const Error& err) {
    rec.synth_ok = false;
    rec.synth_error = err.what();
  }
  return rec;
}

// Run `n` independent jobs on up to `threads` workers; job i writes slot i.
template <class Job>
void parallel_for(std::size_t n, unsigned threads, Job&& job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) job(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Records come back in grid order whatever the thread count.
inline std::vector<BenchRecord> run_grid(const GridSpec& spec, unsigned threads = 0) {
  const Grid grid(spec);
  std::vector<BenchRecord> out(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) { out[i] = run_point(spec, grid.at(i)); });
  return out;
}

// ---------------------------------------------------------------------------
// Statistics

// Fraction of |e| > threshold. Non-finite entries (failed frames) count as
// exceeding it.
inline double error_rate(std::span<const double> errors, double threshold = 0.2) {
  if (errors.empty()) throw InvalidParameter("error_rate: empty list");
  std::size_t over = 0;
  for (double e : errors) {
    if (!std::isfinite(e) || std::abs(e) > threshold) ++over;
  }
  return static_cast<double>(over) / static_cast<double>(errors.size());
}

struct MethodSummary {
  Method method = Method::CPIF;
  std::size_t frames = 0;
  std::size_t valid = 0;
  double mean_sd = std::numeric_limits<double>::quiet_NaN();
  double error_rate_naq = std::numeric_limits<double>::quiet_NaN();
  double error_rate_qoq = std::numeric_limits<double>::quiet_NaN();
  double valid_rate() const {
    return frames ? static_cast<double>(valid) / static_cast<double>(frames) : 0.0;
  }
};

// Mean SD is over valid frames; error rates charge invalid frames as errors.
template <class Pred>
std::array<MethodSummary, 3> summarize(std::span<const BenchRecord> recs, Pred&& keep) {
  std::array<MethodSummary, 3> out;
  for (std::size_t k = 0; k < 3; ++k) {
    out[k].method = bench_methods()[k];
    std::vector<double> en, eq;
    double sd = 0.0;
    for (const auto& r : recs) {
      if (!r.synth_ok || !keep(r)) continue;
      const auto& m = r.methods[k];
      ++out[k].frames;
      en.push_back(m.valid ? m.rel_err_naq : std::numeric_limits<double>::infinity());
      eq.push_back(m.valid ? m.rel_err_qoq : std::numeric_limits<double>::infinity());
      if (m.valid) {
        ++out[k].valid;
        sd += m.sd;
      }
    }
    if (out[k].valid) out[k].mean_sd = sd / static_cast<double>(out[k].valid);
    if (!en.empty()) {
      out[k].error_rate_naq = error_rate(en);
      out[k].error_rate_qoq = error_rate(eq);
    }
  }
  return out;
}

inline std::array<MethodSummary, 3> summarize(std::span<const BenchRecord> recs) {
  return summarize(recs, [](const BenchRecord&) { return true; });
}

// Average ranks (ties share the mean rank), 1-based.
inline std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double mean = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = mean;
    i = j + 1;
  }
  return r;
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidParameter("spearman: need two equal-length lists of >= 2 values");
  }
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw InvalidParameter("median: empty list");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// ---------------------------------------------------------------------------
// Histograms and divergences

struct Histogram {
  std::vector<double> edges;          // nbins + 1
  std::vector<double> counts;         // may be fractional when built from weights
  double total = 0.0;

  std::size_t bins() const { return counts.size(); }

  std::vector<double> probabilities() const {
    if (!(total > 0.0)) throw InvalidParameter("Histogram: no mass");
    std::vector<double> p(counts.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = counts[i] / total;
    return p;
  }

  static Histogram from_counts(std::vector<double> counts, double lo = 0.0, double hi = 1.0) {
    if (counts.empty()) throw InvalidParameter("Histogram: no bins");
    Histogram h;
    h.counts = std::move(counts);
    for (double c : h.counts) {
      if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidParameter("Histogram: negative count");
      h.total += c;
    }
    const std::size_t n = h.counts.size();
    h.edges.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    }
    return h;
  }
};

// Uniform bins on [lo, hi]; values outside land in the edge bins.
inline Histogram histogram(std::span<const double> values, std::size_t nbins, double lo, double hi) {
  if (values.empty()) throw InvalidParameter("histogram: empty input");
  if (nbins == 0) throw InvalidParameter("histogram: nbins must be positive");
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidParameter("histogram: need finite lo < hi");
  }
  auto h = Histogram::from_counts(std::vector<double>(nbins, 0.0), lo, hi);
  for (double v : values) {
    if (std::isnan(v)) throw InvalidParameter("histogram: NaN value");
    double pos = (v - lo) / (hi - lo) * static_cast<double>(nbins);
    pos = std::clamp(pos, 0.0, static_cast<double>(nbins) - 0.5);
    h.counts[static_cast<std::size_t>(pos)] += 1.0;
  }
  h.total = static_cast<double>(values.size());
  return h;
}

inline void check_same_grid(const Histogram& a, const Histogram& b) {
  if (a.edges.size() != b.edges.size()) throw InvalidParameter("histograms differ in bin count");
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    if (std::abs(a.edges[i] - b.edges[i]) > 1e-12 * (1.0 + std::abs(a.edges[i]))) {
      throw InvalidParameter("histograms differ in bin edges");
    }
  }
}

// sum a_i log2(a_i / b_i); terms with a_i = 0 vanish.
inline double kl_divergence(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw InvalidParameter("kl_divergence: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] <= 0.0) continue;
    if (!(b[i] > 0.0)) throw NumericalError("kl_divergence: b has an empty bin where a has mass");
    d += a[i] * std::log2(a[i] / b[i]);
  }
  return std::max(d, 0.0);
}

// Add eps = 1/(10 N) to every bin probability, N the sample count, then renormalise.
inline std::vector<double> smoothed_probabilities(const Histogram& h) {
  auto p = h.probabilities();
  const double eps = 1.0 / (10.0 * h.total);
  double s = 0.0;
  for (double& v : p) s += (v += eps);
  for (double& v : p) v /= s;
  return p;
}

inline double kl_divergence(const Histogram& a, const Histogram& b) {
  check_same_grid(a, b);
  return kl_divergence(smoothed_probabilities(a), smoothed_probabilities(b));
}

inline double js_divergence(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw InvalidParameter("js_divergence: size mismatch");
  std::vector<double> m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = 0.5 * (a[i] + b[i]);
  return std::clamp(0.5 * kl_divergence(a, m) + 0.5 * kl_divergence(b, m), 0.0, 1.0);
}

// No smoothing needed: the mixture has mass wherever either input does.
inline double js_divergence(const Histogram& a, const Histogram& b) {
  check_same_grid(a, b);
  return js_divergence(a.probabilities(), b.probabilities());
}

// ---------------------------------------------------------------------------
// Voice-quality protocol

struct VQClass {
  std::string name;
  double oq_lo = 0.5;
  double oq_hi = 0.7;
};

enum class VQFeature { NAQ, H1H2, HRF };

inline std::string_view to_string(VQFeature f) {
  switch (f) {
    case VQFeature::NAQ: return "NAQ";
    case VQFeature::H1H2: return "H1H2";
    case VQFeature::HRF: return "HRF";
  }
  return "?";
}

struct VQSpec {
  std::array<VQClass, 3> classes{VQClass{"loud", 0.35, 0.55}, VQClass{"modal", 0.5, 0.7},
                                 VQClass{"soft", 0.65, 0.85}};
  std::size_t stimuli_per_class = 120;
  double alpha_m_lo = 0.6, alpha_m_hi = 0.8;
  double qa_lo = 0.05, qa_hi = 0.15;
  double f0_lo = 150.0, f0_hi = 220.0;
  double snr_db = 60.0;
  std::vector<std::string> vowels = GridSpec{}.vowels;
  std::vector<VowelPreset> presets = vowel_presets();
  std::uint64_t seed = 1;
  double fs = 16000.0;
  std::size_t order = 18;
  std::size_t nbins = 20;
  int hrf_harmonics = 10;
  std::size_t min_valid = 100;
};

struct VQStimulus {
  std::size_t class_index = 0;
  std::size_t index = 0;
  LFParams params;
  std::string vowel;
  // [method][feature], NaN when unavailable
  std::array<std::array<double, 3>, 3> features{};
  std::array<std::string, 3> diagnostic;
};

struct VQDivergence {
  Method method;
  VQFeature feature;
  std::size_t class_a, class_b;
  double js;
};

struct VQResult {
  VQSpec spec;
  std::vector<VQStimulus> stimuli;  // class-major
  std::vector<VQDivergence> table;  // 3 methods x 3 features x 3 pairs
  // [method][feature][class]
  std::array<std::array<std::array<double, 3>, 3>, 3> medians{};
  std::array<std::array<std::array<Histogram, 3>, 3>, 3> histograms;
  std::array<std::array<std::array<std::size_t, 3>, 3>, 3> valid_counts{};
  std::vector<std::string> flags;  // classes below min_valid
};

// Stimulus parameters depend on the stimulus index and the class's oq
// interval only, so identical class definitions give identical stimuli.
inline VQStimulus draw_vq_stimulus(const VQSpec& spec, std::size_t cls, std::size_t i) {
  std::mt19937_64 rng(mix_seed(spec.seed, i));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  VQStimulus s;
  s.class_index = cls;
  s.index = i;
  const auto& c = spec.classes[cls];
  s.params.oq = c.oq_lo + u(rng) * (c.oq_hi - c.oq_lo);
  s.params.alpha_m = spec.alpha_m_lo + u(rng) * (spec.alpha_m_hi - spec.alpha_m_lo);
  s.params.qa = spec.qa_lo + u(rng) * (spec.qa_hi - spec.qa_lo);
  s.params.f0 = spec.f0_lo + u(rng) * (spec.f0_hi - spec.f0_lo);
  s.vowel = spec.vowels[static_cast<std::size_t>(u(rng) * static_cast<double>(spec.vowels.size())) %
                        spec.vowels.size()];
  return s;
}

// Features of one stimulus for every method: NAQ on the anchor cycle,
// H1-H2 and HRF on a four-period derivative estimate ending at the anchor.
inline void analyse_vq_stimulus(const VQSpec& spec, VQStimulus& s) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (auto& m : s.features) m.fill(nan);
  constexpr std::size_t kCycles = 9;
  const auto st = make_stimulus(s.params, kCycles, find_vowel(s.vowel, spec.presets), spec.snr_db,
                                mix_seed(spec.seed ^ 0x5151, s.index), spec.fs, spec.order);
  AnalysisContext ctx = st.ctx;
  ctx.anchor = 5;
  const std::size_t t0 = ctx.t0;
  const double f0 = spec.fs / static_cast<double>(t0);
  const std::size_t g = ctx.gci[ctx.anchor];
  const OutputSpan span{g + 1 - 4 * t0, g + 1};
  EstimatorOptions opt;
  opt.order = spec.order;
  for (std::size_t k = 0; k < 3; ++k) {
    const Method m = bench_methods()[k];
    try {
      const auto frame = estimate(m, st.speech, ctx, opt);
      if (!frame.valid) throw NumericalError(frame.diagnostic);
      s.features[k][0] = cycle_shape(frame.dflow, frame.gci, t0).naq;
      const auto four = estimate_span(m, st.speech, ctx, span, opt);
      if (!four.valid) throw NumericalError(four.diagnostic);
      s.features[k][1] = h1h2(four.dflow, f0, spec.fs);
      const double h = hrf(four.dflow, f0, spec.fs, spec.hrf_harmonics);
      if (std::isfinite(h)) s.features[k][2] = h;
    } catch (const Error& err) {
      s.diagnostic[k] = err.what();
    }
  }
}

inline VQResult voice_quality_protocol(const VQSpec& spec, unsigned threads = 0) {
  if (spec.vowels.empty()) throw InvalidParameter("VQSpec: no vowels");
  if (spec.nbins == 0) throw InvalidParameter("VQSpec: nbins must be positive");
  for (const auto& c : spec.classes) {
    if (!(c.oq_lo > 0.0 && c.oq_hi < 1.0 && c.oq_lo <= c.oq_hi)) {
      throw InvalidParameter("VQSpec: class '" + c.name + "' has an invalid oq interval");
    }
  }
  VQResult res;
  res.spec = spec;
  const std::size_t n = spec.stimuli_per_class;
  res.stimuli.resize(3 * n);
  parallel_for(3 * n, threads, [&](std::size_t j) {
    auto s = draw_vq_stimulus(spec, j / n, j % n);
    analyse_vq_stimulus(spec, s);
    res.stimuli[j] = std::move(s);
  });

  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t f = 0; f < 3; ++f) {
      std::array<std::vector<double>, 3> vals;
      for (const auto& s : res.stimuli) {
        const double v = s.features[k][f];
        if (std::isfinite(v)) vals[s.class_index].push_back(v);
      }
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto& v : vals) {
        for (double x : v) {
          lo = std::min(lo, x);
          hi = std::max(hi, x);
        }
      }
      if (!(hi > lo)) {
        lo = std::isfinite(lo) ? lo - 0.5 : 0.0;
        hi = lo + 1.0;
      }
      for (std::size_t c = 0; c < 3; ++c) {
        res.valid_counts[k][f][c] = vals[c].size();
        if (vals[c].size() < spec.min_valid) {
          res.flags.push_back(std::string(to_string(bench_methods()[k])) + " " +
                              std::string(to_string(static_cast<VQFeature>(f))) + " class '" +
                              spec.classes[c].name + "': " + std::to_string(vals[c].size()) +
                              " valid frames");
        }
        if (vals[c].empty()) {
          res.medians[k][f][c] = std::numeric_limits<double>::quiet_NaN();
          res.histograms[k][f][c] = Histogram::from_counts(std::vector<double>(spec.nbins, 0.0), lo, hi);
        } else {
          res.medians[k][f][c] = median(vals[c]);
          res.histograms[k][f][c] = histogram(vals[c], spec.nbins, lo, hi);
        }
      }
      static constexpr std::array<std::array<std::size_t, 2>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};
      for (const auto& pr : kPairs) {
        const auto& ha = res.histograms[k][f][pr[0]];
        const auto& hb = res.histograms[k][f][pr[1]];
        const double js = (ha.total > 0.0 && hb.total > 0.0)
                              ? js_divergence(ha, hb)
                              : std::numeric_limits<double>::quiet_NaN();
        res.table.push_back({bench_methods()[k], static_cast<VQFeature>(f), pr[0], pr[1], js});
      }
    }
  }
  return res;
}

}  // namespace glottkit
