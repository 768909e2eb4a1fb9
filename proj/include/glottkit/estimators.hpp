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


// Glottal source estimators. CPIF and IAIF estimate an all-pole vocal tract
// and inverse filter; CCD and ZZT split a GCI-centred frame into its maximum-
// and minimum-phase parts (via the complex cepstrum or the zeros of the
// z-transform) and keep the maximum-phase part as the glottal open phase.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "glottkit/dsp_core.hpp"
#include "glottkit/error.hpp"
#include "glottkit/vocal_tract.hpp"

namespace glottkit {

enum class Method { CPIF, IAIF, CCD, ZZT };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::CPIF: return "CPIF";
    case Method::IAIF: return "IAIF";
    case Method::CCD: return "CCD";
    case Method::ZZT: return "ZZT";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  std::string up(s);
  for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "CPIF") return Method::CPIF;
  if (up == "IAIF") return Method::IAIF;
  if (up == "CCD") return Method::CCD;
  if (up == "ZZT") return Method::ZZT;
  throw InvalidParameter("unknown method '" + std::string(s) + "'");
}

struct AnalysisContext {
  std::vector<std::size_t> gci;
  std::vector<std::size_t> goi;
  std::size_t t0 = 0;  // samples
  double fs = 16000.0;
  std::size_t anchor = 0;  // index into gci of the cycle under analysis
};

inline void validate(const AnalysisContext& ctx, std::size_t signal_size) {
  if (ctx.gci.empty()) throw InvalidParameter("AnalysisContext: no GCIs");
  if (ctx.t0 < 2) throw InvalidParameter("AnalysisContext: t0 must be >= 2 samples");
  if (ctx.anchor >= ctx.gci.size()) throw InvalidParameter("AnalysisContext: anchor out of range");
  for (std::size_t i = 0; i < ctx.gci.size(); ++i) {
    if (ctx.gci[i] >= signal_size) throw InvalidParameter("AnalysisContext: GCI beyond signal");
    if (i > 0 && ctx.gci[i] <= ctx.gci[i - 1]) {
      throw InvalidParameter("AnalysisContext: GCIs not strictly increasing");
    }
  }
  // t0 is a local period: compare it with the spacings next to the anchor.
  for (std::size_t i = std::max<std::size_t>(ctx.anchor, 1); i <= ctx.anchor + 1 && i < ctx.gci.size(); ++i) {
    const double gap = static_cast<double>(ctx.gci[i] - ctx.gci[i - 1]);
    if (std::abs(gap - static_cast<double>(ctx.t0)) > 0.2 * static_cast<double>(ctx.t0)) {
      throw InvalidParameter("AnalysisContext: t0 inconsistent with GCI spacing");
    }
  }
  // Between two consecutive GCIs there is at most one GOI.
  for (std::size_t i = 0; i < ctx.goi.size(); ++i) {
    if (ctx.goi[i] >= signal_size) throw InvalidParameter("AnalysisContext: GOI beyond signal");
    if (i > 0 && ctx.goi[i] <= ctx.goi[i - 1]) {
      throw InvalidParameter("AnalysisContext: GOIs not strictly increasing");
    }
    if (std::find(ctx.gci.begin(), ctx.gci.end(), ctx.goi[i]) != ctx.gci.end()) {
      throw InvalidParameter("AnalysisContext: GOI coincides with a GCI");
    }
    if (i > 0) {
      const auto between = std::count_if(ctx.gci.begin(), ctx.gci.end(), [&](std::size_t g) {
        return g > ctx.goi[i - 1] && g < ctx.goi[i];
      });
      if (between != 1) throw InvalidParameter("AnalysisContext: GCIs and GOIs do not alternate");
    }
  }
}

struct GlottalEstimate {
  std::vector<double> dflow;
  std::vector<double> flow;
  Method method = Method::CCD;
  bool valid = false;
  std::string diagnostic;
  std::size_t begin = 0;  // signal index of dflow[0]
  std::size_t gci = 0;    // index of the analysed GCI inside dflow
};

struct EstimatorOptions {
  std::size_t order = 18;          // vocal tract (CPIF DAP, IAIF)
  std::size_t order_glottis = 4;   // IAIF glottal model
  double leak = 0.99;              // integrator for the reported flow
  double highpass_hz = 70.0;       // IAIF pre-filter
  DapOptions dap{};
};

// Half-open signal range [begin, end) to report an estimate on.
struct OutputSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

namespace detail {

inline GlottalEstimate invalid(Method m, std::string why) {
  GlottalEstimate e;
  e.method = m;
  e.valid = false;
  e.diagnostic = std::move(why);
  return e;
}

// Integrate with the configured leak and scale to unit peak-to-peak flow.
inline void finalize(GlottalEstimate& e, double leak) {
  e.flow = integrate(e.dflow, leak);
  const auto [mn, mx] = std::minmax_element(e.flow.begin(), e.flow.end());
  const double range = *mx - *mn;
  bool finite = std::all_of(e.dflow.begin(), e.dflow.end(), [](double v) { return std::isfinite(v); });
  if (!finite || !(range > 0.0) || !std::isfinite(range)) {
    e.valid = false;
    e.diagnostic = "estimate has no flow excursion";
    return;
  }
  for (double& v : e.dflow) v /= range;
  for (double& v : e.flow) v /= range;
  e.valid = true;
}

inline OutputSpan default_span(const AnalysisContext& ctx) {
  const std::size_t g = ctx.gci[ctx.anchor];
  return {g >= ctx.t0 ? g - ctx.t0 : 0, g + ctx.t0};
}

// Inverse filter `signal` by `model` on [span.begin, span.end), using the
// preceding samples as filter history.
inline std::vector<double> inverse_filter_span(std::span<const double> signal, const ARModel& model,
                                               OutputSpan span) {
  const std::size_t hist = std::min(span.begin, model.order());
  const auto seg = signal.subspan(span.begin - hist, span.end - span.begin + hist);
  auto out = inverse_filter(seg, model);
  out.erase(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(hist));
  return out;
}

inline std::optional<std::size_t> next_goi(const AnalysisContext& ctx, std::size_t after) {
  for (std::size_t g : ctx.goi) {
    if (g > after) return g;
  }
  return std::nullopt;
}

}  // namespace detail

// Closed-phase inverse filtering. The vocal tract is a DAP fit on the closed
// phase [GCI + 1, next GOI - 1] of the anchor cycle; if that holds fewer than
// order + 2 samples the closed phase of the neighbouring cycle is pooled in.
inline GlottalEstimate cpif(std::span<const double> signal, const AnalysisContext& ctx,
                            const EstimatorOptions& opt = {},
                            std::optional<OutputSpan> out = std::nullopt) {
  constexpr Method kM = Method::CPIF;
  try {
    validate(ctx, signal.size());
  } catch (const Error& e) {
    return detail::invalid(kM, e.what());
  }
  const OutputSpan span = out.value_or(detail::default_span(ctx));
  if (span.end > signal.size() || span.begin >= span.end) {
    return detail::invalid(kM, "output span outside the signal");
  }
  auto closed_phase = [&](std::size_t gi) -> std::vector<double> {
    const std::size_t g = ctx.gci[gi];
    const auto goi = detail::next_goi(ctx, g);
    if (!goi || *goi <= g + 1) return {};
    return {signal.begin() + static_cast<std::ptrdiff_t>(g + 1),
            signal.begin() + static_cast<std::ptrdiff_t>(*goi)};
  };
  std::vector<std::vector<double>> segments;
  auto first = closed_phase(ctx.anchor);
  if (first.empty()) return detail::invalid(kM, "no closed phase found after the GCI");
  const std::size_t need = opt.order + 2;
  std::size_t have = first.size();
  segments.push_back(std::move(first));
  if (have < need) {
    std::vector<double> extra;
    if (ctx.anchor > 0) extra = closed_phase(ctx.anchor - 1);
    if (extra.empty() && ctx.anchor + 1 < ctx.gci.size()) extra = closed_phase(ctx.anchor + 1);
    have += extra.size();
    if (!extra.empty()) segments.push_back(std::move(extra));
    if (have < need) {
      return detail::invalid(kM, "pooled closed phase has " + std::to_string(have) +
                                     " samples, need " + std::to_string(need));
    }
  }
  GlottalEstimate e;
  e.method = kM;
  try {
    const auto fit = dap_fit(std::span<const std::vector<double>>(segments), opt.order, opt.dap);
    if (!fit.converged) e.diagnostic = "DAP reached max_iter before tolerance";
    if (segments.size() > 1) {
      e.diagnostic += (e.diagnostic.empty() ? "" : "; ") + std::string("two closed phases pooled");
    }
    e.dflow = detail::inverse_filter_span(signal, fit.model, span);
  } catch (const Error& err) {
    return detail::invalid(kM, err.what());
  }
  e.begin = span.begin;
  e.gci = ctx.gci[ctx.anchor] - span.begin;
  detail::finalize(e, opt.leak);
  return e;
}

// Iterative adaptive inverse filtering on the four periods around the
// anchor GCI:
//   high-pass; g1 = LPC(1); vt1 = LPC(p) of x/g1; v1 = integrate(x/vt1);
//   g2 = LPC(4) of v1; vt2 = LPC(p) of integrate(x/g2); output x/vt2.
// LPC analyses see a Hann-weighted segment; inverse filtering does not.
inline GlottalEstimate iaif(std::span<const double> signal, const AnalysisContext& ctx,
                            const EstimatorOptions& opt = {},
                            std::optional<OutputSpan> out = std::nullopt) {
  constexpr Method kM = Method::IAIF;
  try {
    validate(ctx, signal.size());
  } catch (const Error& e) {
    return detail::invalid(kM, e.what());
  }
  const OutputSpan span = out.value_or(detail::default_span(ctx));
  if (span.end > signal.size() || span.begin >= span.end) {
    return detail::invalid(kM, "output span outside the signal");
  }
  const std::size_t g = ctx.gci[ctx.anchor];
  const std::size_t a = g >= 2 * ctx.t0 ? g - 2 * ctx.t0 : 0;
  const std::size_t b = std::min(signal.size(), g + 2 * ctx.t0);
  if (b - a < 3 * ctx.t0) return detail::invalid(kM, "fewer than three periods around the GCI");

  GlottalEstimate e;
  e.method = kM;
  try {
    const auto hp = highpass_zero_phase(signal, opt.highpass_hz, ctx.fs);
    const std::span<const double> x(hp.data() + a, b - a);
    const auto win = hann(x.size());
    auto lpc_w = [&](std::span<const double> s, std::size_t order) {
      return lpc(multiply(s, win), order);
    };
    const auto g1 = lpc_w(x, 1);
    const auto vt1 = lpc_w(inverse_filter(x, g1), opt.order);
    const auto v1 = integrate(inverse_filter(x, vt1), opt.leak);
    const auto g2 = lpc_w(v1, opt.order_glottis);
    const auto v2 = integrate(inverse_filter(x, g2), opt.leak);
    const auto vt2 = lpc_w(v2, opt.order);
    e.dflow = detail::inverse_filter_span(hp, vt2, span);
  } catch (const Error& err) {
    return detail::invalid(kM, err.what());
  }
  e.begin = span.begin;
  e.gci = g - span.begin;
  detail::finalize(e, opt.leak);
  return e;
}

inline std::size_t cepstrum_size(std::size_t frame_length) {
  return std::max<std::size_t>(4096, fft::next_power_of_two(4 * frame_length));
}

namespace detail {
// Write an anticausal sequence (circular, n = 0 at index 0) into a frame so
// that n = 0 lands on the GCI.
inline std::vector<double> anchor_at_gci(std::span<const double> circ, std::size_t frame_len,
                                         std::size_t gci) {
  const long n = static_cast<long>(circ.size());
  std::vector<double> out(frame_len, 0.0);
  for (std::size_t i = 0; i < frame_len; ++i) {
    const long q = static_cast<long>(i) - static_cast<long>(gci);
    if (-q >= n / 2 || q >= n / 2) continue;
    out[i] = circ[static_cast<std::size_t>(((q % n) + n) % n)];
  }
  return out;
}
}  // namespace detail

// Complex cepstrum decomposition: keep quefrencies n <= 0 and transform back.
inline GlottalEstimate ccd(const Frame& frame, const EstimatorOptions& opt = {}) {
  constexpr Method kM = Method::CCD;
  GlottalEstimate e;
  e.method = kM;
  try {
    const std::size_t nfft = cepstrum_size(frame.samples.size());
    auto cc = complex_cepstrum(frame, nfft);
    for (std::size_t i = 1; i < nfft / 2; ++i) cc.values[i] = 0.0;
    auto xmax = inverse_complex_cepstrum(cc.values);
    for (double& v : xmax) v *= cc.sign;
    e.dflow = detail::anchor_at_gci(xmax, frame.samples.size(), frame.center_gci);
  } catch (const Error& err) {
    return detail::invalid(kM, err.what());
  }
  e.gci = frame.center_gci;
  detail::finalize(e, opt.leak);
  return e;
}

// Zeros of the z-transform: rebuild x(0) prod (z - Z) over the zeros outside
// the unit circle. Zeros within 1e-8 of the circle are counted inside and
// reported.
inline GlottalEstimate zzt(const Frame& frame, const EstimatorOptions& opt = {}) {
  constexpr Method kM = Method::ZZT;
  GlottalEstimate e;
  e.method = kM;
  try {
    const auto z = zzt_roots(frame);
    std::vector<cplx> outside;
    std::size_t ambiguous = 0;
    for (const cplx& r : z.zeros) {
      const double m = std::abs(r);
      if (std::abs(m - 1.0) <= 1e-8) ++ambiguous;
      else if (m > 1.0) outside.push_back(r);
    }
    // Coefficient of z^m is the sample at n = -m; the common scale drops
    // out in finalize().
    const std::size_t n = cepstrum_size(frame.samples.size());
    const auto coeffs = detail::expand_on_circle(z.leading, outside, n);
    std::vector<double> timed(n, 0.0);
    for (std::size_t m = 0; m < n; ++m) timed[(n - m) % n] = coeffs[m];
    e.dflow = detail::anchor_at_gci(timed, frame.samples.size(), frame.center_gci);
    if (ambiguous > 0) {
      e.diagnostic = std::to_string(ambiguous) + " zero(s) on the unit circle counted inside";
    }
  } catch (const Error& err) {
    return detail::invalid(kM, err.what());
  }
  e.gci = frame.center_gci;
  detail::finalize(e, opt.leak);
  return e;
}

inline GlottalEstimate estimate_frame(Method m, const Frame& frame, const EstimatorOptions& opt = {}) {
  return m == Method::ZZT ? zzt(frame, opt) : ccd(frame, opt);
}

// Any method on the anchor GCI of `ctx`; mixed-phase methods build their
// two-period frame around it.
inline GlottalEstimate estimate(Method m, std::span<const double> signal, const AnalysisContext& ctx,
                                const EstimatorOptions& opt = {}) {
  switch (m) {
    case Method::CPIF: return cpif(signal, ctx, opt);
    case Method::IAIF: return iaif(signal, ctx, opt);
    case Method::CCD:
    case Method::ZZT: {
      try {
        validate(ctx, signal.size());
        const std::size_t g = ctx.gci[ctx.anchor];
        auto est = estimate_frame(m, make_frame(signal, g, ctx.t0, ctx.fs), opt);
        est.begin = g - ctx.t0;
        return est;
      } catch (const Error& err) {
        return detail::invalid(m, err.what());
      }
    }
  }
  return detail::invalid(m, "unknown method");
}

// Multi-period estimate on [span.begin, span.end). CPIF and IAIF reuse the
// anchor cycle's vocal tract; mixed-phase methods decompose a frame at every
// GCI and keep, from each, the period (previous GCI, GCI].
inline GlottalEstimate estimate_span(Method m, std::span<const double> signal,
                                     const AnalysisContext& ctx, OutputSpan span,
                                     const EstimatorOptions& opt = {}) {
  if (m == Method::CPIF) return cpif(signal, ctx, opt, span);
  if (m == Method::IAIF) return iaif(signal, ctx, opt, span);
  GlottalEstimate e;
  e.method = m;
  try {
    validate(ctx, signal.size());
    if (span.end > signal.size() || span.begin >= span.end) {
      throw InvalidParameter("output span outside the signal");
    }
    e.dflow.assign(span.end - span.begin, 0.0);
    for (std::size_t j = 0; j < ctx.gci.size(); ++j) {
      const std::size_t g = ctx.gci[j];
      const std::size_t prev = j > 0 ? ctx.gci[j - 1] : (g >= ctx.t0 ? g - ctx.t0 : 0);
      if (g < span.begin || prev + 1 >= span.end) continue;
      if (g < ctx.t0 || g + ctx.t0 > signal.size()) continue;
      const auto frame_est = estimate_frame(m, make_frame(signal, g, ctx.t0, ctx.fs), opt);
      if (!frame_est.valid) throw NumericalError("frame at GCI " + std::to_string(g) + ": " +
                                                 frame_est.diagnostic);
      const std::size_t len = std::min(g - prev, ctx.t0);
      for (std::size_t k = 0; k < len; ++k) {
        const std::size_t pos = g - k;  // signal index
        if (pos < span.begin || pos >= span.end) continue;
        e.dflow[pos - span.begin] = frame_est.dflow[frame_est.gci - k];
      }
    }
  } catch (const Error& err) {
    return detail::invalid(m, err.what());
  }
  e.begin = span.begin;
  const std::size_t g = ctx.gci[ctx.anchor];
  e.gci = g >= span.begin ? g - span.begin : 0;
  detail::finalize(e, opt.leak);
  return e;
}

}  // namespace glottkit
