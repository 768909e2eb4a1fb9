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


// Numerical kernels shared by the estimators: analysis windows, linear
// prediction (autocorrelation/Levinson and discrete all-pole fitting),
// complex cepstrum, zeros of the z-transform, and the integrator used to go
// from flow derivative to flow.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

#include "glottkit/ar_model.hpp"
#include "glottkit/error.hpp"
#include "glottkit/fft.hpp"

namespace glottkit {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Windows

// Symmetric Blackman window, w(k) = w(L-1-k).
inline std::vector<double> blackman(std::size_t length) {
  if (length < 4) throw InvalidParameter("blackman: length must be >= 4");
  std::vector<double> w(length);
  const double denom = static_cast<double>(length - 1);
  for (std::size_t k = 0; k < length; ++k) {
    const double x = 2.0 * std::numbers::pi * static_cast<double>(k) / denom;
    w[k] = 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x);
  }
  // Exact zeros at the ends instead of ~1e-17 rounding residue.
  w.front() = 0.0;
  w.back() = 0.0;
  return w;
}

// Symmetric Hann window.
inline std::vector<double> hann(std::size_t length) {
  if (length < 2) throw InvalidParameter("hann: length must be >= 2");
  std::vector<double> w(length);
  const double denom = static_cast<double>(length - 1);
  for (std::size_t k = 0; k < length; ++k) {
    w[k] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / denom);
  }
  return w;
}

inline std::vector<double> multiply(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(std::min(a.size(), b.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

// ---------------------------------------------------------------------------
// Analysis frames

// A GCI-centred, two-period, Blackman-weighted segment. The window is the
// first 2*t0 points of a (2*t0 + 1)-point Blackman window so that its unit
// peak falls exactly on the GCI at index t0.
struct Frame {
  std::vector<double> samples;
  double fs = 16000.0;
  std::size_t center_gci = 0;  // index inside `samples`
  std::size_t t0 = 0;
};

inline std::vector<double> gci_window(std::size_t t0) {
  auto w = blackman(2 * t0 + 1);
  w.pop_back();
  return w;
}

inline Frame make_frame(std::span<const double> signal, std::size_t gci, std::size_t t0,
                        double fs) {
  if (t0 < 2) throw InvalidParameter("make_frame: t0 must be >= 2");
  if (gci < t0 || gci + t0 > signal.size()) {
    throw InvalidParameter("make_frame: two-period frame around GCI " + std::to_string(gci) +
                           " exceeds the signal");
  }
  const auto w = gci_window(t0);
  Frame f;
  f.fs = fs;
  f.t0 = t0;
  f.center_gci = t0;
  f.samples.resize(2 * t0);
  for (std::size_t i = 0; i < 2 * t0; ++i) f.samples[i] = signal[gci - t0 + i] * w[i];
  return f;
}

// ---------------------------------------------------------------------------
// Linear prediction

// Biased autocorrelation r(k) = sum_n x(n) x(n+k), k = 0..max_lag (unnormalised).
inline std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag) {
  std::vector<double> r(max_lag + 1, 0.0);
  for (std::size_t k = 0; k <= max_lag && k < x.size(); ++k) {
    double acc = 0.0;
    for (std::size_t n = 0; n + k < x.size(); ++n) acc += x[n] * x[n + k];
    r[k] = acc;
  }
  return r;
}

// Levinson-Durbin on r(0..order). Returns the model whose gain is the
// square root of the final prediction-error power.
inline ARModel levinson(std::span<const double> r, std::size_t order) {
  if (r.size() < order + 1) throw InvalidParameter("levinson: not enough lags");
  if (!(r[0] > 0.0) || !std::isfinite(r[0])) {
    throw NumericalError("levinson: zero-lag autocorrelation is not positive");
  }
  std::vector<double> a(order, 0.0);
  double err = r[0];
  for (std::size_t m = 0; m < order; ++m) {
    double acc = r[m + 1];
    for (std::size_t i = 0; i < m; ++i) acc += a[i] * r[m - i];
    const double k = -acc / err;
    if (!std::isfinite(k) || std::abs(k) >= 1.0) {
      throw NumericalError("levinson: singular autocorrelation at order " + std::to_string(m + 1));
    }
    std::vector<double> prev(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(m));
    for (std::size_t i = 0; i < m; ++i) a[i] = prev[i] + k * prev[m - 1 - i];
    a[m] = k;
    err *= (1.0 - k * k);
    if (!(err > 0.0)) throw NumericalError("levinson: prediction error vanished");
  }
  return ARModel(std::move(a), std::sqrt(err));
}

namespace detail {
inline void check_lpc_input(std::span<const double> x, std::size_t order) {
  if (x.size() <= order) throw InvalidParameter("lpc: signal must be longer than the order");
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  if (*mn == *mx) throw NumericalError("lpc: constant signal gives a singular autocorrelation");
}
}  // namespace detail

// Autocorrelation-method LPC. Order 0 yields the identity filter with gain
// equal to the RMS of the signal.
inline ARModel lpc(std::span<const double> x, std::size_t order) {
  detail::check_lpc_input(x, order);
  auto r = autocorrelation(x, order);
  const double n = static_cast<double>(x.size());
  for (double& v : r) v /= n;
  return levinson(r, order);
}

// LPC over several disjoint segments: autocorrelations are accumulated per
// segment so that no artificial junction enters the estimate.
inline ARModel lpc_pooled(std::span<const std::vector<double>> segments, std::size_t order) {
  std::vector<double> r(order + 1, 0.0);
  double total = 0.0;
  bool varies = false;
  for (const auto& s : segments) {
    const auto rs = autocorrelation(s, order);
    for (std::size_t k = 0; k <= order; ++k) r[k] += rs[k];
    total += static_cast<double>(s.size());
    if (!s.empty() && *std::min_element(s.begin(), s.end()) != *std::max_element(s.begin(), s.end())) {
      varies = true;
    }
  }
  if (total <= static_cast<double>(order)) {
    throw InvalidParameter("lpc: pooled segments shorter than the order");
  }
  if (!varies) throw NumericalError("lpc: constant signal gives a singular autocorrelation");
  for (double& v : r) v /= total;
  return levinson(r, order);
}

// ---------------------------------------------------------------------------
// Discrete all-pole modelling

struct DapOptions {
  std::size_t nbins = 512;  // frequencies on [0, pi); the fit uses 2*nbins on the full circle
  double tol = 1e-6;
  std::size_t max_iter = 100;
};

struct DapResult {
  ARModel model;
  double is_distance = 0.0;   // final discrete Itakura-Saito distance
  double is_initial = 0.0;    // same distance for the LPC initialiser
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> history;  // distance after each accepted iterate, starting with the LPC one
};

// Power spectrum of one or more segments on `m` uniform bins of the full
// circle, normalised by the total number of samples.
inline std::vector<double> pooled_power_spectrum(std::span<const std::vector<double>> segments,
                                                 std::size_t m) {
  std::vector<double> p(m, 0.0);
  double total = 0.0;
  for (const auto& s : segments) {
    const auto spec = fft::forward(s, m);
    for (std::size_t i = 0; i < m; ++i) p[i] += std::norm(spec[i]);
    total += static_cast<double>(s.size());
  }
  for (double& v : p) v /= total;
  return p;
}

// Discrete Itakura-Saito distance between a sampled power spectrum and the
// all-pole model 1/|A|^2 with its optimal gain:
//   D = ln(mean(P |A|^2)) - mean(ln(P |A|^2)).
inline double itakura_saito(std::span<const double> power, std::span<const double> a) {
  const std::size_t m = power.size();
  std::vector<double> poly(a.size() + 1, 1.0);
  for (std::size_t i = 0; i < a.size(); ++i) poly[i + 1] = a[i];
  const auto spec = fft::forward(poly, m);
  double mean_q = 0.0;
  double mean_log = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double q = power[i] * std::norm(spec[i]);
    mean_q += q;
    mean_log += std::log(q);
  }
  mean_q /= static_cast<double>(m);
  mean_log /= static_cast<double>(m);
  return std::log(mean_q) - mean_log;
}

namespace detail {
inline double optimal_gain(std::span<const double> power, std::span<const double> a) {
  std::vector<double> poly(a.size() + 1, 1.0);
  for (std::size_t i = 0; i < a.size(); ++i) poly[i + 1] = a[i];
  const auto spec = fft::forward(poly, power.size());
  double mean_q = 0.0;
  for (std::size_t i = 0; i < power.size(); ++i) mean_q += power[i] * std::norm(spec[i]);
  return std::sqrt(mean_q / static_cast<double>(power.size()));
}

// One El-Jaroudi/Makhoul fixed-point step: solve R c = h, where R is the
// autocorrelation of the sampled spectrum and h(i) = hhat(-i) is the
// time-aliased impulse response of the current model; a = c / c0.
inline std::vector<double> dap_step(std::span<const double> r, std::span<const double> a,
                                    std::size_t m) {
  const std::size_t p = a.size();
  std::vector<double> poly(p + 1, 1.0);
  for (std::size_t i = 0; i < p; ++i) poly[i + 1] = a[i];
  auto spec = fft::forward(poly, m);
  for (auto& v : spec) v = 1.0 / v;
  const auto h = fft::inverse_real(spec);
  Eigen::MatrixXd toeplitz(p + 1, p + 1);
  Eigen::VectorXd rhs(p + 1);
  for (std::size_t i = 0; i <= p; ++i) {
    for (std::size_t k = 0; k <= p; ++k) {
      toeplitz(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          r[i > k ? i - k : k - i];
    }
    rhs(static_cast<Eigen::Index>(i)) = h[(m - i) % m];
  }
  const Eigen::VectorXd c = toeplitz.ldlt().solve(rhs);
  std::vector<double> next(p);
  for (std::size_t i = 0; i < p; ++i) next[i] = c(static_cast<Eigen::Index>(i + 1)) / c(0);
  return next;
}
}  // namespace detail

// All-pole fit minimising the discrete Itakura-Saito distance on the pooled
// spectrum of `segments`. Initialised with the LPC solution of the same
// order; every accepted iterate strictly lowers the distance (a step that
// would not is halved until it does, or the fit stops).
inline DapResult dap_fit(std::span<const std::vector<double>> segments, std::size_t order,
                         const DapOptions& opt = {}) {
  std::size_t total = 0;
  for (const auto& s : segments) total += s.size();
  if (total < order + 2) throw InvalidParameter("dap_fit: need at least order + 2 samples");
  if (opt.nbins < 2 * order || opt.nbins < 2) {
    throw InvalidParameter("dap_fit: nbins must be at least twice the order");
  }
  const std::size_t m = 2 * opt.nbins;
  const auto power = pooled_power_spectrum(segments, m);
  const double peak = *std::max_element(power.begin(), power.end());
  for (std::size_t i = 0; i < m; ++i) {
    if (!(power[i] > peak * 1e-300) || !std::isfinite(power[i])) {
      throw NumericalError("dap_fit: degenerate spectrum (zero power at bin " +
                           std::to_string(i) + ")");
    }
  }
  const auto r = fft::inverse_real(std::vector<cplx>(power.begin(), power.end()));

  std::vector<double> a = segments.size() == 1 ? lpc(segments[0], order).coeffs()
                                               : lpc_pooled(segments, order).coeffs();
  DapResult res;
  double dist = itakura_saito(power, a);
  res.is_initial = dist;
  res.history.push_back(dist);

  for (std::size_t it = 0; it < opt.max_iter && order > 0; ++it) {
    const auto target = detail::dap_step(r, a, m);
    std::vector<double> cand(order);
    double step = 1.0;
    double cand_dist = dist;
    bool improved = false;
    for (int halving = 0; halving < 12; ++halving, step *= 0.5) {
      for (std::size_t i = 0; i < order; ++i) cand[i] = a[i] + step * (target[i] - a[i]);
      if (!is_stable(cand)) continue;
      cand_dist = itakura_saito(power, cand);
      if (std::isfinite(cand_dist) && cand_dist < dist) {
        improved = true;
        break;
      }
    }
    res.iterations = it + 1;
    if (!improved) {
      res.converged = true;
      break;
    }
    const double rel = (dist - cand_dist) / std::max(dist, 1e-300);
    a = cand;
    dist = cand_dist;
    res.history.push_back(dist);
    if (rel < opt.tol) {
      res.converged = true;
      break;
    }
  }
  if (order == 0) res.converged = true;
  res.is_distance = dist;
  res.model = ARModel(a, detail::optimal_gain(power, a));
  return res;
}

inline DapResult dap_fit(std::span<const double> x, std::size_t order,
                         const DapOptions& opt = {}) {
  const std::vector<std::vector<double>> one{std::vector<double>(x.begin(), x.end())};
  return dap_fit(std::span<const std::vector<double>>(one), order, opt);
}

// ---------------------------------------------------------------------------
// Complex cepstrum

// x^(n) on n in [-nfft/2, nfft/2), stored circularly (negative quefrencies at
// the end). `delay` is the integer linear-phase term removed before the
// inverse transform and `sign` the sign of X(0); both are needed to rebuild
// the signal.
struct ComplexCepstrum {
  std::vector<double> values;
  std::size_t nfft = 0;
  long delay = 0;
  int sign = 1;

  double at(long n) const {
    const long len = static_cast<long>(nfft);
    return values[static_cast<std::size_t>(((n % len) + len) % len)];
  }
};

// Threshold (pi-jump) unwrapping of a phase sequence.
inline std::vector<double> unwrap_phase(std::span<const double> phase) {
  std::vector<double> out(phase.begin(), phase.end());
  double offset = 0.0;
  for (std::size_t k = 1; k < phase.size(); ++k) {
    const double d = phase[k] - phase[k - 1];
    if (d > std::numbers::pi) offset -= 2.0 * std::numbers::pi;
    else if (d < -std::numbers::pi) offset += 2.0 * std::numbers::pi;
    out[k] = phase[k] + offset;
  }
  return out;
}

inline ComplexCepstrum complex_cepstrum(std::span<const double> x, std::size_t nfft) {
  if (nfft < 4 || !fft::is_power_of_two(nfft)) {
    throw InvalidParameter("complex_cepstrum: nfft must be a power of two >= 4");
  }
  if (x.size() > nfft) throw InvalidParameter("complex_cepstrum: frame longer than nfft");
  auto spec = fft::forward(x, nfft);
  for (std::size_t k = 0; k < nfft; ++k) {
    if (std::abs(spec[k]) < 1e-300) {
      throw NumericalError("complex_cepstrum: spectral zero at bin " + std::to_string(k));
    }
  }
  ComplexCepstrum cc;
  cc.nfft = nfft;
  if (spec[0].real() < 0.0) {
    cc.sign = -1;
    for (auto& v : spec) v = -v;
  }
  const std::size_t half = nfft / 2;
  std::vector<double> phase(half + 1);
  for (std::size_t k = 0; k <= half; ++k) phase[k] = std::arg(spec[k]);
  phase = unwrap_phase(phase);
  const long r = std::lround(phase[half] / std::numbers::pi);
  cc.delay = -r;
  std::vector<cplx> logspec(nfft);
  for (std::size_t k = 0; k <= half; ++k) {
    const double w = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(nfft);
    logspec[k] = cplx(std::log(std::abs(spec[k])), phase[k] - static_cast<double>(r) * w);
  }
  // Nyquist bin of a real signal: zero imaginary part after linear-phase removal.
  logspec[half] = cplx(logspec[half].real(), 0.0);
  for (std::size_t k = 1; k < half; ++k) logspec[nfft - k] = std::conj(logspec[k]);
  cc.values = fft::inverse_real(logspec);
  return cc;
}

inline ComplexCepstrum complex_cepstrum(const Frame& frame, std::size_t nfft) {
  return complex_cepstrum(std::span<const double>(frame.samples), nfft);
}

// Sequence (circular, length nfft) whose complex cepstrum is `values`;
// exp of the spectrum of the cepstrum, back to time. Sign and delay are not
// applied.
inline std::vector<double> inverse_complex_cepstrum(std::span<const double> values) {
  auto spec = fft::forward(values, values.size());
  for (auto& v : spec) v = std::exp(v);
  return fft::inverse_real(spec);
}

// ---------------------------------------------------------------------------
// Zeros of the z-transform

struct ZZTSet {
  std::vector<cplx> zeros;
  double leading = 0.0;          // x(0) after trimming leading zeros
  std::size_t leading_trim = 0;  // number of leading zero samples removed
  double reconstruction_error = 0.0;
};

// Descending-power coefficients of prod (z - r_k).
inline std::vector<cplx> poly_from_roots(std::span<const cplx> roots) {
  std::vector<cplx> c{cplx(1.0, 0.0)};
  c.reserve(roots.size() + 1);
  for (const cplx& r : roots) {
    c.push_back(cplx(0.0, 0.0));
    for (std::size_t i = c.size() - 1; i > 0; --i) c[i] -= r * c[i - 1];
  }
  return c;
}

namespace detail {

// Newton correction p(z)/p'(z) for descending
// coefficients `c`. Outside the unit circle the reversed polynomial in 1/z is
// evaluated instead, which keeps Horner's rule stable.
inline cplx newton_correction(std::span<const double> c, cplx z) {
  const auto n = static_cast<double>(c.size() - 1);
  cplx p = 0.0, dp = 0.0;
  if (std::abs(z) <= 1.0) {
    for (double a : c) {
      dp = dp * z + p;
      p = p * z + a;
    }
    return p / dp;
  }
  const cplx w = 1.0 / z;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    dp = dp * w + p;
    p = p * w + *it;
  }
  // p(z) = z^n q(1/z)  =>  p'/p = n/z - w^2 q'(w)/q(w)
  return 1.0 / (n / z - w * w * dp / p);
}

// Aberth-Ehrlich simultaneous refinement of all roots.
inline void aberth_polish(std::span<const double> c, std::vector<cplx>& z, int max_iter = 60) {
  const std::size_t n = z.size();
  // Coincident starting points never separate; nudge them apart.
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (std::abs(z[k] - z[j]) <= 1e-10 * std::max(1.0, std::abs(z[k]))) {
        z[k] += std::polar(1e-6 * std::max(1.0, std::abs(z[k])), 0.7 + static_cast<double>(k));
      }
    }
  }
  for (int it = 0; it < max_iter; ++it) {
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const cplx nc = newton_correction(c, z[k]);
      if (!std::isfinite(nc.real()) || !std::isfinite(nc.imag())) continue;
      cplx s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) s += 1.0 / (z[k] - z[j]);
      }
      const cplx step = nc / (1.0 - nc * s);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      z[k] -= step;
      worst = std::max(worst, std::abs(step) / std::max(1.0, std::abs(z[k])));
    }
    if (worst < 1e-14) break;
  }
}

// Coefficients of lead * prod (z - Z_k), lowest power first, computed by
// evaluating the product on n >= roots + 1 points of the unit circle and
// transforming back. Log-magnitudes keep large products finite; the result
// is returned divided by exp(*log_scale).
inline std::vector<double> expand_on_circle(double lead, std::span<const cplx> roots,
                                            std::size_t n, double* log_scale = nullptr) {
  if (n < roots.size() + 1) throw InvalidParameter("expand_on_circle: too few points");
  std::vector<double> logmag(n, std::log(std::abs(lead)));
  std::vector<double> phase(n, lead < 0.0 ? std::numbers::pi : 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx u = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                       static_cast<double>(n));
    for (const cplx& r : roots) {
      const cplx f = u - r;
      logmag[k] += std::log(std::abs(f));
      phase[k] += std::arg(f);
    }
  }
  const double peak = *std::max_element(logmag.begin(), logmag.end());
  if (log_scale) *log_scale = peak;
  // P(u) = sum_m c_m u^m, so conj(P) is the plain DFT of c.
  std::vector<cplx> spec(n);
  for (std::size_t k = 0; k < n; ++k) spec[k] = std::polar(std::exp(logmag[k] - peak), -phase[k]);
  return fft::inverse_real(spec);
}

}  // namespace detail

inline ZZTSet zzt_roots(std::span<const double> x) {
  if (x.size() < 2) throw InvalidParameter("zzt_roots: need at least 2 samples");
  std::size_t lead = 0;
  while (lead < x.size() && x[lead] == 0.0) ++lead;
  if (lead + 1 >= x.size()) {
    throw InvalidParameter("zzt_roots: fewer than 2 samples after trimming leading zeros");
  }
  std::size_t end = x.size();
  while (end > lead + 1 && x[end - 1] == 0.0) --end;
  const std::size_t zero_roots = x.size() - end;

  ZZTSet out;
  out.leading_trim = lead;
  out.leading = x[lead];
  const std::size_t deg = end - lead - 1;
  const double x0 = x[lead];
  if (deg == 1) {
    out.zeros.push_back(cplx(-x[lead + 1] / x0, 0.0));
  } else if (deg > 1) {
    // Eigen wants increasing powers; leading coefficient of z^deg is x0.
    Eigen::VectorXd coeffs(static_cast<Eigen::Index>(deg + 1));
    for (std::size_t j = 0; j <= deg; ++j) {
      coeffs(static_cast<Eigen::Index>(j)) = x[end - 1 - j] / x0;
    }
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
    solver.compute(coeffs);
    const auto& roots = solver.roots();
    for (Eigen::Index i = 0; i < roots.size(); ++i) out.zeros.push_back(roots(i));
    // Eigenvalues of a high-degree companion matrix are only a few digits
    // good; which side of the circle a near-circle zero lands on matters here.
    std::vector<double> desc(x.begin() + static_cast<std::ptrdiff_t>(lead),
                             x.begin() + static_cast<std::ptrdiff_t>(end));
    detail::aberth_polish(desc, out.zeros);
  }
  for (std::size_t i = 0; i < zero_roots; ++i) out.zeros.push_back(cplx(0.0, 0.0));

  // x(lead + i) is the coefficient of z^(N - 1 - i).
  const std::size_t len = x.size() - lead;
  double scale = 0.0;
  const auto rebuilt = detail::expand_on_circle(
      x0, out.zeros, std::max<std::size_t>(64, fft::next_power_of_two(len)), &scale);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double ref = x[lead + i];
    num = std::max(num, std::abs(std::exp(scale) * rebuilt[len - 1 - i] - ref));
    den = std::max(den, std::abs(ref));
  }
  out.reconstruction_error = num / den;
  return out;
}

inline ZZTSet zzt_roots(const Frame& frame) {
  return zzt_roots(std::span<const double>(frame.samples));
}

// Complex cepstrum of a root-factored sequence on quefrencies -nmax..nmax
// (index n + nmax):
//   n > 0:  -sum_{|Z|<1} Z^n / n
//   n < 0:   sum_{|Z|>1} Z^n / n
//   n = 0:   ln |x(0) prod_{|Z|>1} Z|
// Roots on the unit circle (within 1e-8) are counted as inside.
inline std::vector<double> cepstrum_from_roots(const ZZTSet& z, long nmax) {
  std::vector<double> c(static_cast<std::size_t>(2 * nmax + 1), 0.0);
  double c0 = std::log(std::abs(z.leading));
  for (const cplx& root : z.zeros) {
    const bool outside = std::abs(root) > 1.0 + 1e-8;
    if (outside) c0 += std::log(std::abs(root));
    for (long n = 1; n <= nmax; ++n) {
      if (outside) {
        const cplx v = std::pow(root, -static_cast<double>(n)) / static_cast<double>(-n);
        c[static_cast<std::size_t>(nmax - n)] += v.real();
      } else {
        const cplx v = std::pow(root, static_cast<double>(n)) / static_cast<double>(n);
        c[static_cast<std::size_t>(nmax + n)] -= v.real();
      }
    }
  }
  c[static_cast<std::size_t>(nmax)] = c0;
  return c;
}

// ---------------------------------------------------------------------------
// Integration / differentiation

// y(n) = leak * y(n-1) + x(n), zero initial state.
inline std::vector<double> integrate(std::span<const double> x, double leak = 1.0) {
  if (!(leak > 0.9 && leak <= 1.0)) {
    throw InvalidParameter("integrate: leak must lie in (0.9, 1.0]");
  }
  std::vector<double> y(x.size());
  double acc = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    acc = leak * acc + x[n];
    y[n] = acc;
  }
  return y;
}

// First difference y(n) = x(n) - x(n-1), x(-1) = 0.
inline std::vector<double> differentiate(std::span<const double> x) {
  std::vector<double> y(x.size());
  double prev = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    y[n] = x[n] - prev;
    prev = x[n];
  }
  return y;
}

}  // namespace glottkit
