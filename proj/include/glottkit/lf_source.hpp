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


// Liljencrants-Fant glottal source.
//
// One cycle of N = round(fs / f0) samples, in sample units:
//   open phase   0 <= n <= te :  E(n) = -Ee * exp(a (n - te)) sin(w n) / sin(w te)
//   return phase te < n < N   :  E(n) = -Ee / (eps ta) * (exp(-eps (n - te)) - exp(-eps (N - te)))
// with te = round(oq N) (the GCI), w = pi / (alpha_m te), ta = qa (N - te) and
// eps solving eps ta = 1 - exp(-eps (N - te)). The growth rate `a` is chosen so
// that the sampled derivative sums to zero over the cycle, which makes the
// flow (its running sum times 1/fs) return exactly to zero.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "glottkit/error.hpp"

namespace glottkit {

struct LFParams {
  double f0 = 100.0;      // Hz
  double oq = 0.6;        // open quotient
  double alpha_m = 0.7;   // asymmetry coefficient
  double qa = 0.1;        // return-phase quotient of the closed phase
  double ee = 1.0;        // excitation amplitude at the GCI
};

inline void validate(const LFParams& p) {
  auto bad = [](const std::string& what) { throw InvalidParameter("LFParams: " + what); };
  if (!(p.f0 > 0.0) || !std::isfinite(p.f0)) bad("f0 must be positive");
  if (!(p.oq > 0.0 && p.oq < 1.0)) bad("oq must lie in (0, 1)");
  if (!(p.alpha_m > 0.0 && p.alpha_m < 1.0)) bad("alpha_m must lie in (0, 1)");
  if (!(p.qa >= 0.0 && p.qa < 1.0)) bad("qa must lie in [0, 1)");
  if (!(p.ee > 0.0) || !std::isfinite(p.ee)) bad("ee must be positive");
}

struct GlottalCycle {
  std::vector<double> flow;
  std::vector<double> dflow;
  double fs = 16000.0;
  std::size_t gci_index = 0;
  // False for shapes whose open-phase trough undershoots -Ee before the GCI
  // (alpha_m close to 0.5 with weak growth); the GCI stays at the
  // open/return boundary.
  bool minimum_at_gci = true;

  std::size_t period() const { return dflow.size(); }
  double realized_f0() const { return fs / static_cast<double>(dflow.size()); }
};

namespace detail {

// Positive root of eps*ta = 1 - exp(-eps*d) by bisection (ta < d).
inline double solve_return_constant(double ta, double d) {
  auto f = [&](double e) { return e * ta + std::expm1(-e * d); };
  double lo = 1e-9 / ta;
  double hi = 1.0 / ta;
  if (!(f(lo) < 0.0)) throw SynthesisError("LF: cannot bracket the return-phase constant");
  // exp(-d/ta) below machine precision: the root is 1/ta to double accuracy.
  if (f(hi) <= 0.0) return hi;
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

struct LFShape {
  std::size_t n = 0;
  std::size_t te = 0;
  double omega = 0.0;
  double sin_te = 0.0;
  double return_sum = 0.0;
  std::vector<double> ret;  // samples te+1 .. n-1

  double open_sample(double a, std::size_t k, double ee) const {
    return -ee * std::exp(a * (static_cast<double>(k) - static_cast<double>(te))) *
           std::sin(omega * static_cast<double>(k)) / sin_te;
  }
  double open_sum(double a, double ee) const {
    double s = 0.0;
    for (std::size_t k = 0; k <= te; ++k) s += open_sample(a, k, ee);
    return s;
  }
};

}  // namespace detail

inline GlottalCycle synth_lf_cycle(const LFParams& p, double fs) {
  validate(p);
  if (!(fs >= 8000.0)) throw InvalidParameter("synth_lf_cycle: fs must be >= 8000 Hz");
  const long n_long = std::lround(fs / p.f0);
  if (n_long < 32) {
    throw ResolutionError("synth_lf_cycle: period of " + std::to_string(n_long) +
                          " samples is shorter than 32");
  }
  detail::LFShape s;
  s.n = static_cast<std::size_t>(n_long);
  s.te = static_cast<std::size_t>(std::lround(p.oq * static_cast<double>(s.n)));
  if (s.te < 2 || s.te + 1 >= s.n) {
    throw SynthesisError("LF: open phase leaves no room for opening or return");
  }
  const double te = static_cast<double>(s.te);
  s.omega = std::numbers::pi / (p.alpha_m * te);
  s.sin_te = std::sin(s.omega * te);
  if (!(s.sin_te < -1e-9)) {
    throw SynthesisError("LF: alpha_m <= 0.5 cannot place a negative excitation at the GCI");
  }

  const double d = static_cast<double>(s.n - s.te);
  const double ta = p.qa * d;
  s.ret.assign(s.n - s.te - 1, 0.0);
  if (ta > 0.0) {
    const double eps = detail::solve_return_constant(ta, d);
    const double tail = std::exp(-eps * d);
    for (std::size_t k = s.te + 1; k < s.n; ++k) {
      const double v = -p.ee / (eps * ta) *
                       (std::exp(-eps * static_cast<double>(k - s.te)) - tail);
      s.ret[k - s.te - 1] = v;
      s.return_sum += v;
    }
  }

  // Discrete area balance: open_sum(a) + return_sum = 0. Scan the growth
  // rate downwards from strongly growing (sum < 0) to the first sign change.
  auto total = [&](double a) { return s.open_sum(a, p.ee) + s.return_sum; };
  double hi = 0.0, lo = 0.0;
  bool bracketed = false;
  double prev_a = 200.0 / te;
  if (!(total(prev_a) < 0.0)) throw SynthesisError("LF: area balance has no solution");
  for (int j = 799; j >= -400; --j) {
    const double a = 0.25 * static_cast<double>(j) / te;
    if (total(a) > 0.0) {
      lo = a;
      hi = prev_a;
      bracketed = true;
      break;
    }
    prev_a = a;
  }
  if (!bracketed) throw SynthesisError("LF: area balance has no solution");
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) > 0.0 ? lo : hi) = mid;
  }
  const double a = 0.5 * (lo + hi);

  GlottalCycle c;
  c.fs = fs;
  c.gci_index = s.te;
  c.dflow.resize(s.n);
  for (std::size_t k = 0; k <= s.te; ++k) c.dflow[k] = s.open_sample(a, k, p.ee);
  for (std::size_t k = s.te + 1; k < s.n; ++k) c.dflow[k] = s.ret[k - s.te - 1];

  const auto argmin = static_cast<std::size_t>(
      std::min_element(c.dflow.begin(), c.dflow.end()) - c.dflow.begin());
  c.minimum_at_gci = argmin == s.te;

  const double ts = 1.0 / fs;
  c.flow.resize(s.n);
  double acc = 0.0;
  for (std::size_t k = 0; k < s.n; ++k) {
    acc += c.dflow[k];
    c.flow[k] = acc * ts;
  }
  const double peak = *std::max_element(c.flow.begin(), c.flow.end());
  for (double& v : c.flow) {
    if (v < 0.0) {
      if (v < -1e-9 * peak) throw SynthesisError("LF: flow becomes negative");
      v = 0.0;
    }
  }
  return c;
}

struct LFTrain {
  std::vector<double> dflow;
  std::vector<double> flow;
  std::vector<std::size_t> gci;
  std::vector<std::size_t> goi;      // cycle starts
  std::vector<std::size_t> periods;  // samples per cycle
  double fs = 16000.0;
};

inline LFTrain synth_lf_train(std::span<const LFParams> cycles, double fs) {
  if (cycles.empty()) throw InvalidParameter("synth_lf_train: empty cycle list");
  LFTrain t;
  t.fs = fs;
  for (const auto& p : cycles) {
    const auto c = synth_lf_cycle(p, fs);
    const std::size_t start = t.dflow.size();
    t.goi.push_back(start);
    t.gci.push_back(start + c.gci_index);
    t.periods.push_back(c.period());
    t.dflow.insert(t.dflow.end(), c.dflow.begin(), c.dflow.end());
    t.flow.insert(t.flow.end(), c.flow.begin(), c.flow.end());
  }
  return t;
}

}  // namespace glottkit
