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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace glottkit::fft {

using cplx = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace detail {
// Eigen's FFT object caches twiddle plans and is not safe to share across
// threads; one instance per thread.
inline Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}
}  // namespace detail

// Full nfft-point spectrum of a real sequence. Longer inputs are folded
// (time-aliased) onto nfft points, which samples the DTFT at the same bins.
inline std::vector<cplx> forward(std::span<const double> x, std::size_t nfft) {
  std::vector<double> buf(nfft, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) buf[i % nfft] += x[i];
  std::vector<cplx> out;
  detail::engine().fwd(out, buf);
  return out;
}

inline std::vector<cplx> forward(std::span<const cplx> x) {
  std::vector<cplx> in(x.begin(), x.end());
  std::vector<cplx> out;
  detail::engine().fwd(out, in);
  return out;
}

// Inverse transform (scaled by 1/n) of a Hermitian spectrum; real part only.
inline std::vector<double> inverse_real(std::span<const cplx> spectrum) {
  std::vector<cplx> in(spectrum.begin(), spectrum.end());
  std::vector<cplx> out;
  detail::engine().inv(out, in);
  std::vector<double> re(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) re[i] = out[i].real();
  return re;
}

inline std::vector<cplx> inverse(std::span<const cplx> spectrum) {
  std::vector<cplx> in(spectrum.begin(), spectrum.end());
  std::vector<cplx> out;
  detail::engine().inv(out, in);
  return out;
}

}  // namespace glottkit::fft
