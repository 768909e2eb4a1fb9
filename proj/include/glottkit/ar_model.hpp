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

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "glottkit/error.hpp"

namespace glottkit {

// Reflection coefficients of A(z) = 1 + sum a_k z^-k by the step-down
// recursion. Returns false as soon as a coefficient reaches the unit circle,
// which is exactly the case where A(z) has a root on or outside it.
inline bool reflection_coefficients(std::span<const double> a,
                                    std::vector<double>* k_out = nullptr) {
  std::vector<double> cur(a.begin(), a.end());
  std::vector<double> k(cur.size());
  for (std::size_t m = cur.size(); m > 0; --m) {
    const double km = cur[m - 1];
    if (!std::isfinite(km) || std::abs(km) >= 1.0) return false;
    k[m - 1] = km;
    const double denom = 1.0 - km * km;
    std::vector<double> next(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) {
      next[i] = (cur[i] - km * cur[m - 2 - i]) / denom;
    }
    cur = std::move(next);
  }
  if (k_out) *k_out = std::move(k);
  return true;
}

inline bool is_stable(std::span<const double> a) {
  return reflection_coefficients(a);
}

// All-pole model gain / A(z), A(z) = 1 + sum_{k=1..p} a_k z^-k.
// Stability is checked on construction; a model that exists is stable.
class ARModel {
 public:
  ARModel() = default;

  ARModel(std::vector<double> coeffs, double gain)
      : coeffs_(std::move(coeffs)), gain_(gain) {
    if (!(gain_ > 0.0) || !std::isfinite(gain_)) {
      throw InvalidParameter("ARModel: gain must be positive and finite");
    }
    for (double c : coeffs_) {
      if (!std::isfinite(c)) {
        throw InvalidParameter("ARModel: non-finite coefficient");
      }
    }
    if (!is_stable(coeffs_)) {
      throw InvalidParameter("ARModel: A(z) has a root on or outside the unit circle");
    }
  }

  std::size_t order() const { return coeffs_.size(); }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double gain() const { return gain_; }

  // Polynomial [1, a_1, ..., a_p].
  std::vector<double> polynomial() const {
    std::vector<double> p(coeffs_.size() + 1, 1.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) p[i + 1] = coeffs_[i];
    return p;
  }

 private:
  std::vector<double> coeffs_;
  double gain_ = 1.0;
};

}  // namespace glottkit
