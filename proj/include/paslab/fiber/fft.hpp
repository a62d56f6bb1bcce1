// Copyright 2026 The paslab Authors. All Rights Reserved.
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
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace paslab::fiber {

using Field = std::vector<std::complex<double>>;

/// In-place complex DFT of one size. Plans use FFTW_ESTIMATE so that the
/// chosen algorithm, and therefore the rounding, is identical across runs.
class FftPlan {
 public:
  explicit FftPlan(std::size_t size) : size_(size) {
    static std::mutex planner_mu;  // the FFTW planner is not thread-safe
    std::lock_guard<std::mutex> lock(planner_mu);
    Field scratch(size);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int n = static_cast<int>(size);
    forward_ = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    backward_ = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  ~FftPlan() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  [[nodiscard]] std::size_t size() const noexcept { return size_; }

  /// X[k] = sum_t x[t] exp(-2 pi i k t / L), unnormalized.
  void forward(Field& x) const {
    auto* p = reinterpret_cast<fftw_complex*>(x.data());
    fftw_execute_dft(forward_, p, p);
  }

  /// Inverse transform including the 1/L factor.
  void inverse(Field& x) const {
    auto* p = reinterpret_cast<fftw_complex*>(x.data());
    fftw_execute_dft(backward_, p, p);
    const double s = 1.0 / static_cast<double>(size_);
    for (auto& v : x) v *= s;
  }

 private:
  std::size_t size_;
  fftw_plan forward_;
  fftw_plan backward_;
};

/// Shared plan for `size`; plans live for the whole process.
inline const FftPlan& fft_plan(std::size_t size) {
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<FftPlan>> plans;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = plans[size];
  if (!slot) slot = std::make_unique<FftPlan>(size);
  return *slot;
}

inline Field fft(Field x) {
  fft_plan(x.size()).forward(x);
  return x;
}

inline Field ifft(Field x) {
  fft_plan(x.size()).inverse(x);
  return x;
}

/// Signed frequency of DFT bin k for a grid of L samples at rate fs.
inline double bin_frequency(std::size_t k, std::size_t size, double sample_rate) noexcept {
  const auto kk = static_cast<double>(k);
  const auto l = static_cast<double>(size);
  return (k < (size + 1) / 2 ? kk : kk - l) * sample_rate / l;
}

inline double mean_power(const Field& x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return s / static_cast<double>(x.size());
}

}  // namespace paslab::fiber
