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

// Waveform checkpoints: 16-byte header ("PASWAVE1" then the sample count as
// little-endian uint64) followed by little-endian complex64 samples.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "paslab/error.hpp"
#include "paslab/fiber/fft.hpp"

namespace paslab::fiber {

inline constexpr std::array<char, 8> kWaveformMagic = {'P', 'A', 'S', 'W', 'A', 'V', 'E', '1'};

namespace detail {
inline void put_u32(std::ostream& os, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}
inline std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 | std::uint32_t{b[2]} << 16 | std::uint32_t{b[3]} << 24;
}
}  // namespace detail

inline void write_waveform(const std::string& path, const Field& x) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open " + path + " for writing");
  os.write(kWaveformMagic.data(), kWaveformMagic.size());
  const std::uint64_t n = x.size();
  detail::put_u32(os, static_cast<std::uint32_t>(n));
  detail::put_u32(os, static_cast<std::uint32_t>(n >> 32));
  for (const auto& v : x) {
    detail::put_u32(os, std::bit_cast<std::uint32_t>(static_cast<float>(v.real())));
    detail::put_u32(os, std::bit_cast<std::uint32_t>(static_cast<float>(v.imag())));
  }
}

inline Field read_waveform(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path);
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kWaveformMagic) throw ConfigError(path + " is not a waveform checkpoint");
  const std::uint64_t lo = detail::get_u32(is);
  const std::uint64_t hi = detail::get_u32(is);
  const std::uint64_t n = lo | hi << 32;
  Field x(n);
  for (auto& v : x) {
    const float re = std::bit_cast<float>(detail::get_u32(is));
    const float im = std::bit_cast<float>(detail::get_u32(is));
    v = {re, im};
  }
  if (!is) throw ConfigError(path + " is truncated");
  return x;
}

}  // namespace paslab::fiber
