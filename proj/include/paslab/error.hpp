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

#include <stdexcept>
#include <string>

namespace paslab {

/// Invalid parameters or inconsistent configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An amplitude sequence whose multiset differs from the expected composition.
class CompositionMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A rank outside the codebook (or outside the 2^k used codewords).
class RankOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A computation whose result would be undefined (zero-energy block, ...).
class DegenerateInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised by the propagation engine when the field blows up.
class NumericalInstability : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace paslab
