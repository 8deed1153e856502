// Copyright 2026 The agestruct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace agestruct {

// Invalid or inconsistent run configuration. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A certificate could not be constructed for the given kernels/gains
// (Assumption 1 fails, empty constraint slice). Maps to exit code 3.
class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Generic numerical failure (bracket expansion, degenerate grid).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace agestruct
