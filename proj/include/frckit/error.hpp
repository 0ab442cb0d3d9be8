// Copyright 2026 The frc-kit Authors. All Rights Reserved.
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

namespace frckit {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Caller-supplied data or configuration violates a precondition
/// (bad file, size mismatch, out-of-range parameter, empty ring).
class InputError : public Error {
public:
  using Error::Error;
};

/// A numerical self-consistency check failed; indicates a bug rather than
/// bad input.
class InternalError : public Error {
public:
  using Error::Error;
};

} // namespace frckit
