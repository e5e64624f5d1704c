// Copyright 2026 The awe Authors
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

#ifndef AWE_ERROR_HPP_
#define AWE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace awe {

// Base class for every error raised by the library. The CLI maps these to
// exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation was violated.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Two objects that must share a shape (horizon, dimension) do not.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

// Conditioning on a prefix that carries no mass.
class UnsupportedPrefix : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration would exceed the dense state-space guard.
class StateSpaceTooLarge : public Error {
 public:
  using Error::Error;
};

// Malformed input file or unwritable output location.
class IoError : public Error {
 public:
  using Error::Error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

}  // namespace awe

#endif  // AWE_ERROR_HPP_
