// Copyright 2026 The oul Authors. All rights reserved.
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

#ifndef OUL_ERRORS_H_
#define OUL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace oul {

// Base of every error thrown by the library. The CLI maps subclasses to
// process exit codes (see tools/oul.cc).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point outside the declared domain, or an argument outside its range.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An enumeration would exceed a configured cap.
class SizeError : public Error {
 public:
  SizeError(const std::string& what, long long cap)
      : Error(what + " (cap " + std::to_string(cap) + ")"), cap_(cap) {}
  long long cap() const { return cap_; }

 private:
  long long cap_;
};

// Operation invalid in the object's current state.
class StateError : public Error {
 public:
  using Error::Error;
};

// A requested construction does not exist for the given inputs.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A labeled stream stopped being consistent with the concept class.
class RealizabilityError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

// An invariant asserted at run time was violated.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace oul

#endif  // OUL_ERRORS_H_
