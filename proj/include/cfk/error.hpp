// Copyright 2026 The cfk Authors
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

#ifndef CFK_ERROR_HPP_
#define CFK_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace cfk {

// Every failure raised by the library. Messages name the offending input
// (file, row, attribute) so callers can surface them directly.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when CF-K cannot reach k with desired-outcome neighbours.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace cfk

#endif  // CFK_ERROR_HPP_
