// Copyright 2026 The gapdecomp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GAPDECOMP_ERRORS_HPP_
#define GAPDECOMP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace gapdecomp {

// Input or contract violation: unreadable files, malformed lines, values
// outside their documented domain. The CLI maps this to exit code 2.
class ContractError : public std::runtime_error {
 public:
  explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

// Internal numeric failure: divergence, non-finite intermediates, broken
// arithmetic invariants. The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gapdecomp

#endif  // GAPDECOMP_ERRORS_HPP_
