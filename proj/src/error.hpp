// Copyright 2026 The cskit Authors.
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

#ifndef CSKIT_ERROR_HPP
#define CSKIT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cskit {

enum class ErrorCode {
  invalid_argument,  // bad parameter or handle misuse
  io,                // file cannot be opened / read / written
  parse,             // malformed input text
  validation,        // well-formed input breaking a domain rule
  oov,               // out-of-vocabulary word under a closed vocabulary
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cskit

#endif  // CSKIT_ERROR_HPP
