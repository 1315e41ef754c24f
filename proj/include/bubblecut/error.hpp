// Copyright 2026 The BubbleCut Authors.
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
#include <string_view>

namespace bubblecut {

// Every failure raised by the library carries the module that detected it
// and a short stable message; what() reads "module: message".
class Error : public std::runtime_error {
 public:
  Error(std::string module, std::string message)
      : std::runtime_error(module + ": " + message),
        module_(std::move(module)),
        message_(std::move(message)) {}

  const std::string& module() const noexcept { return module_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string module_;
  std::string message_;
};

[[noreturn]] inline void fail(std::string_view module, std::string_view message) {
  throw Error(std::string(module), std::string(message));
}

}  // namespace bubblecut
