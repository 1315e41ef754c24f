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

#include <filesystem>
#include <ostream>

#include "bubblecut/config.hpp"

namespace bubblecut {

// Exit statuses of a run.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitVerificationFailed = 2;

struct RunOptions {
  std::filesystem::path base_dir;  // resolves relative file references
  bool verbose = false;
  std::ostream* log = nullptr;     // progress and errors; std::cerr when null
};

// Executes the configured operation and writes report.json, config.json and
// the operation's masks and fields into config.output_dir. Returns kExitOk on
// a clean verdict, kExitVerificationFailed when an emitted function fails
// verification (or the maximum-principle cross-check disagrees) and
// kExitError on any error, whose module-qualified message goes to the log.
// Reports carry no timestamps: identical configs give identical bytes.
int run(const RunConfig& config, const RunOptions& options = {});

}  // namespace bubblecut
