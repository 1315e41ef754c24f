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

namespace bubblecut {

/// Selects the sequential reference loop or the OpenMP loop of a kernel.
/// Both variants perform the same per-node arithmetic in the same order,
/// so their outputs are bit-identical.
enum class Exec { serial, parallel };

/// Thread count for parallel kernels: the OpenMP default, capped by
/// BUBBLECUT_THREADS when set and positive. Read once per process.
int kernel_threads();

}  // namespace bubblecut
