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
#include <string>

#include "bubblecut/bubble.hpp"
#include "bubblecut/convexify.hpp"
#include "bubblecut/cut.hpp"
#include "bubblecut/geometry.hpp"
#include "bubblecut/grid.hpp"
#include "bubblecut/trichotomy.hpp"
#include "json.hpp"

namespace bubblecut {

// Field CSV: the header line "nx,ny,h,topology", one line of values, then ny
// rows of nx values (row j = 0 first). Undefined nodes read "nan".
void write_field_csv(const std::filesystem::path& path, const MetricGrid& grid,
                     const ScalarField& field);
// Reads a field written for a grid of the same shape; throws otherwise.
ScalarField read_field_csv(const std::filesystem::path& path, const MetricGrid& grid);

// Metric CSV: the field header, a line "x0,y0" with its values, then either
// "lambda,domain" (conformal) or "g11,g12,g22,domain" followed by one line
// per node in row-major order.
void write_metric_csv(const std::filesystem::path& path, const MetricGrid& grid);
MetricGrid read_metric_csv(const std::filesystem::path& path);

// Binary PGM (P5), 255 inside and 0 outside; the first image row is the
// highest grid row so that images display with y pointing up.
void write_region_pgm(const std::filesystem::path& path, const Region& region);
Region read_region_pgm(const std::filesystem::path& path);

// Pretty-printed JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& value);
nlohmann::json read_json(const std::filesystem::path& path);

nlohmann::json grid_header(const MetricGrid& grid);
nlohmann::json to_json(const CurvatureSummary& summary);
nlohmann::json to_json(const CriticalPoint& point, const MetricGrid& grid);
nlohmann::json to_json(const ConvexityReport& report, const MetricGrid& grid);
nlohmann::json to_json(const BubbleSchedule& schedule);
nlohmann::json to_json(const Verdict& verdict);

// Writes step_NNN.pgm per trace region and manifest.json (schedule,
// energies, motions, confinement, verdict, per-step boundary curvature).
void write_trace(const std::filesystem::path& dir, const MetricGrid& grid, const BubbleRun& run,
                 const BubbleSchedule& schedule);

}  // namespace bubblecut
