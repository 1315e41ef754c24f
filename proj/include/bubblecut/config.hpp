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

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "bubblecut/bubble.hpp"
#include "bubblecut/grid.hpp"
#include "json.hpp"

namespace bubblecut {

// A region described in coordinates, resolved against a grid and clipped to
// its domain. Kinds and their keys:
//   domain                          the whole domain
//   none                            the empty region
//   disk      cx, cy, r             Euclidean coordinate disk
//   box       xmin, xmax, ymin, ymax
//   band_x    lo, hi                lo ≤ x ≤ hi
//   band_y    lo, hi                lo ≤ y ≤ hi
//   boundary                        inside layer of the grid domain's rim
//   pgm       path                  mask file
//   union     parts                 union of the listed regions
struct RegionSpec {
  std::string kind = "domain";
  double cx = 0.0, cy = 0.0, r = 0.0;
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  double lo = 0.0, hi = 0.0;
  std::string path;
  std::vector<RegionSpec> parts;

  static RegionSpec of(std::string kind) {
    RegionSpec s;
    s.kind = std::move(kind);
    return s;
  }
  bool operator==(const RegionSpec&) const = default;
};

// A scalar field described in coordinates, defined on the domain nodes.
//   constant   value
//   two_level  inside, outside, radius, ramp, cx, cy
//              (linear between radius ∓ ramp/2)
//   quadratic  a, b, c, cx, cy      a(x-cx)² + b(y-cy)² + c
//   linear     ax, ay, c            ax·x + ay·y + c
//   radial     cx, cy               Euclidean distance to (cx, cy)
//   csv        path                 field file
struct FieldSpec {
  std::string kind = "constant";
  double value = 0.0;
  double inside = 0.0, outside = 0.0, radius = 0.0, ramp = 0.0;
  double a = 0.0, b = 0.0, c = 0.0, ax = 0.0, ay = 0.0;
  double cx = 0.0, cy = 0.0;
  std::string path;

  bool operator==(const FieldSpec&) const = default;
};

// Either a named generator with its parameters or a metric CSV file.
struct MetricSpec {
  std::string generator = "euclidean";
  nlohmann::json params = nlohmann::json::object();
  std::string csv;  // when non-empty, replaces the generator

  bool operator==(const MetricSpec&) const = default;
};

struct RunConfig {
  std::string operation = "trichotomy";
  MetricSpec metric;
  RegionSpec domain;
  BubbleSchedule schedule;
  FieldSpec phi;                // prescription or verification target
  double phi_floor = 0.0;       // trichotomy target
  RegionSpec include = RegionSpec::of("none");   // solve-bubble constraints
  RegionSpec exclude = RegionSpec::of("none");
  std::string choice = "minimal";
  bool count_exterior = false;
  RegionSpec seed_region = RegionSpec::of("none");  // grow
  RegionSpec end_a = RegionSpec::of("none");        // separate, classify
  RegionSpec end_b = RegionSpec::of("none");
  std::vector<RegionSpec> stages;  // staircase, outermost first
  FieldSpec field;                 // verify
  RegionSpec source = RegionSpec::of("none");       // distance
  double smoothing_radius = 0.0;   // staircase, trichotomy (0 = default)
  double morse_amplitude = 1e-3;
  bool classify_ends = true;
  double grad_floor = 0.0;         // verify (0 = default)
  std::string output_dir = "out";
  std::uint64_t seed = 0;

  bool operator==(const RunConfig&) const;
};

inline const std::vector<std::string>& operation_names() {
  static const std::vector<std::string> names = {
      "solve-bubble", "shrink", "grow", "separate", "classify",
      "trichotomy", "staircase", "verify", "distance"};
  return names;
}

// Strict parsing: unknown keys, wrong types and unknown kinds are errors.
// Missing keys take their defaults.
RunConfig config_from_json(const nlohmann::json& j);
// Canonical form with every key present; config_from_json inverts it.
nlohmann::json to_json(const RunConfig& config);
RunConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const RunConfig& config);

BubbleSchedule schedule_from_json(const nlohmann::json& j);

// Relative file references in a config resolve against `base`.
MetricGrid build_metric(const MetricSpec& spec, const std::filesystem::path& base);
Region build_region(const MetricGrid& grid, const RegionSpec& spec,
                    const std::filesystem::path& base);
ScalarField build_field(const MetricGrid& grid, const FieldSpec& spec,
                        const std::filesystem::path& base);

}  // namespace bubblecut
