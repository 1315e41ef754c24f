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


#include "bubblecut/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <tuple>

#include "bubblecut/error.hpp"
#include "bubblecut/geometry.hpp"
#include "bubblecut/io.hpp"
#include "bubblecut/metrics.hpp"

namespace bubblecut {

namespace {

constexpr std::string_view kModule = "cli-io";
using nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) fail(kModule, "'" + where + "' must be an object");
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  require_object(j, where);
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      fail(kModule, "unknown key '" + item.key() + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& j, const std::string& key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  bool ok = false;
  if constexpr (std::is_same_v<T, bool>) ok = v.is_boolean();
  else if constexpr (std::is_same_v<T, std::string>) ok = v.is_string();
  else if constexpr (std::is_same_v<T, std::uint64_t>) ok = v.is_number_unsigned();
  else if constexpr (std::is_integral_v<T>) ok = v.is_number_integer();
  else ok = v.is_number();
  if (!ok) fail(kModule, "'" + where + "." + key + "' has the wrong type");
  out = v.get<T>();
}

const std::map<std::string, std::set<std::string>>& region_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"domain", {}},
      {"none", {}},
      {"disk", {"cx", "cy", "r"}},
      {"box", {"xmin", "xmax", "ymin", "ymax"}},
      {"band_x", {"lo", "hi"}},
      {"band_y", {"lo", "hi"}},
      {"boundary", {}},
      {"pgm", {"path"}},
      {"union", {"parts"}}};
  return keys;
}

const std::map<std::string, std::set<std::string>>& field_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"constant", {"value"}},
      {"two_level", {"inside", "outside", "radius", "ramp", "cx", "cy"}},
      {"quadratic", {"a", "b", "c", "cx", "cy"}},
      {"linear", {"ax", "ay", "c"}},
      {"radial", {"cx", "cy"}},
      {"csv", {"path"}}};
  return keys;
}

const std::map<std::string, std::set<std::string>>& generator_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"euclidean", {"n", "xmin", "xmax", "ymin", "ymax", "lambda"}},
      {"conformal_radial", {"n", "xmin", "xmax", "ymin", "ymax", "a", "b"}},
      {"poincare_disk", {"n", "extent", "domain_radius"}},
      {"warped_cylinder", {"n", "w", "table", "t0", "t1", "period"}},
      {"flat_torus", {"n", "period_x", "period_y"}},
      {"perturbed_flat", {"n", "xmin", "xmax", "ymin", "ymax", "bumps", "topology"}}};
  return keys;
}

std::string kind_of(const json& j, const std::string& where, const std::string& fallback) {
  std::string kind = fallback;
  read(j, "kind", kind, where);
  return kind;
}

// Pairs each numeric key with its member, shared by parsing and emission.
template <typename Fn>
void for_each_number(RegionSpec& s, Fn&& fn) {
  fn("cx", s.cx); fn("cy", s.cy); fn("r", s.r);
  fn("xmin", s.xmin); fn("xmax", s.xmax); fn("ymin", s.ymin); fn("ymax", s.ymax);
  fn("lo", s.lo); fn("hi", s.hi);
}

template <typename Fn>
void for_each_number(FieldSpec& s, Fn&& fn) {
  fn("value", s.value); fn("inside", s.inside); fn("outside", s.outside);
  fn("radius", s.radius); fn("ramp", s.ramp);
  fn("a", s.a); fn("b", s.b); fn("c", s.c); fn("ax", s.ax); fn("ay", s.ay);
  fn("cx", s.cx); fn("cy", s.cy);
}

RegionSpec region_from_json(const json& j, const std::string& where) {
  require_object(j, where);
  RegionSpec s;
  s.kind = kind_of(j, where, "domain");
  const auto it = region_keys().find(s.kind);
  if (it == region_keys().end()) fail(kModule, "unknown region kind '" + s.kind + "' in " + where);
  auto allowed = it->second;
  allowed.insert("kind");
  check_keys(j, allowed, where);
  for_each_number(s, [&](const char* key, double& v) { read(j, key, v, where); });
  read(j, "path", s.path, where);
  if (j.contains("parts")) {
    if (!j.at("parts").is_array()) fail(kModule, "'" + where + ".parts' must be an array");
    for (std::size_t i = 0; i < j.at("parts").size(); ++i) {
      s.parts.push_back(region_from_json(j.at("parts")[i], where + ".parts[" + std::to_string(i) + "]"));
    }
  }
  return s;
}

json region_to_json(const RegionSpec& spec) {
  RegionSpec s = spec;
  json j = {{"kind", s.kind}};
  const auto& allowed = region_keys().at(s.kind);
  for_each_number(s, [&](const char* key, double& v) {
    if (allowed.count(key)) j[key] = v;
  });
  if (allowed.count("path")) j["path"] = s.path;
  if (allowed.count("parts")) {
    j["parts"] = json::array();
    for (const auto& p : s.parts) j["parts"].push_back(region_to_json(p));
  }
  return j;
}

FieldSpec field_from_json(const json& j, const std::string& where) {
  require_object(j, where);
  FieldSpec s;
  s.kind = kind_of(j, where, "constant");
  const auto it = field_keys().find(s.kind);
  if (it == field_keys().end()) fail(kModule, "unknown field kind '" + s.kind + "' in " + where);
  auto allowed = it->second;
  allowed.insert("kind");
  check_keys(j, allowed, where);
  for_each_number(s, [&](const char* key, double& v) { read(j, key, v, where); });
  read(j, "path", s.path, where);
  return s;
}

json field_to_json(const FieldSpec& spec) {
  FieldSpec s = spec;
  json j = {{"kind", s.kind}};
  const auto& allowed = field_keys().at(s.kind);
  for_each_number(s, [&](const char* key, double& v) {
    if (allowed.count(key)) j[key] = v;
  });
  if (allowed.count("path")) j["path"] = s.path;
  return j;
}

void check_generator_params(const std::string& generator, const json& params,
                            const std::string& where) {
  const auto it = generator_keys().find(generator);
  if (it == generator_keys().end()) fail(kModule, "unknown metric generator '" + generator + "'");
  check_keys(params, it->second, where);
  if (params.contains("bumps")) {
    if (!params.at("bumps").is_array()) fail(kModule, "'" + where + ".bumps' must be an array");
    for (const auto& b : params.at("bumps")) {
      check_keys(b, {"x", "y", "amplitude", "width"}, where + ".bumps[]");
    }
  }
}

MetricSpec metric_from_json(const json& j) {
  check_keys(j, {"generator", "params", "csv"}, "metric");
  MetricSpec s;
  read(j, "csv", s.csv, "metric");
  if (!s.csv.empty() && (j.contains("generator") || j.contains("params"))) {
    fail(kModule, "metric takes either 'csv' or 'generator' with 'params'");
  }
  read(j, "generator", s.generator, "metric");
  if (j.contains("params")) s.params = j.at("params");
  require_object(s.params, "metric.params");
  if (s.csv.empty()) check_generator_params(s.generator, s.params, "metric.params");
  return s;
}

json metric_to_json(const MetricSpec& s) {
  if (!s.csv.empty()) return {{"csv", s.csv}};
  return {{"generator", s.generator}, {"params", s.params}};
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& path) {
  if (path.empty()) fail(kModule, "empty file path");
  const std::filesystem::path p(path);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

BubbleSchedule schedule_from_json(const json& j) {
  check_keys(j, {"epsilon0", "decay", "rho", "phi_big", "max_steps", "stall_tolerance",
                 "kappa_tol"},
             "schedule");
  BubbleSchedule s;
  read(j, "epsilon0", s.epsilon0, "schedule");
  read(j, "decay", s.decay, "schedule");
  read(j, "rho", s.rho, "schedule");
  read(j, "phi_big", s.phi_big, "schedule");
  read(j, "max_steps", s.max_steps, "schedule");
  read(j, "stall_tolerance", s.stall_tolerance, "schedule");
  read(j, "kappa_tol", s.kappa_tol, "schedule");
  return s;
}

bool RunConfig::operator==(const RunConfig& o) const {
  auto schedule_tuple = [](const BubbleSchedule& s) {
    return std::tie(s.epsilon0, s.decay, s.rho, s.phi_big, s.max_steps, s.stall_tolerance,
                    s.kappa_tol);
  };
  auto rest = [](const RunConfig& c) {
    return std::tie(c.operation, c.metric, c.domain, c.phi, c.phi_floor, c.include, c.exclude,
                    c.choice, c.count_exterior, c.seed_region, c.end_a, c.end_b, c.stages,
                    c.field, c.source, c.smoothing_radius, c.morse_amplitude, c.classify_ends,
                    c.grad_floor, c.output_dir, c.seed);
  };
  return schedule_tuple(schedule) == schedule_tuple(o.schedule) && rest(*this) == rest(o);
}

RunConfig config_from_json(const json& j) {
  check_keys(j, {"operation", "metric", "domain", "schedule", "phi", "phi_floor", "include",
                 "exclude", "choice", "count_exterior", "seed_region", "end_a", "end_b",
                 "stages", "field", "source", "smoothing_radius", "morse_amplitude",
                 "classify_ends", "grad_floor", "output_dir", "seed"},
             "config");
  RunConfig c;
  read(j, "operation", c.operation, "config");
  const auto& ops = operation_names();
  if (std::find(ops.begin(), ops.end(), c.operation) == ops.end()) {
    fail(kModule, "unknown operation '" + c.operation + "'");
  }
  if (j.contains("metric")) c.metric = metric_from_json(j.at("metric"));
  if (j.contains("domain")) c.domain = region_from_json(j.at("domain"), "domain");
  if (j.contains("schedule")) c.schedule = schedule_from_json(j.at("schedule"));
  if (j.contains("phi")) c.phi = field_from_json(j.at("phi"), "phi");
  read(j, "phi_floor", c.phi_floor, "config");
  if (j.contains("include")) c.include = region_from_json(j.at("include"), "include");
  if (j.contains("exclude")) c.exclude = region_from_json(j.at("exclude"), "exclude");
  read(j, "choice", c.choice, "config");
  if (c.choice != "minimal" && c.choice != "maximal") {
    fail(kModule, "choice must be 'minimal' or 'maximal'");
  }
  read(j, "count_exterior", c.count_exterior, "config");
  if (j.contains("seed_region")) c.seed_region = region_from_json(j.at("seed_region"), "seed_region");
  if (j.contains("end_a")) c.end_a = region_from_json(j.at("end_a"), "end_a");
  if (j.contains("end_b")) c.end_b = region_from_json(j.at("end_b"), "end_b");
  if (j.contains("stages")) {
    if (!j.at("stages").is_array()) fail(kModule, "'stages' must be an array");
    for (std::size_t i = 0; i < j.at("stages").size(); ++i) {
      c.stages.push_back(region_from_json(j.at("stages")[i], "stages[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("field")) c.field = field_from_json(j.at("field"), "field");
  if (j.contains("source")) c.source = region_from_json(j.at("source"), "source");
  read(j, "smoothing_radius", c.smoothing_radius, "config");
  read(j, "morse_amplitude", c.morse_amplitude, "config");
  read(j, "classify_ends", c.classify_ends, "config");
  read(j, "grad_floor", c.grad_floor, "config");
  read(j, "output_dir", c.output_dir, "config");
  read(j, "seed", c.seed, "config");
  return c;
}

json to_json(const RunConfig& c) {
  json stages = json::array();
  for (const auto& s : c.stages) stages.push_back(region_to_json(s));
  return {{"operation", c.operation},
          {"metric", metric_to_json(c.metric)},
          {"domain", region_to_json(c.domain)},
          {"schedule", to_json(c.schedule)},
          {"phi", field_to_json(c.phi)},
          {"phi_floor", c.phi_floor},
          {"include", region_to_json(c.include)},
          {"exclude", region_to_json(c.exclude)},
          {"choice", c.choice},
          {"count_exterior", c.count_exterior},
          {"seed_region", region_to_json(c.seed_region)},
          {"end_a", region_to_json(c.end_a)},
          {"end_b", region_to_json(c.end_b)},
          {"stages", stages},
          {"field", field_to_json(c.field)},
          {"source", region_to_json(c.source)},
          {"smoothing_radius", c.smoothing_radius},
          {"morse_amplitude", c.morse_amplitude},
          {"classify_ends", c.classify_ends},
          {"grad_floor", c.grad_floor},
          {"output_dir", c.output_dir},
          {"seed", c.seed}};
}

RunConfig load_config(const std::filesystem::path& path) { return config_from_json(read_json(path)); }

void save_config(const std::filesystem::path& path, const RunConfig& config) {
  write_json(path, to_json(config));
}

MetricGrid build_metric(const MetricSpec& spec, const std::filesystem::path& base) {
  if (!spec.csv.empty()) return read_metric_csv(resolve(base, spec.csv));
  check_generator_params(spec.generator, spec.params, "metric.params");
  try {
    return generate_metric(spec.generator, spec.params);
  } catch (const json::exception& e) {
    fail(kModule, std::string("bad metric parameters: ") + e.what());
  }
}

Region build_region(const MetricGrid& grid, const RegionSpec& s,
                    const std::filesystem::path& base) {
  if (s.kind == "domain") return Region::domain_of(grid);
  if (s.kind == "none") return Region::empty_like(grid);
  if (s.kind == "disk") return disk_region(grid, s.cx, s.cy, s.r);
  if (s.kind == "box") return box_region(grid, {s.xmin, s.xmax, s.ymin, s.ymax});
  if (s.kind == "band_x") return band_x(grid, s.lo, s.hi);
  if (s.kind == "band_y") return band_y(grid, s.lo, s.hi);
  if (s.kind == "boundary") return boundary_layer(grid, Region::domain_of(grid));
  if (s.kind == "pgm") {
    const Region r = read_region_pgm(resolve(base, s.path));
    require_same_shape(grid, r.nx(), r.ny(), kModule);
    return r & Region::domain_of(grid);
  }
  if (s.kind == "union") {
    Region r = Region::empty_like(grid);
    for (const auto& p : s.parts) r = r | build_region(grid, p, base);
    return r;
  }
  fail(kModule, "unknown region kind '" + s.kind + "'");
}

ScalarField build_field(const MetricGrid& grid, const FieldSpec& s,
                        const std::filesystem::path& base) {
  if (s.kind == "csv") return read_field_csv(resolve(base, s.path), grid);
  std::function<double(double, double)> value;
  if (s.kind == "constant") {
    value = [&](double, double) { return s.value; };
  } else if (s.kind == "two_level") {
    value = [&](double x, double y) {
      const double r = std::hypot(x - s.cx, y - s.cy);
      if (!(s.ramp > 0.0)) return r <= s.radius ? s.inside : s.outside;
      const double t = std::clamp((r - (s.radius - 0.5 * s.ramp)) / s.ramp, 0.0, 1.0);
      return s.inside + (s.outside - s.inside) * t;
    };
  } else if (s.kind == "quadratic") {
    value = [&](double x, double y) {
      return s.a * (x - s.cx) * (x - s.cx) + s.b * (y - s.cy) * (y - s.cy) + s.c;
    };
  } else if (s.kind == "linear") {
    value = [&](double x, double y) { return s.ax * x + s.ay * y + s.c; };
  } else if (s.kind == "radial") {
    value = [&](double x, double y) { return std::hypot(x - s.cx, y - s.cy); };
  } else {
    fail(kModule, "unknown field kind '" + s.kind + "'");
  }
  ScalarField f(grid.nx(), grid.ny());
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (grid.in_domain(n)) f.set(n, value(grid.x(grid.col(n)), grid.y(grid.row(n))));
  }
  return f;
}

}  // namespace bubblecut
