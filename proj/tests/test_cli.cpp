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


#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>

#include "bubblecut/config.hpp"
#include "bubblecut/error.hpp"
#include "bubblecut/io.hpp"
#include "bubblecut/metrics.hpp"
#include "bubblecut/run.hpp"
#include "doctest.h"

using namespace bubblecut;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string error_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.message();
  }
  return {};
}

// Fresh scratch directory per test case, removed on exit.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name)
      : dir(fs::temp_directory_path() /
            ("bubblecut_" + name + "_" + std::to_string(::getpid()))) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json report_of(const fs::path& dir) { return json::parse(slurp(dir / "report.json")); }

RunConfig sample_config(const std::string& name) {
  return load_config(fs::path(BUBBLECUT_CONFIG_DIR) / name);
}

int run_quiet(RunConfig config, const fs::path& out, std::string* log_text = nullptr) {
  config.output_dir = out.string();
  std::ostringstream log;
  RunOptions options;
  options.base_dir = BUBBLECUT_CONFIG_DIR;
  options.log = &log;
  const int status = run(config, options);
  if (log_text) *log_text = log.str();
  return status;
}

int shell(const std::string& command) {
  const int status = std::system((command + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig everything_set() {
  RunConfig c;
  c.operation = "grow";
  c.metric.generator = "perturbed_flat";
  c.metric.params = json::parse(
      R"({"n": 48, "xmin": -1.5, "xmax": 1.5, "topology": "cylinder",
          "bumps": [{"x": 0.25, "y": -0.5, "amplitude": 0.3, "width": 0.4}]})");
  c.domain = RegionSpec::of("union");
  RegionSpec disk = RegionSpec::of("disk");
  disk.cx = 0.1;
  disk.cy = -0.2;
  disk.r = 0.7;
  RegionSpec box = RegionSpec::of("box");
  box.xmin = -1.0;
  box.xmax = 0.3;
  box.ymin = -0.4;
  box.ymax = 1.0 / 3.0;
  c.domain.parts = {disk, box};
  c.schedule.epsilon0 = 0.3;
  c.schedule.decay = 0.7;
  c.schedule.rho = 0.15;
  c.schedule.phi_big = 40.0;
  c.schedule.max_steps = 17;
  c.schedule.stall_tolerance = 0.5;
  c.schedule.kappa_tol = 0.01;
  c.phi.kind = "two_level";
  c.phi.inside = 10.0;
  c.phi.outside = 0.1;
  c.phi.radius = 0.5;
  c.phi.ramp = 0.2;
  c.phi.cx = 0.1;
  c.phi_floor = 0.1;
  c.include = RegionSpec::of("band_y");
  c.include.lo = -0.1;
  c.include.hi = 0.1;
  c.exclude = RegionSpec::of("boundary");
  c.choice = "maximal";
  c.count_exterior = true;
  c.seed_region = disk;
  c.end_a = RegionSpec::of("band_x");
  c.end_a.lo = -1.5;
  c.end_a.hi = -1.4;
  c.end_b = RegionSpec::of("pgm");
  c.end_b.path = "masks/end.pgm";
  c.stages = {RegionSpec::of("domain"), disk};
  c.field.kind = "quadratic";
  c.field.a = 1.0;
  c.field.b = 2.0;
  c.field.c = -0.1;
  c.source = RegionSpec::of("none");
  c.smoothing_radius = 0.2;
  c.morse_amplitude = 2e-3;
  c.classify_ends = false;
  c.grad_floor = 0.01;
  c.output_dir = "runs/out";
  c.seed = 18446744073709551615ull;
  return c;
}

}  // namespace

TEST_CASE("configurations round-trip losslessly") {
  const RunConfig c = everything_set();
  const json first = to_json(c);
  const RunConfig back = config_from_json(json::parse(first.dump()));
  CHECK(back == c);
  CHECK(to_json(back) == first);
  CHECK(back.schedule.kappa_tol == c.schedule.kappa_tol);
  CHECK_FALSE(back == RunConfig{});

  Scratch tmp("roundtrip");
  save_config(tmp.dir / "c.json", c);
  CHECK(load_config(tmp.dir / "c.json") == c);

  // Shipped sample configurations are valid and round-trip too.
  int samples = 0;
  for (const auto& entry : fs::directory_iterator(BUBBLECUT_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    const RunConfig s = load_config(entry.path());
    CHECK(config_from_json(to_json(s)) == s);
    ++samples;
  }
  CHECK(samples >= 5);

  // Defaults fill missing keys; a CSV metric stands alone.
  const RunConfig d = config_from_json(json::parse(R"({"operation": "verify"})"));
  CHECK(d.operation == "verify");
  CHECK(d.schedule.rho == BubbleSchedule{}.rho);
  RunConfig m;
  m.metric.csv = "metric.csv";
  CHECK(config_from_json(to_json(m)) == m);
}

TEST_CASE("configurations reject unknown keys and wrong types") {
  auto message = [](const char* text) {
    return error_message([&] { config_from_json(json::parse(text)); });
  };
  CHECK(message(R"({"operaton": "shrink"})") == "unknown key 'operaton' in config");
  CHECK(message(R"({"schedule": {"rho": 0.1, "tau": 1}})") == "unknown key 'tau' in schedule");
  CHECK(message(R"({"domain": {"kind": "disk", "r": 1, "lo": 0}})") ==
        "unknown key 'lo' in domain");
  CHECK(message(R"({"domain": {"kind": "blob"}})") == "unknown region kind 'blob' in domain");
  CHECK(message(R"({"phi": {"kind": "constant", "radius": 1}})") == "unknown key 'radius' in phi");
  CHECK(message(R"({"metric": {"generator": "euclidean", "params": {"radius": 2}}})") ==
        "unknown key 'radius' in metric.params");
  CHECK(message(R"({"metric": {"generator": "perturbed_flat",
                               "params": {"bumps": [{"x": 0, "sigma": 1}]}}})") ==
        "unknown key 'sigma' in metric.params.bumps[]");
  CHECK(message(R"({"metric": {"generator": "sphere"}})") == "unknown metric generator 'sphere'");
  CHECK(message(R"({"metric": {"csv": "m.csv", "generator": "euclidean"}})") ==
        "metric takes either 'csv' or 'generator' with 'params'");
  CHECK(message(R"({"operation": "fly"})") == "unknown operation 'fly'");
  CHECK(message(R"({"schedule": {"rho": "wide"}})") == "'schedule.rho' has the wrong type");
  CHECK(message(R"({"schedule": {"max_steps": 2.5}})") == "'schedule.max_steps' has the wrong type");
  CHECK(message(R"({"seed": -3})") == "'config.seed' has the wrong type");
  CHECK(message(R"({"stages": {"kind": "domain"}})") == "'stages' must be an array");
  CHECK(message(R"({"choice": "median"})") == "choice must be 'minimal' or 'maximal'");
  CHECK(message(R"([1, 2])") == "'config' must be an object");

  Scratch tmp("malformed");
  std::ofstream(tmp.dir / "broken.json") << "{\"operation\": ";
  CHECK(error_message([&] { load_config(tmp.dir / "broken.json"); }).rfind("malformed JSON", 0) == 0);
  CHECK(error_message([&] { load_config(tmp.dir / "absent.json"); }).rfind("cannot read", 0) == 0);
}

TEST_CASE("field CSV round-trips bit-exactly, including undefined nodes") {
  const MetricGrid grid = make_grid({-1.0, 1.0, -0.5, 0.5}, 24, Topology::cylinder);
  ScalarField f(grid.nx(), grid.ny());
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (n % 7 == 3) continue;
    f.set(n, std::sin(0.37 * static_cast<double>(n)) / 3.0 + 1e-300 * (n % 2));
  }
  Scratch tmp("field");
  write_field_csv(tmp.dir / "f.csv", grid, f);
  const std::string text = slurp(tmp.dir / "f.csv");
  CHECK(text.rfind("nx,ny,h,topology\n24,12,0.083333333333333329,cylinder\n", 0) == 0);
  const ScalarField g = read_field_csv(tmp.dir / "f.csv", grid);
  CHECK(g.defined_mask() == f.defined_mask());
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (f.defined(n)) CHECK(g[n] == f[n]);
  }
  const MetricGrid other = make_grid({-1.0, 1.0, -1.0, 1.0}, 24);
  CHECK(error_message([&] { read_field_csv(tmp.dir / "f.csv", other); }) != "");
  std::ofstream(tmp.dir / "bad.csv") << "nx,ny\n1,2\n";
  CHECK(error_message([&] { read_field_csv(tmp.dir / "bad.csv", grid); }) ==
        "missing header 'nx,ny,h,topology' in " + (tmp.dir / "bad.csv").string());
}

TEST_CASE("metric CSV round-trips conformal and tensor metrics") {
  Scratch tmp("metric");
  const MetricGrid disk = poincare_disk(40, 0.9, 0.8);
  write_metric_csv(tmp.dir / "disk.csv", disk);
  const MetricGrid d2 = read_metric_csv(tmp.dir / "disk.csv");
  CHECK(d2.conformal());
  CHECK(d2.nx() == disk.nx());
  CHECK(d2.ny() == disk.ny());
  CHECK(d2.h() == disk.h());
  CHECK(d2.x0() == disk.x0());
  CHECK(d2.y0() == disk.y0());
  CHECK(d2.domain_mask() == disk.domain_mask());
  for (NodeId n = 0; n < disk.size(); ++n) CHECK(d2.lambda(n) == disk.lambda(n));

  const MetricGrid cyl = warped_cylinder(WarpProfile::from_name("cosh"), -2.0, 2.0, 32,
                                         2.0 * std::numbers::pi);
  write_metric_csv(tmp.dir / "cyl.csv", cyl);
  const MetricGrid c2 = read_metric_csv(tmp.dir / "cyl.csv");
  CHECK_FALSE(c2.conformal());
  CHECK(c2.topology() == Topology::cylinder);
  for (NodeId n = 0; n < cyl.size(); ++n) {
    CHECK(c2.metric(n).g11 == cyl.metric(n).g11);
    CHECK(c2.metric(n).g12 == cyl.metric(n).g12);
    CHECK(c2.metric(n).g22 == cyl.metric(n).g22);
  }

  std::string text = slurp(tmp.dir / "disk.csv");
  const auto pos = text.find("\n", text.find("lambda,domain")) + 1;
  text.replace(pos, text.find(',', pos) - pos, "-1");
  std::ofstream(tmp.dir / "neg.csv") << text;
  CHECK(error_message([&] { read_metric_csv(tmp.dir / "neg.csv"); }) == "degenerate metric");
}

TEST_CASE("PGM masks round-trip with y pointing up") {
  const MetricGrid grid = make_grid({0.0, 1.0, 0.0, 0.5}, 10);
  Region r(grid.nx(), grid.ny());
  r.set(grid.index(0, 0), true);  // bottom-left cell
  r.set(grid.index(9, 4), true);  // top-right cell
  r.set(grid.index(3, 2), true);
  Scratch tmp("pgm");
  write_region_pgm(tmp.dir / "r.pgm", r);
  const std::string bytes = slurp(tmp.dir / "r.pgm");
  const std::string header = "P5\n10 5\n255\n";
  REQUIRE(bytes.size() == header.size() + 50);
  CHECK(bytes.substr(0, header.size()) == header);
  // First raster row is the top grid row.
  CHECK(static_cast<unsigned char>(bytes[header.size() + 9]) == 255);
  CHECK(static_cast<unsigned char>(bytes[header.size() + 40]) == 255);
  CHECK(read_region_pgm(tmp.dir / "r.pgm") == r);

  std::ofstream(tmp.dir / "c.pgm", std::ios::binary)
      << "P5\n# comment\n2 1\n15\n" << static_cast<char>(15) << static_cast<char>(7);
  const Region c = read_region_pgm(tmp.dir / "c.pgm");
  CHECK(c.contains(0));
  CHECK_FALSE(c.contains(1));
  std::ofstream(tmp.dir / "p2.pgm") << "P2\n1 1\n255\n0\n";
  CHECK(error_message([&] { read_region_pgm(tmp.dir / "p2.pgm"); }) ==
        "not a binary PGM: " + (tmp.dir / "p2.pgm").string());
}

TEST_CASE("trichotomy on the Euclidean disk exits 0 with a certified function") {
  Scratch tmp("disk");
  CHECK(run_quiet(sample_config("disk_trichotomy.json"), tmp.dir) == kExitOk);
  const json r = report_of(tmp.dir).at("result");
  CHECK(r.at("clause") == 1);
  CHECK(r.at("certified") == true);
  CHECK(r.at("consistent") == true);
  REQUIRE(r.at("components").size() == 1);
  const json& comp = r.at("components")[0];
  CHECK(comp.at("convexity").at("pass") == true);
  CHECK(comp.at("convexity").at("min_margin").get<double>() > 0.0);
  for (const auto& p : comp.at("convexity").at("critical_points")) CHECK(p.at("index") == 0);
  CHECK(fs::exists(tmp.dir / "function.csv"));
  CHECK(fs::exists(tmp.dir / "component_0_certified.pgm"));
}

TEST_CASE("trichotomy on the cosh neck exits 0 with a residual closed geodesic") {
  Scratch tmp("cosh");
  CHECK(run_quiet(sample_config("cosh_trichotomy.json"), tmp.dir) == kExitOk);
  const json r = report_of(tmp.dir).at("result");
  CHECK(r.at("clause") == 2);
  REQUIRE(r.at("components").size() == 1);
  const double length = r.at("components")[0].at("residual").at("residual_length");
  CHECK(length == doctest::Approx(2.0 * std::numbers::pi).epsilon(0.03));
  CHECK(r.at("function").is_null());
}

TEST_CASE("a negative band width exits 1 with a bad-schedule message") {
  Scratch tmp("bad");
  std::string log;
  CHECK(run_quiet(sample_config("bad_schedule.json"), tmp.dir, &log) == kExitError);
  CHECK(log == "bubble-engine: bad schedule\n");
  CHECK_FALSE(fs::exists(tmp.dir / "report.json"));

  RunConfig missing;
  missing.operation = "distance";
  missing.metric.params = json::parse(R"({"n": 16})");
  CHECK(run_quiet(missing, tmp.dir / "d", &log) == kExitError);
  CHECK(log == "cli-io: empty distance source\n");
}

TEST_CASE("failed verification exits 2") {
  Scratch tmp("verify");
  RunConfig c = sample_config("verify_paraboloid.json");
  CHECK(run_quiet(c, tmp.dir / "up") == kExitOk);
  c.field.a = -1.0;  // a concave cap: level circles curve the wrong way
  CHECK(run_quiet(c, tmp.dir / "down") == kExitVerificationFailed);
  const json r = report_of(tmp.dir / "down").at("result");
  CHECK(r.at("convexity").at("pass") == false);
  CHECK(report_of(tmp.dir / "down").at("exit_status") == kExitVerificationFailed);
}

TEST_CASE("each verb runs on its sample configuration") {
  Scratch tmp("verbs");
  {
    CHECK(run_quiet(sample_config("two_level_bubble.json"), tmp.dir / "bubble") == kExitOk);
    const json r = report_of(tmp.dir / "bubble").at("result");
    const double e = r.at("energy");
    const double per = r.at("perimeter");
    const double area = r.at("weighted_area");
    CHECK(e == doctest::Approx(per - area).epsilon(1e-12));
    CHECK(read_region_pgm(tmp.dir / "bubble" / "region.pgm").count() == r.at("cells"));
  }
  {
    CHECK(run_quiet(sample_config("torus_separate.json"), tmp.dir / "sep") == kExitOk);
    const json s = report_of(tmp.dir / "sep").at("result").at("systoles");
    CHECK(s[0].get<double>() == doctest::Approx(1.0).epsilon(0.03));
    CHECK(s[1].get<double>() == doctest::Approx(1.5).epsilon(0.03));
  }
  {
    CHECK(run_quiet(sample_config("cusp_classify.json"), tmp.dir / "cusp") == kExitOk);
    const json v = report_of(tmp.dir / "cusp").at("result").at("verdict");
    CHECK(v.at("end_class") == "concave_exhaustion");
  }
  {
    CHECK(run_quiet(sample_config("nested_staircase.json"), tmp.dir / "stairs") == kExitOk);
    const json r = report_of(tmp.dir / "stairs").at("result");
    CHECK(r.at("stages") == 3);
    CHECK(r.at("convexity").at("min_margin").get<double>() > 0.0);
  }
  {
    CHECK(run_quiet(sample_config("poincare_distance.json"), tmp.dir / "dist") == kExitOk);
    const MetricGrid grid = poincare_disk(128, 0.9, 0.9);
    const ScalarField d = read_field_csv(tmp.dir / "dist" / "distance.csv", grid);
    // Node nearest to Euclidean radius 0.5 on the positive x axis.
    const int j = grid.ny() / 2;
    int best = 0;
    for (int i = 0; i < grid.nx(); ++i) {
      if (std::abs(std::hypot(grid.x(i), grid.y(j)) - 0.5) <
          std::abs(std::hypot(grid.x(best), grid.y(j)) - 0.5)) {
        best = i;
      }
    }
    const double r = std::hypot(grid.x(best), grid.y(j));
    // The source disk has radius 0.01; distances start at its rim.
    CHECK(d[grid.index(best, j)] == doctest::Approx(2.0 * std::atanh(r)).epsilon(0.05));
  }
  {
    RunConfig c = sample_config("cosh_trichotomy.json");
    c.operation = "shrink";
    CHECK(run_quiet(c, tmp.dir / "shrink") == kExitOk);
    const json m = json::parse(slurp(tmp.dir / "shrink" / "trace" / "manifest.json"));
    CHECK(m.at("verdict").at("kind") == "Residual");
    const std::size_t steps = m.at("steps").size();
    CHECK(steps >= 2);
    CHECK(m.at("steps")[0].at("energy").is_null());
    CHECK(fs::exists(tmp.dir / "shrink" / "trace" / "step_000.pgm"));
    CHECK(read_region_pgm(tmp.dir / "shrink" / "trace" / "step_001.pgm").count() ==
          m.at("steps")[1].at("cells"));
  }
}

TEST_CASE("identical configurations produce byte-identical reports") {
  Scratch tmp("determinism");
  for (const char* name : {"cosh_trichotomy.json", "nested_staircase.json",
                           "two_level_bubble.json"}) {
    const RunConfig c = sample_config(name);
    REQUIRE(run_quiet(c, tmp.dir / "a") == kExitOk);
    REQUIRE(run_quiet(c, tmp.dir / "b") == kExitOk);
    int compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(tmp.dir / "a")) {
      if (!entry.is_regular_file() || entry.path().filename() == "config.json") continue;
      const fs::path twin = tmp.dir / "b" / fs::relative(entry.path(), tmp.dir / "a");
      INFO(name << ": " << entry.path().filename().string());
      CHECK(slurp(entry.path()) == slurp(twin));
      ++compared;
    }
    CHECK(compared >= 3);
    fs::remove_all(tmp.dir / "a");
    fs::remove_all(tmp.dir / "b");
  }
}

TEST_CASE("command line: verbs, overrides and exit statuses") {
  Scratch tmp("cli");
  const std::string cli = BUBBLECUT_CLI_PATH;
  const std::string configs = BUBBLECUT_CONFIG_DIR;
  const std::string out = (tmp.dir / "o").string();
  CHECK(shell(cli + " trichotomy --config " + configs + "/cosh_trichotomy.json --out " + out +
              " --seed 7 --verbose") == 0);
  const json rep = report_of(out);
  CHECK(rep.at("seed") == 7);
  CHECK(load_config(fs::path(out) / "config.json").output_dir == out);
  CHECK(shell(cli + " shrink --config " + configs + "/bad_schedule.json --out " + out) == 1);
  CHECK(shell(cli + " verify --config " + configs + "/cosh_trichotomy.json --out " + out) == 1);
  CHECK(shell(cli + " teleport --config " + configs + "/cosh_trichotomy.json") == 1);
  CHECK(shell(cli + " verify --config " + (tmp.dir / "absent.json").string()) == 1);
  CHECK(shell(cli + " verify") == 1);
  CHECK(shell(cli + " --help") == 0);
}
