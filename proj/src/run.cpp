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


#include "bubblecut/run.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

#include "bubble_internal.hpp"
#include "bubblecut/bubble.hpp"
#include "bubblecut/convexify.hpp"
#include "bubblecut/cut.hpp"
#include "bubblecut/error.hpp"
#include "bubblecut/geometry.hpp"
#include "bubblecut/io.hpp"
#include "bubblecut/trichotomy.hpp"

namespace bubblecut {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Context {
  const RunConfig& config;
  const RunOptions& options;
  std::ostream& log;
  fs::path out;
  MetricGrid grid;
  Region domain;

  void note(const std::string& message) const {
    if (options.verbose) log << "bubblecut: " << message << '\n';
  }
  Region region(const RegionSpec& spec) const {
    return build_region(grid, spec, options.base_dir) & domain;
  }
  ScalarField field(const FieldSpec& spec) const {
    return build_field(grid, spec, options.base_dir);
  }
};

struct Outcome {
  json result;
  int status = kExitOk;
};

double max_abs_on(const ScalarField& f, const Region& where) {
  double m = 0.0;
  for (NodeId n = 0; n < f.size(); ++n) {
    if (where.contains(n) && f.defined(n)) m = std::max(m, std::abs(f[n]));
  }
  return m;
}

json lengths_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

json optional_verdict(const std::optional<Verdict>& v) {
  return v ? to_json(*v) : json(nullptr);
}

Outcome solve_bubble(const Context& c) {
  const ScalarField phi = c.field(c.config.phi);
  const CutGraph graph = build_cut_graph(c.grid);
  CutProblem problem;
  problem.graph = &graph;
  problem.phi = phi;
  problem.must_include = c.region(c.config.include);
  problem.must_exclude = c.region(c.config.exclude);
  problem.choice =
      c.config.choice == "maximal" ? MinimizerChoice::maximal : MinimizerChoice::minimal;
  problem.count_exterior = c.config.count_exterior;
  const CutSolution sol = minimize_phi_area(problem);
  write_field_csv(c.out / "phi.csv", c.grid, phi);
  write_region_pgm(c.out / "include.pgm", problem.must_include);
  write_region_pgm(c.out / "exclude.pgm", problem.must_exclude);
  write_region_pgm(c.out / "region.pgm", sol.region);
  json result = {{"phi", "phi.csv"},
                 {"include", "include.pgm"},
                 {"exclude", "exclude.pgm"},
                 {"region", "region.pgm"},
                 {"cells", sol.region.count()},
                 {"energy", sol.energy},
                 {"perimeter", sol.perimeter},
                 {"weighted_area", sol.weighted_area},
                 {"curvature", nullptr}};
  if (!sol.region.empty() && !(sol.region == c.domain)) {
    try {
      result["curvature"] = to_json(bubble_boundary_curvature(c.grid, sol.region, 2.0 * c.grid.h()));
    } catch (const Error&) {
      // No sampled interface; the summary stays null.
    }
  }
  return {result};
}

json run_json(const BubbleRun& run, const json& trace_dir) {
  return {{"verdict", to_json(run.verdict)},
          {"steps", run.trace.regions.size()},
          {"confinement", run.trace.confinement},
          {"trace", trace_dir}};
}

Outcome shrink(const Context& c) {
  const ScalarField phi = c.field(c.config.phi);
  c.config.schedule.validate(c.grid, max_abs_on(phi, c.domain));
  const BubbleRun run = shrink_bubbles(c.grid, c.domain, phi, c.config.schedule);
  write_trace(c.out / "trace", c.grid, run, c.config.schedule);
  if (run.verdict.kind == VerdictKind::residual) {
    write_region_pgm(c.out / "residual.pgm", run.verdict.residual);
    write_region_pgm(c.out / "residual_curve.pgm", run.verdict.residual_curve);
  }
  return {run_json(run, "trace")};
}

Outcome grow(const Context& c) {
  const ScalarField phi = c.field(c.config.phi);
  c.config.schedule.validate(c.grid, max_abs_on(phi, c.domain));
  const Region seed = c.region(c.config.seed_region);
  const BubbleRun run = grow_bubbles(c.grid, c.domain, seed, phi, c.config.schedule);
  write_trace(c.out / "trace", c.grid, run, c.config.schedule);
  return {run_json(run, "trace")};
}

Outcome separate(const Context& c) {
  const Region a = c.region(c.config.end_a);
  const Region b = c.region(c.config.end_b);
  if (a.empty() && b.empty() && c.grid.topology() == Topology::torus) {
    return {{{"systoles", lengths_json(torus_systoles(c.grid))}}};
  }
  const Separator sep = minimal_separator(c.grid, c.domain, a, b);
  write_region_pgm(c.out / "region.pgm", sep.region);
  write_region_pgm(c.out / "curve.pgm", sep.curve);
  return {{{"length", sep.length},
           {"component_lengths", lengths_json(sep.component_lengths)},
           {"region", "region.pgm"},
           {"curve", "curve.pgm"}}};
}

Outcome classify(const Context& c) {
  c.config.schedule.validate(c.grid, 0.0);
  const Region band = c.region(c.config.end_a);
  const Verdict v = classify_end(c.grid, c.domain, band, c.config.schedule);
  write_region_pgm(c.out / "end.pgm", band);
  return {{{"end", "end.pgm"}, {"verdict", to_json(v)}}};
}

Outcome trichotomy_op(const Context& c) {
  TrichotomyOptions opt;
  opt.phi_floor = c.config.phi_floor;
  opt.schedule = c.config.schedule;
  opt.smoothing_radius = c.config.smoothing_radius;
  opt.morse_amplitude = c.config.morse_amplitude;
  opt.seed = c.config.seed;
  opt.classify_ends = c.config.classify_ends;
  opt.schedule.validate(c.grid, std::abs(opt.phi_floor));
  const TrichotomyReport rep = trichotomy(c.grid, c.domain, opt);

  bool failed = rep.consistency_checked && !rep.consistent;
  json components = json::array();
  for (std::size_t k = 0; k < rep.components.size(); ++k) {
    const ComponentReport& comp = rep.components[k];
    const std::string stem = "component_" + std::to_string(k);
    write_region_pgm(c.out / (stem + ".pgm"), comp.region);
    json jc = {{"clause", static_cast<int>(comp.clause)},
               {"clause_name", std::string(to_string(comp.clause))},
               {"mask", stem + ".pgm"},
               {"cells", comp.region.count()},
               {"shrink", run_json(comp.shrink, nullptr)},
               {"residual", optional_verdict(comp.residual)},
               {"certified_cells", comp.certified.count()},
               {"stages", comp.stages},
               {"smoothing_radius", comp.smoothing_radius},
               {"convexity", nullptr},
               {"note", comp.note}};
    if (comp.residual) {
      write_region_pgm(c.out / (stem + "_residual_curve.pgm"), comp.residual->residual_curve);
      jc["residual_curve"] = stem + "_residual_curve.pgm";
    }
    if (comp.convexity) {
      jc["convexity"] = to_json(*comp.convexity, c.grid);
      write_region_pgm(c.out / (stem + "_certified.pgm"), comp.certified);
      jc["certified"] = stem + "_certified.pgm";
      failed = failed || !comp.convexity->pass;
    }
    json ends = json::array();
    for (std::size_t e = 0; e < comp.ends.size(); ++e) {
      ends.push_back({{"cells", comp.ends[e].band.count()},
                      {"verdict", optional_verdict(comp.ends[e].verdict)},
                      {"note", comp.ends[e].note}});
    }
    jc["ends"] = ends;
    components.push_back(jc);
  }
  json result = {{"clause", static_cast<int>(rep.clause)},
                 {"clause_name", std::string(to_string(rep.clause))},
                 {"kappa_tol", rep.kappa_tol},
                 {"certified", rep.certified()},
                 {"consistency_checked", rep.consistency_checked},
                 {"consistent", rep.consistent},
                 {"detector", optional_verdict(rep.detector)},
                 {"components", components},
                 {"function", nullptr}};
  if (rep.function.defined_count() > 0) {
    write_field_csv(c.out / "function.csv", c.grid, rep.function);
    result["function"] = "function.csv";
  }
  return {result, failed ? kExitVerificationFailed : kExitOk};
}

Outcome staircase_op(const Context& c) {
  StaircaseSpec spec;
  for (const auto& s : c.config.stages) spec.regions.push_back(c.region(s));
  const MetricGrid frame = frame_grid(c.grid);
  const Staircase stairs = staircase(frame, spec);
  double eps = c.config.smoothing_radius;
  if (!(eps > 0.0)) {
    eps = std::min(default_smoothing_radius(c.grid), 0.5 * detail::inradius(c.grid, c.domain));
  }
  const ScalarField h = restrict_to_domain(c.grid, stairs.h);
  const ScalarField smooth = restrict_to_domain(c.grid, mollify(frame, stairs.h, eps));
  const ScalarField phi = c.field(c.config.phi);
  const double floor =
      c.config.grad_floor > 0.0 ? c.config.grad_floor : default_grad_floor(c.grid, smooth);
  const ConvexityReport report = verify_mean_convex(c.grid, smooth, phi, floor);
  write_field_csv(c.out / "staircase.csv", c.grid, h);
  write_field_csv(c.out / "smoothed.csv", c.grid, smooth);
  write_region_pgm(c.out / "ridge.pgm", stairs.ridge & c.domain);
  return {{{"staircase", "staircase.csv"},
           {"smoothed", "smoothed.csv"},
           {"ridge", "ridge.pgm"},
           {"stages", spec.regions.size()},
           {"gaps", lengths_json(stairs.gaps)},
           {"bends", lengths_json(stairs.bends)},
           {"offsets", lengths_json(stairs.offsets)},
           {"smoothing_radius", eps},
           {"grad_floor", floor},
           {"convexity", to_json(report, c.grid)}},
          report.pass ? kExitOk : kExitVerificationFailed};
}

Outcome verify(const Context& c) {
  const ScalarField f = c.field(c.config.field);
  const ScalarField phi = c.field(c.config.phi);
  const double floor =
      c.config.grad_floor > 0.0 ? c.config.grad_floor : default_grad_floor(c.grid, f);
  const ConvexityReport report = verify_mean_convex(c.grid, f, phi, floor);
  return {{{"grad_floor", floor}, {"convexity", to_json(report, c.grid)}},
          report.pass ? kExitOk : kExitVerificationFailed};
}

Outcome distance(const Context& c) {
  const Region source = c.region(c.config.source);
  if (source.empty()) fail("cli-io", "empty distance source");
  const ScalarField d = distance_transform(c.grid, source);
  write_field_csv(c.out / "distance.csv", c.grid, d);
  const auto [lo, hi] = d.range();
  return {{{"distance", "distance.csv"},
           {"source_cells", source.count()},
           {"defined", d.defined_count()},
           {"min", lo},
           {"max", hi}}};
}

Outcome dispatch(const Context& c) {
  const std::string& op = c.config.operation;
  if (op == "solve-bubble") return solve_bubble(c);
  if (op == "shrink") return shrink(c);
  if (op == "grow") return grow(c);
  if (op == "separate") return separate(c);
  if (op == "classify") return classify(c);
  if (op == "trichotomy") return trichotomy_op(c);
  if (op == "staircase") return staircase_op(c);
  if (op == "verify") return verify(c);
  if (op == "distance") return distance(c);
  fail("cli-io", "unknown operation '" + op + "'");
}

}  // namespace

int run(const RunConfig& config, const RunOptions& options) {
  std::ostream& log = options.log ? *options.log : std::cerr;
  try {
    MetricGrid grid = build_metric(config.metric, options.base_dir);
    const Region domain = build_region(grid, config.domain, options.base_dir);
    if (domain.empty()) fail("cli-io", "empty domain");
    // The configured domain becomes the manifold: cells outside it are
    // exterior for every operation, and "boundary" regions follow its rim.
    grid.set_domain(domain.mask());
    Context c{config, options, log, fs::path(config.output_dir), std::move(grid), domain};
    c.note(config.operation + " on a " + std::to_string(c.grid.nx()) + "x" +
           std::to_string(c.grid.ny()) + " grid, " + std::to_string(domain.count()) +
           " domain cells");
    std::error_code ec;
    fs::create_directories(c.out, ec);
    if (ec) fail("cli-io", "cannot create directory " + c.out.string());
    save_config(c.out / "config.json", config);
    write_region_pgm(c.out / "domain.pgm", domain);

    const Outcome outcome = dispatch(c);
    write_json(c.out / "report.json", {{"operation", config.operation},
                                       {"seed", config.seed},
                                       {"grid", grid_header(c.grid)},
                                       {"domain", "domain.pgm"},
                                       {"result", outcome.result},
                                       {"exit_status", outcome.status}});
    c.note("wrote " + (c.out / "report.json").string() + ", exit status " +
           std::to_string(outcome.status));
    return outcome.status;
  } catch (const Error& e) {
    log << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    log << "cli-io: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace bubblecut
