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


#include "bubblecut/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "bubblecut/error.hpp"

namespace bubblecut {

namespace {

constexpr std::string_view kModule = "cli-io";
constexpr std::string_view kFieldHeader = "nx,ny,h,topology";

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& token) {
  if (token == "nan") return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) fail(kModule, "malformed number '" + token + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(kModule, "malformed number '" + token + "'");
  }
}

int parse_int(const std::string& token) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(token, &used);
    if (used != token.size()) fail(kModule, "malformed integer '" + token + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(kModule, "malformed integer '" + token + "'");
  }
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string token;
  while (std::getline(ss, token, ',')) {
    while (!token.empty() && (token.back() == '\r' || token.back() == ' ')) token.pop_back();
    out.push_back(token);
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) fail(kModule, "cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) fail(kModule, "cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) fail(kModule, "cannot read " + path.string());
  return in;
}

std::string next_line(std::istream& in, const std::filesystem::path& path) {
  std::string line;
  if (!std::getline(in, line)) fail(kModule, "truncated file " + path.string());
  return line;
}

struct Header {
  int nx = 0;
  int ny = 0;
  double h = 0.0;
  Topology topology = Topology::plane;
};

void write_header(std::ostream& out, const MetricGrid& grid) {
  out << kFieldHeader << '\n'
      << grid.nx() << ',' << grid.ny() << ',' << format_double(grid.h()) << ','
      << to_string(grid.topology()) << '\n';
}

Header read_header(std::istream& in, const std::filesystem::path& path) {
  if (split(next_line(in, path)) != split(std::string(kFieldHeader))) {
    fail(kModule, "missing header '" + std::string(kFieldHeader) + "' in " + path.string());
  }
  const auto v = split(next_line(in, path));
  if (v.size() != 4) fail(kModule, "malformed header in " + path.string());
  Header hd{parse_int(v[0]), parse_int(v[1]), parse_double(v[2]), topology_from_string(v[3])};
  if (hd.nx <= 0 || hd.ny <= 0 || !(hd.h > 0.0)) fail(kModule, "malformed header in " + path.string());
  return hd;
}

// Coarsest metric length of a grid step over the domain.
double coarse_step(const MetricGrid& grid) {
  double s = 0.0;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!grid.in_domain(n)) continue;
    const auto& g = grid.metric(n);
    s = std::max(s, std::sqrt(std::max(g.g11, g.g22)));
  }
  return s * grid.h();
}

nlohmann::json number(double v) {
  // JSON has no NaN or infinity; they are emitted as null.
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

void write_field_csv(const std::filesystem::path& path, const MetricGrid& grid,
                     const ScalarField& field) {
  require_same_shape(grid, field.nx(), field.ny(), kModule);
  auto out = open_out(path);
  write_header(out, grid);
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const NodeId n = grid.index(i, j);
      if (i) out << ',';
      out << (field.defined(n) ? format_double(field[n]) : "nan");
    }
    out << '\n';
  }
  if (!out) fail(kModule, "cannot write " + path.string());
}

ScalarField read_field_csv(const std::filesystem::path& path, const MetricGrid& grid) {
  auto in = open_in(path);
  const Header hd = read_header(in, path);
  require_same_shape(grid, hd.nx, hd.ny, kModule);
  ScalarField f(hd.nx, hd.ny);
  for (int j = 0; j < hd.ny; ++j) {
    const auto v = split(next_line(in, path));
    if (static_cast<int>(v.size()) != hd.nx) fail(kModule, "ragged row in " + path.string());
    for (int i = 0; i < hd.nx; ++i) {
      const double value = parse_double(v[i]);
      if (!std::isnan(value)) f.set(grid.index(i, j), value);
    }
  }
  return f;
}

void write_metric_csv(const std::filesystem::path& path, const MetricGrid& grid) {
  auto out = open_out(path);
  write_header(out, grid);
  out << "x0,y0\n" << format_double(grid.x0()) << ',' << format_double(grid.y0()) << '\n';
  out << (grid.conformal() ? "lambda,domain\n" : "g11,g12,g22,domain\n");
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (grid.conformal()) {
      out << format_double(grid.lambda(n));
    } else {
      const auto& g = grid.metric(n);
      out << format_double(g.g11) << ',' << format_double(g.g12) << ',' << format_double(g.g22);
    }
    out << ',' << (grid.in_domain(n) ? 1 : 0) << '\n';
  }
  if (!out) fail(kModule, "cannot write " + path.string());
}

MetricGrid read_metric_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  const Header hd = read_header(in, path);
  if (split(next_line(in, path)) != std::vector<std::string>{"x0", "y0"}) {
    fail(kModule, "missing origin line in " + path.string());
  }
  const auto origin = split(next_line(in, path));
  if (origin.size() != 2) fail(kModule, "malformed origin in " + path.string());
  MetricGrid grid(hd.nx, hd.ny, hd.h, hd.topology, parse_double(origin[0]),
                  parse_double(origin[1]));
  const auto columns = split(next_line(in, path));
  const bool conformal = columns == std::vector<std::string>{"lambda", "domain"};
  if (!conformal && columns != std::vector<std::string>{"g11", "g12", "g22", "domain"}) {
    fail(kModule, "unknown metric columns in " + path.string());
  }
  std::vector<double> lambda;
  std::vector<MetricTensor> tensors;
  std::vector<std::uint8_t> mask(grid.size());
  for (NodeId n = 0; n < grid.size(); ++n) {
    const auto v = split(next_line(in, path));
    if (v.size() != columns.size()) fail(kModule, "ragged row in " + path.string());
    if (conformal) {
      const double l = parse_double(v[0]);
      if (!(l > 0.0)) fail(kModule, "degenerate metric");
      lambda.push_back(l);
    } else {
      const MetricTensor g{parse_double(v[0]), parse_double(v[1]), parse_double(v[2])};
      if (!g.positive_definite()) fail(kModule, "degenerate metric");
      tensors.push_back(g);
    }
    mask[n] = parse_int(v.back()) != 0 ? 1 : 0;
  }
  if (conformal) grid.set_conformal(lambda);
  else grid.set_tensor(std::move(tensors));
  grid.set_domain(std::move(mask));
  return grid;
}

void write_region_pgm(const std::filesystem::path& path, const Region& region) {
  auto out = open_out(path, true);
  out << "P5\n" << region.nx() << ' ' << region.ny() << "\n255\n";
  std::vector<char> row(static_cast<std::size_t>(region.nx()));
  for (int j = region.ny() - 1; j >= 0; --j) {
    for (int i = 0; i < region.nx(); ++i) {
      const NodeId n = static_cast<NodeId>(j) * region.nx() + i;
      row[i] = static_cast<char>(region.contains(n) ? 255 : 0);
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!out) fail(kModule, "cannot write " + path.string());
}

Region read_region_pgm(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  // Header tokens separated by whitespace, with '#' comments.
  auto token = [&]() {
    std::string t;
    while (t.empty()) {
      in >> std::ws;
      if (in.peek() == '#') {
        std::string comment;
        std::getline(in, comment);
        continue;
      }
      if (!(in >> t)) fail(kModule, "truncated file " + path.string());
    }
    return t;
  };
  if (token() != "P5") fail(kModule, "not a binary PGM: " + path.string());
  const int nx = parse_int(token());
  const int ny = parse_int(token());
  const int maxval = parse_int(token());
  if (nx <= 0 || ny <= 0 || maxval <= 0 || maxval > 255) {
    fail(kModule, "unsupported PGM header in " + path.string());
  }
  in.get();  // single whitespace before the raster
  std::vector<char> raster(static_cast<std::size_t>(nx) * ny);
  if (!in.read(raster.data(), static_cast<std::streamsize>(raster.size()))) {
    fail(kModule, "truncated file " + path.string());
  }
  Region r(nx, ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const auto v = static_cast<unsigned char>(raster[static_cast<std::size_t>(ny - 1 - j) * nx + i]);
      r.set(static_cast<NodeId>(j) * nx + i, 2 * v > maxval);
    }
  }
  return r;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  auto out = open_out(path);
  out << value.dump(2) << '\n';
  if (!out) fail(kModule, "cannot write " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(kModule, "malformed JSON in " + path.string() + ": " + e.what());
  }
}

nlohmann::json grid_header(const MetricGrid& grid) {
  return {{"nx", grid.nx()},
          {"ny", grid.ny()},
          {"h", grid.h()},
          {"topology", std::string(to_string(grid.topology()))},
          {"x0", grid.x0()},
          {"y0", grid.y0()},
          {"conformal", grid.conformal()},
          {"domain_nodes", grid.domain_count()}};
}

nlohmann::json to_json(const CurvatureSummary& s) {
  return {{"mean", number(s.mean)}, {"min", number(s.min)}, {"max", number(s.max)},
          {"samples", s.samples}};
}

nlohmann::json to_json(const CriticalPoint& p, const MetricGrid& grid) {
  return {{"node", p.node},
          {"i", grid.col(p.node)},
          {"j", grid.row(p.node)},
          {"x", grid.x(grid.col(p.node))},
          {"y", grid.y(grid.row(p.node))},
          {"value", number(p.value)},
          {"index", p.index},
          {"nondegenerate", p.nondegenerate}};
}

nlohmann::json to_json(const ConvexityReport& r, const MetricGrid& grid) {
  nlohmann::json critical = nlohmann::json::array();
  for (const auto& p : r.critical) critical.push_back(to_json(p, grid));
  nlohmann::json edges = nlohmann::json::array();
  for (double e : r.histogram_edges) edges.push_back(number(e));
  return {{"pass", r.pass},
          {"domain_nodes", r.domain_nodes},
          {"samples", r.samples},
          {"sampled_fraction", r.sampled_fraction()},
          {"min_margin", number(r.min_margin)},
          {"mean_margin", number(r.mean_margin)},
          {"violations", r.violations},
          {"violating_nodes", r.violating_nodes},
          {"histogram", {{"edges", edges}, {"counts", r.histogram_counts}}},
          {"critical_points", critical}};
}

nlohmann::json to_json(const BubbleSchedule& s) {
  return {{"epsilon0", s.epsilon0}, {"decay", s.decay},     {"rho", s.rho},
          {"phi_big", s.phi_big},   {"max_steps", s.max_steps},
          {"stall_tolerance", s.stall_tolerance}, {"kappa_tol", s.kappa_tol}};
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j = {{"kind", std::string(to_string(v.kind))},
                      {"steps", v.steps},
                      {"kappa_tol", number(v.kappa_tol)},
                      {"note", v.note}};
  if (v.kind == VerdictKind::residual) {
    nlohmann::json lengths = nlohmann::json::array();
    for (double l : v.curve_lengths) lengths.push_back(number(l));
    j["residual_length"] = number(v.residual_length);
    j["curve_lengths"] = lengths;
    j["curvature"] = to_json(v.curvature);
    j["residual_cells"] = v.residual.count();
  }
  j["end_class"] = v.end_class ? nlohmann::json(std::string(to_string(*v.end_class))) : nullptr;
  return j;
}

void write_trace(const std::filesystem::path& dir, const MetricGrid& grid, const BubbleRun& run,
                 const BubbleSchedule& schedule) {
  const auto& t = run.trace;
  const double band = 1.5 * coarse_step(grid);
  nlohmann::json steps = nlohmann::json::array();
  for (std::size_t i = 0; i < t.regions.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "step_%03zu.pgm", i);
    write_region_pgm(dir / name, t.regions[i]);
    nlohmann::json step = {{"index", i}, {"mask", name}, {"cells", t.regions[i].count()}};
    // Step 0 is the initial region; energies and motions belong to steps ≥ 1.
    const bool solved = i >= 1 && i - 1 < t.energies.size();
    step["energy"] = solved ? number(t.energies[i - 1]) : nlohmann::json(nullptr);
    step["motion"] = solved && i - 1 < t.motions.size() ? number(t.motions[i - 1])
                                                        : nlohmann::json(nullptr);
    step["curvature"] = nullptr;
    if (!t.regions[i].empty()) {
      try {
        step["curvature"] = to_json(bubble_boundary_curvature(grid, t.regions[i], band));
      } catch (const Error&) {
        // A region without a sampled interface has no curvature summary.
      }
    }
    steps.push_back(step);
  }
  write_json(dir / "manifest.json", {{"grid", grid_header(grid)},
                                     {"schedule", to_json(schedule)},
                                     {"confinement", number(t.confinement)},
                                     {"steps", steps},
                                     {"verdict", to_json(run.verdict)}});
}

}  // namespace bubblecut
