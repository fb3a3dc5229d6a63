#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "surfoffset/io.hpp"

using namespace surfoffset;

namespace {

struct CommonArgs {
  std::string surface_path;
  std::string out_prefix = "out";
  std::string formats = "obj,svg,json";
  int threads = 0;
  std::uint64_t seed = 42;
};

std::pair<int, int> parse_grid(const std::string& text) {
  if (text.empty()) return {0, 0};
  auto comma = text.find(',');
  if (comma == std::string::npos)
    throw ConfigError("--grid expects nu,nv");
  return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
}

bool wants(const std::string& formats, const char* fmt) {
  return formats.find(fmt) != std::string::npos;
}

ParamPoint parse_point(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw ConfigError("expected u,v");
  return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

int finish_with_diagnostics(const std::string& out_prefix, const std::string& what,
                            const std::vector<int>& violating,
                            const IntrinsicMesh* mesh, int non_converged) {
  std::string diag = diagnostics_json(what, violating, mesh, non_converged);
  write_text_file(out_prefix + ".diag.json", diag);
  log_line(LogLevel::Warn, "numerical_failure", {{"detail", what}});
  std::fprintf(stderr, "%s\n", diag.c_str());
  return 3;
}

int run_offset_cmd(const CommonArgs& common, const std::string& curve_path,
                   double distance, int segments, const std::string& grid,
                   double cutoff, int stress_waypoints, bool dump_mesh) {
  Surface surface = Surface::load(common.surface_path);
  SourceCurve curve = SourceCurve::load(curve_path, surface);
  RunOptions options;
  options.distance = distance;
  options.segments = segments;
  std::tie(options.grid_nu, options.grid_nv) = parse_grid(grid);
  options.cutoff = cutoff;
  options.threads = common.threads;
  options.stress = {stress_waypoints, common.seed};

  PipelineResult result = run_offset_pipeline(surface, curve, options);
  std::vector<SourceCurve> curves = {curve};
  if (wants(common.formats, "obj"))
    write_offset_obj(common.out_prefix + ".obj", result.offset);
  if (wants(common.formats, "svg"))
    write_offset_svg(common.out_prefix + ".svg", surface, curves, &result.offset,
                     nullptr);
  if (wants(common.formats, "json"))
    write_text_file(common.out_prefix + ".json",
                    offset_result_json(surface, curves, options, result.offset));
  if (dump_mesh)
    result.mesh.dump_obj(common.out_prefix + ".mesh.obj",
                         common.out_prefix + ".mesh.json");
  log_line(LogLevel::Info, "offset_done",
           {{"polylines", std::to_string(result.offset.polylines.size())},
            {"seconds", std::to_string(result.timings.total)}});
  if (!result.violating_edges.empty() || result.field.non_converged > 0)
    return finish_with_diagnostics(
        common.out_prefix,
        !result.violating_edges.empty() ? "field gradient-norm violation"
                                        : "non-converged geodesic paths",
        result.violating_edges, &result.mesh, result.field.non_converged);
  return 0;
}

int run_geodesic_cmd(const CommonArgs& common, const std::string& from,
                     const std::string& to, const std::string& grid) {
  Surface surface = Surface::load(common.surface_path);
  ParamPoint a = parse_point(from), b = parse_point(to);
  auto [nu, nv] = parse_grid(grid);
  GeodesicRunResult run = run_geodesic(surface, a, b, nu, nv);
  std::printf("%.17g\n", run.geodesic.length);
  if (wants(common.formats, "obj"))
    write_polyline_obj(common.out_prefix + ".obj", run.lifted);
  if (wants(common.formats, "json"))
    write_text_file(common.out_prefix + ".json",
                    geodesic_result_json(surface, a, b, run));
  if (!run.geodesic.converged)
    return finish_with_diagnostics(common.out_prefix,
                                   "flip shortening did not converge", {}, nullptr,
                                   1);
  return 0;
}

int run_voronoi_cmd(const CommonArgs& common, const std::string& curve_path,
                    double distance, int segments, const std::string& grid,
                    double cutoff, bool dump_mesh) {
  Surface surface = Surface::load(common.surface_path);
  SourceCurve curve = SourceCurve::load(curve_path, surface);
  RunOptions options;
  options.distance = distance;
  options.segments = segments;
  std::tie(options.grid_nu, options.grid_nv) = parse_grid(grid);
  options.cutoff = cutoff;
  options.threads = common.threads;

  PipelineResult result = run_offset_pipeline(surface, curve, options);
  std::vector<SourceCurve> curves = {curve};
  if (wants(common.formats, "svg"))
    write_offset_svg(common.out_prefix + ".svg", surface, curves, nullptr,
                     &result.labeled);
  nlohmann::json j;
  j["faces"] = result.labeled.faces.size();
  j["vertices"] = result.labeled.vertices.size();
  j["sites"] = result.sites.sites.size();
  j["skipped_faces"] = result.labeled.skipped_faces;
  if (wants(common.formats, "json"))
    write_text_file(common.out_prefix + ".json", j.dump(2));
  if (dump_mesh)
    result.mesh.dump_obj(common.out_prefix + ".mesh.obj",
                         common.out_prefix + ".mesh.json");
  if (!result.violating_edges.empty())
    return finish_with_diagnostics(common.out_prefix,
                                   "field gradient-norm violation",
                                   result.violating_edges, &result.mesh,
                                   result.field.non_converged);
  return 0;
}

int run_morph_cmd(const CommonArgs& common, const std::string& region_path,
                  const std::string& op, double distance, int segments,
                  const std::string& grid, double cutoff) {
  Surface surface = Surface::load(common.surface_path);
  Region region = Region::load(region_path, surface);
  MorphOptions options;
  options.segments = segments;
  std::tie(options.grid_nu, options.grid_nv) = parse_grid(grid);
  options.cutoff = cutoff;
  options.threads = common.threads;

  Region out;
  if (op == "opening") out = opening(region, distance, surface, options);
  else if (op == "closing") out = closing(region, distance, surface, options);
  else if (op == "dilate") out = dilate(region, distance, surface, options);
  else if (op == "erode") out = erode(region, distance, surface, options);
  else throw ConfigError("--op must be opening|closing|dilate|erode");

  if (wants(common.formats, "json"))
    write_text_file(common.out_prefix + ".json", out.to_json_text());
  if (wants(common.formats, "svg")) {
    std::vector<SourceCurve> loops = region.loops;
    OffsetResult as_offset;
    as_offset.offset_distance = distance;
    for (const auto& loop : out.loops) {
      OffsetPolyline poly;
      poly.uv = loop.samples;
      poly.closed = true;
      poly.site.assign(loop.samples.size(), -1);
      as_offset.polylines.push_back(poly);
    }
    write_offset_svg(common.out_prefix + ".svg", surface, loops, &as_offset,
                     nullptr);
  }
  if (wants(common.formats, "obj")) {
    OffsetResult lifted;
    lifted.offset_distance = distance;
    for (const auto& loop : out.loops) {
      OffsetPolyline poly;
      poly.uv = loop.samples;
      poly.closed = true;
      lifted.polylines.push_back(poly);
    }
    for (auto& poly : lifted.polylines) {
      poly.xyz.reserve(poly.uv.size() + 1);
      for (const auto& p : poly.uv) poly.xyz.push_back(surface.evaluate(p));
      if (!poly.uv.empty()) poly.xyz.push_back(surface.evaluate(poly.uv[0]));
    }
    write_offset_obj(common.out_prefix + ".obj", lifted);
  }
  log_line(LogLevel::Info, "morph_done",
           {{"op", op}, {"loops", std::to_string(out.loops.size())}});
  return 0;
}

int run_bench_cmd(const CommonArgs& common, const std::string& suite) {
  std::vector<BenchRow> rows;
  nlohmann::json j;
  if (suite == "accuracy" || suite == "all") {
    AccuracyReport report = run_accuracy_suite(common.seed, common.threads);
    rows.insert(rows.end(), report.rows.begin(), report.rows.end());
    nlohmann::json dev = nlohmann::json::array();
    for (const auto& g : report.geodesic) {
      dev.push_back({{"faces", g.faces},
                     {"pairs", g.pairs},
                     {"mean_deviation", g.mean_deviation}});
      std::printf("geodesic deviation @%d faces: %.6f%%\n", g.faces,
                  100.0 * g.mean_deviation);
    }
    j["geodesic_deviation"] = std::move(dev);
    for (const auto& row : report.rows)
      std::printf("%s %s: HD %.6g CD %.6g (%.2fs)\n", row.suite.c_str(),
                  row.model.c_str(), row.hd, row.cd, row.seconds);
  }
  if (suite == "scaling" || suite == "all") {
    ScalingReport report = run_scaling_suite(common.seed, common.threads);
    rows.insert(rows.end(), report.segment_rows.begin(), report.segment_rows.end());
    rows.insert(rows.end(), report.distance_rows.begin(),
                report.distance_rows.end());
    j["scaling"] = {{"slope", report.fit.slope},
                    {"intercept", report.fit.intercept},
                    {"r2", report.fit.r2},
                    {"monotone_in_distance", report.monotone_in_distance}};
    std::printf("scaling fit: R^2 %.4f, monotone in d: %s\n", report.fit.r2,
                report.monotone_in_distance ? "yes" : "no");
  }
  write_bench_csv(common.out_prefix + ".csv", rows);
  nlohmann::json jrows = nlohmann::json::array();
  for (const auto& r : rows)
    jrows.push_back({{"suite", r.suite},
                     {"model", r.model},
                     {"segments", r.segments},
                     {"faces", r.faces},
                     {"d", r.d},
                     {"hd", r.hd},
                     {"cd", r.cd},
                     {"seconds", r.seconds},
                     {"phase_field", r.phase_field},
                     {"phase_voronoi", r.phase_voronoi},
                     {"phase_extract", r.phase_extract}});
  j["rows"] = std::move(jrows);
  write_text_file(common.out_prefix + ".json", j.dump(2));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geodesic offset curves of source curves on analytic parametric "
               "surfaces"};
  app.require_subcommand(1);

  CommonArgs common;
  std::string curve_path, region_path, grid, from, to, op, suite = "all";
  double distance = 0.0, cutoff = 0.0;
  int segments = 1000, stress_waypoints = 0;
  bool dump_mesh = false;

  auto add_common = [&](CLI::App* cmd, bool needs_surface = true) {
    auto* opt = cmd->add_option("--surface", common.surface_path,
                                "surface spec JSON path");
    if (needs_surface) opt->required();
    cmd->add_option("--out", common.out_prefix, "output path prefix");
    cmd->add_option("--formats", common.formats, "comma list of obj,svg,json");
    cmd->add_option("--threads", common.threads, "worker threads (0 = auto)");
    cmd->add_option("--seed", common.seed, "random seed");
  };

  CLI::App* offset_cmd = app.add_subcommand("offset", "offset a curve on a surface");
  add_common(offset_cmd);
  offset_cmd->add_option("--curve", curve_path, "curve JSON path")->required();
  offset_cmd->add_option("--distance", distance, "offset distance")->required();
  offset_cmd->add_option("--segments", segments, "curve discretization count");
  offset_cmd->add_option("--grid", grid, "mesh resolution nu,nv");
  offset_cmd->add_option("--cutoff", cutoff, "propagation cutoff override");
  offset_cmd->add_option("--stress-init", stress_waypoints,
                         "waypoints for the suboptimal-init stress protocol");
  offset_cmd->add_flag("--dump-mesh", dump_mesh, "write the triangulation OBJ");

  CLI::App* geodesic_cmd =
      app.add_subcommand("geodesic", "geodesic between two parameter points");
  add_common(geodesic_cmd);
  geodesic_cmd->add_option("--from", from, "start point u,v")->required();
  geodesic_cmd->add_option("--to", to, "end point u,v")->required();
  geodesic_cmd->add_option("--grid", grid, "mesh resolution nu,nv");

  CLI::App* voronoi_cmd =
      app.add_subcommand("voronoi", "geodesic Voronoi decomposition of curve sites");
  add_common(voronoi_cmd);
  voronoi_cmd->add_option("--curve", curve_path, "curve JSON path")->required();
  voronoi_cmd->add_option("--distance", distance, "offset distance (sizes the cutoff)")
      ->required();
  voronoi_cmd->add_option("--segments", segments, "curve discretization count");
  voronoi_cmd->add_option("--grid", grid, "mesh resolution nu,nv");
  voronoi_cmd->add_option("--cutoff", cutoff, "propagation cutoff override");
  voronoi_cmd->add_flag("--dump-mesh", dump_mesh, "write the triangulation OBJ");

  CLI::App* morph_cmd =
      app.add_subcommand("morph", "morphological opening/closing of a region");
  add_common(morph_cmd);
  morph_cmd->add_option("--region", region_path, "region JSON path")->required();
  morph_cmd->add_option("--op", op, "opening|closing|dilate|erode")->required();
  morph_cmd->add_option("--distance", distance, "structuring distance")->required();
  morph_cmd->add_option("--segments", segments, "boundary discretization count");
  morph_cmd->add_option("--grid", grid, "mesh resolution nu,nv");
  morph_cmd->add_option("--cutoff", cutoff, "propagation cutoff override");

  CLI::App* bench_cmd = app.add_subcommand("bench", "accuracy and scaling suites");
  add_common(bench_cmd, false);
  bench_cmd->add_option("--suite", suite, "accuracy|scaling|all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (offset_cmd->parsed())
      return run_offset_cmd(common, curve_path, distance, segments, grid, cutoff,
                            stress_waypoints, dump_mesh);
    if (geodesic_cmd->parsed()) return run_geodesic_cmd(common, from, to, grid);
    if (voronoi_cmd->parsed())
      return run_voronoi_cmd(common, curve_path, distance, segments, grid, cutoff,
                             dump_mesh);
    if (morph_cmd->parsed())
      return run_morph_cmd(common, region_path, op, distance, segments, grid,
                           cutoff);
    if (bench_cmd->parsed()) return run_bench_cmd(common, suite);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    write_text_file(common.out_prefix + ".diag.json",
                    diagnostics_json(e.what(), {}, nullptr, 0));
    return 3;
  }
  return 2;
}
