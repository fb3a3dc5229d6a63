#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "surfoffset/io.hpp"
#include "test_helpers.hpp"

using namespace surfoffset;
using namespace surfoffset::testing;

namespace {

PipelineResult small_run(const Surface& sphere, const SourceCurve& equator) {
  RunOptions run;
  run.distance = 0.25;
  run.segments = 48;
  run.grid_nu = 41;
  run.grid_nv = 21;
  return run_offset_pipeline(sphere, equator, run);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("offset OBJ, SVG and JSON outputs") {
  Surface sphere = Surface::make(SurfaceKind::sphere);
  SourceCurve equator = const_v_loop(sphere, 0.0, 512);
  PipelineResult pipe = small_run(sphere, equator);

  write_offset_obj("/tmp/surfoffset_io.obj", pipe.offset);
  std::string obj = slurp("/tmp/surfoffset_io.obj");
  CHECK(obj.find("\nv ") != std::string::npos);
  CHECK(obj.find("\nl ") != std::string::npos);

  std::vector<SourceCurve> curves = {equator};
  write_offset_svg("/tmp/surfoffset_io.svg", sphere, curves, &pipe.offset,
                   &pipe.labeled);
  std::string svg = slurp("/tmp/surfoffset_io.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polygon") != std::string::npos);
  CHECK(svg.find("<line") != std::string::npos);

  RunOptions run;
  run.distance = 0.25;
  run.segments = 48;
  std::string json_text = offset_result_json(sphere, curves, run, pipe.offset);
  nlohmann::json doc = nlohmann::json::parse(json_text);
  CHECK(doc["distance"] == 0.25);
  CHECK(doc["polylines"].size() == pipe.offset.polylines.size());
  CHECK(doc["polylines"][0].contains("uv"));
  CHECK(doc["polylines"][0].contains("xyz"));
  CHECK(doc["polylines"][0].contains("site"));
  // Timings never leak into the deterministic run document.
  CHECK(json_text.find("seconds") == std::string::npos);
}

TEST_CASE("diagnostics document lists violating edges") {
  Surface sphere = Surface::make(SurfaceKind::sphere);
  IntrinsicMesh mesh = IntrinsicMesh::build_uniform(sphere, 11, 7);
  std::string diag = diagnostics_json("test failure", {0, 3}, &mesh, 2);
  nlohmann::json doc = nlohmann::json::parse(diag);
  CHECK(doc["failure"] == "test failure");
  CHECK(doc["non_converged_paths"] == 2);
  REQUIRE(doc["violating_edges"].size() == 2);
  CHECK(doc["violating_edges"][0]["edge"] == 0);
  CHECK(doc["violating_edges"][0].contains("uv"));
}

TEST_CASE("geodesic run document") {
  Surface sphere = Surface::make(SurfaceKind::sphere);
  GeodesicRunResult run = run_geodesic(sphere, {0.3, 0.1}, {2.0, 0.6}, 41, 21);
  std::string text = geodesic_result_json(sphere, {0.3, 0.1}, {2.0, 0.6}, run);
  nlohmann::json doc = nlohmann::json::parse(text);
  CHECK(doc["length"].get<double>() > 0);
  CHECK(doc["length"].get<double>() <= doc["init_length"].get<double>() + 1e-12);
  CHECK(doc["converged"] == true);
  CHECK(doc["path_xyz"].size() >= 2);
}
