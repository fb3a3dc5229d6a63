#include <cmath>
#include <random>

#include "doctest.h"
#include "surfoffset/geodesic.hpp"
#include "test_helpers.hpp"

using namespace surfoffset;
using namespace surfoffset::testing;

TEST_CASE("dijkstra path on a flat grid") {
  Surface plane = Surface::make(SurfaceKind::plane);
  IntrinsicMesh mesh = IntrinsicMesh::build_uniform(plane, 3, 3);
  int corner00 = -1, corner10 = -1;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (param_distance(mesh.param(v), {0, 0}) < 1e-12) corner00 = v;
    if (param_distance(mesh.param(v), {1, 0}) < 1e-12) corner10 = v;
  }
  VertexPath p = dijkstra_path(mesh, corner00, corner10);
  CHECK(p.total_length == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.vertices.front() == corner00);
  CHECK(p.vertices.back() == corner10);
  // Consecutive vertices are joined by edges whose lengths sum to the total.
  double sum = 0.0;
  for (size_t i = 0; i + 1 < p.vertices.size(); ++i) {
    int h = mesh.find_halfedge(p.vertices[i], p.vertices[i + 1]);
    REQUIRE(h >= 0);
    sum += mesh.edge_length(mesh.edge_of(h));
  }
  CHECK(std::abs(sum - p.total_length) <= 1e-12);

  CHECK_THROWS_AS(dijkstra_path(mesh, corner00, corner00), ConfigError);
}

TEST_CASE("single-edge init is a fixed point of flip shortening") {
  Surface plane = Surface::make(SurfaceKind::plane);
  IntrinsicMesh mesh = IntrinsicMesh::build_uniform(plane, 5, 5);
  int h = mesh.face_halfedge(0);
  VertexPath init;
  init.vertices = {mesh.origin(h), mesh.target(h)};
  init.total_length = mesh.edge_length(mesh.edge_of(h));
  GeodesicResult r = flip_shorten(mesh, init);
  CHECK(r.iterations == 0);
  CHECK(r.length == init.total_length);
  CHECK(r.converged);
}

TEST_CASE("staircase init straightens to the exact diagonal") {
  Surface plane = Surface::make(SurfaceKind::plane);
  IntrinsicMesh mesh = IntrinsicMesh::build_uniform(plane, 11, 11);
  // Anti-diagonal corners: the fixed grid diagonal direction fights the path.
  int a = -1, b = -1;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (param_distance(mesh.param(v), {1, 0}) < 1e-12) a = v;
    if (param_distance(mesh.param(v), {0, 1}) < 1e-12) b = v;
  }
  VertexPath init = dijkstra_path(mesh, a, b);
  GeodesicResult r = flip_shorten(mesh, init);
  CHECK(r.converged);
  CHECK(r.length == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(r.length <= init.total_length + 1e-12);
  CHECK(r.path.front().face >= 0);
  CHECK(r.path_vertices.front() == a);
  CHECK(r.path_vertices.back() == b);
}

TEST_CASE("plane geodesics equal Euclidean distances") {
  Surface plane = Surface::make(SurfaceKind::plane);
  IntrinsicMesh mesh = IntrinsicMesh::build_uniform(plane, 17, 17);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick(0, mesh.vertex_count() - 1);
  for (int i = 0; i < 100; ++i) {
    int s = pick(rng), t = pick(rng);
    if (s == t) continue;
    double got = geodesic_distance(mesh, s, t);
    double expected = param_distance(mesh.param(s), mesh.param(t));
    CHECK(std::abs(got - expected) <= 1e-9 * std::max(1.0, expected));
  }
}

TEST_CASE("cylinder geodesics match the unrolled isometry") {
  Surface cyl = Surface::make(SurfaceKind::cylinder);
  IntrinsicMesh mesh = IntrinsicMesh::build_uniform(cyl, 33, 21);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, mesh.vertex_count() - 1);
  for (int i = 0; i < 60; ++i) {
    int s = pick(rng), t = pick(rng);
    if (s == t) continue;
    ParamPoint ps = mesh.param(s), pt = mesh.param(t);
    double dtheta = std::remainder(pt.u - ps.u, 2.0 * kPi);
    double expected = std::hypot(dtheta, pt.v - ps.v);
    if (expected < 1e-9) continue;
    double got = geodesic_distance(mesh, s, t);
    CHECK(std::abs(got - expected) <= 1e-3 * expected);
  }
}

TEST_CASE("geodesic distance is symmetric and bounded by the init") {
  Surface torus = Surface::make(SurfaceKind::torus);
  IntrinsicMesh mesh = IntrinsicMesh::build_uniform(torus, 25, 25);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, mesh.vertex_count() - 1);
  for (int i = 0; i < 40; ++i) {
    int s = pick(rng), t = pick(rng);
    if (s == t) continue;
    VertexPath init = dijkstra_path(mesh, s, t);
    GeodesicResult r = flip_shorten(mesh, init);
    CHECK(r.length <= init.total_length + 1e-12);
    double back = geodesic_distance(mesh, t, s);
    CHECK(std::abs(r.length - back) <= 1e-9 * std::max(r.length, back));
  }
}

TEST_CASE("gaussian bump geodesics sit inside the oracle bracket") {
  Surface bump = Surface::make(SurfaceKind::gaussian_bump);
  IntrinsicMesh mesh = IntrinsicMesh::build_uniform(bump, 41, 41);
  IntrinsicMesh dense = IntrinsicMesh::build_uniform(bump, 161, 161);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 15; ++i) {
    ParamPoint a = random_interior(bump, rng);
    ParamPoint b = random_interior(bump, rng);
    if (param_distance(a, b) < 0.3) continue;
    int s = mesh.insert_site(a, bump), t = mesh.insert_site(b, bump);
    if (s == t) continue;
    double got = geodesic_distance(mesh, s, t);
    // Dense Dijkstra upper bound and extrinsic chord lower bound.
    int sd = dense.insert_site(a, bump), td = dense.insert_site(b, bump);
    double upper = dijkstra_path(dense, sd, td).total_length;
    double lower = distance(bump.evaluate(a), bump.evaluate(b));
    CHECK(got <= upper + 1e-9);
    CHECK(got >= lower - 1e-9);
  }
}

TEST_CASE("computed distances satisfy the triangle inequality") {
  Surface sphere = Surface::make(SurfaceKind::sphere);
  IntrinsicMesh mesh = IntrinsicMesh::build_uniform(sphere, 41, 21);
  double slack = 1e-6 * sphere.model_diameter();
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, mesh.vertex_count() - 1);
  // Pooled pairwise distances keep the test budget sane.
  std::vector<int> pool;
  for (int i = 0; i < 24; ++i) pool.push_back(pick(rng));
  std::vector<std::vector<double>> d(pool.size(), std::vector<double>(pool.size()));
  for (size_t i = 0; i < pool.size(); ++i)
    for (size_t j = i + 1; j < pool.size(); ++j)
      d[i][j] = d[j][i] =
          pool[i] == pool[j] ? 0.0 : geodesic_distance(mesh, pool[i], pool[j]);
  std::uniform_int_distribution<size_t> pk(0, pool.size() - 1);
  for (int n = 0; n < 3000; ++n) {
    size_t a = pk(rng), b = pk(rng), c = pk(rng);
    CHECK(d[a][c] <= d[a][b] + d[b][c] + slack);
  }
}

TEST_CASE("single-site field on the plane equals Euclidean distance") {
  Surface plane = Surface::make(SurfaceKind::plane);
  IntrinsicMesh mesh = IntrinsicMesh::build_uniform(plane, 21, 21);
  int site = mesh.insert_site({0.5, 0.5}, plane);
  FieldOptions opt;
  opt.cutoff = 2.0;
  DistanceField field = build_distance_field(mesh, std::vector<int>{site}, opt);
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    REQUIRE(field.finalized(v));
    double expected = param_distance(mesh.param(v), {0.5, 0.5});
    CHECK(std::abs(field.distance[v] - expected) <= 1e-9);
    CHECK(field.nearest_site[v] == 0);
  }
  CHECK(detect_field_inconsistency(mesh, field).empty());
}

TEST_CASE("two symmetric sites split along the perpendicular bisector") {
  Surface plane = Surface::make(SurfaceKind::plane);
  IntrinsicMesh mesh = IntrinsicMesh::build_uniform(plane, 33, 33);
  int s0 = mesh.insert_site({0.3, 0.52}, plane);
  int s1 = mesh.insert_site({0.7, 0.52}, plane);
  FieldOptions opt;
  opt.cutoff = 2.0;
  DistanceField field = build_distance_field(mesh, {s0, s1}, opt);
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    double du = mesh.param(v).u - 0.5;
    if (std::abs(du) < 1e-6) continue;  // on the bisector
    CHECK(field.nearest_site[v] == (du < 0 ? 0 : 1));
  }
}

TEST_CASE("great-circle site field approximates latitude distance") {
  Surface sphere = Surface::make(SurfaceKind::sphere);
  IntrinsicMesh mesh = IntrinsicMesh::build_uniform(sphere, 81, 41);
  SourceCurve equator = const_v_loop(sphere, 0.0, 2048);
  SiteSet sites = discretize(equator, 200, sphere);
  FieldOptions opt;
  opt.cutoff = 0.8;
  DistanceField field = build_distance_field(mesh, sites, sphere, opt);
  int checked = 0;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (!field.finalized(v)) continue;
    double lat = std::abs(mesh.param(v).v);
    if (lat < 0.05 || lat > 0.7) continue;
    CHECK(std::abs(field.distance[v] - lat) <= 0.01 * lat);
    ++checked;
  }
  CHECK(checked > 500);
  CHECK(detect_field_inconsistency(mesh, field).empty());
}

TEST_CASE("detector flags a corrupted field") {
  Surface plane = Surface::make(SurfaceKind::plane);
  IntrinsicMesh mesh = IntrinsicMesh::build_uniform(plane, 21, 21);
  int site = mesh.insert_site({0.5, 0.5}, plane);
  FieldOptions opt;
  opt.cutoff = 2.0;
  DistanceField field = build_distance_field(mesh, std::vector<int>{site}, opt);
  int victim = -1;
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (field.distance[v] > 0.3) victim = v;
  REQUIRE(victim >= 0);
  field.distance[victim] *= 2.0;
  std::vector<int> bad = detect_field_inconsistency(mesh, field);
  REQUIRE_FALSE(bad.empty());
  bool touches_victim = false;
  for (int e : bad) {
    auto [a, b] = mesh.edge_vertices(e);
    if (a == victim || b == victim) touches_victim = true;
  }
  CHECK(touches_victim);
}

TEST_CASE("suboptimal waypoint inits leave detectable gradient violations") {
  Surface sphere = Surface::make(SurfaceKind::sphere);
  IntrinsicMesh mesh = IntrinsicMesh::build_uniform(sphere, 41, 21);
  SourceCurve equator = const_v_loop(sphere, 0.0, 512);
  SiteSet sites = discretize(equator, 24, sphere);
  FieldOptions opt;
  opt.cutoff = 1.2;
  opt.stress.waypoints = 6;
  opt.stress.seed = 1234;
  DistanceField field = build_distance_field(mesh, sites, sphere, opt);
  std::vector<int> bad = detect_field_inconsistency(mesh, field);
  CHECK_FALSE(bad.empty());
}

TEST_CASE("field construction is deterministic across thread counts") {
  Surface sphere = Surface::make(SurfaceKind::sphere);
  SourceCurve equator = const_v_loop(sphere, 0.0, 512);
  SiteSet sites = discretize(equator, 50, sphere);

  auto run = [&](int threads) {
    IntrinsicMesh mesh = IntrinsicMesh::build_uniform(sphere, 41, 21);
    FieldOptions opt;
    opt.cutoff = 0.9;
    opt.threads = threads;
    return build_distance_field(mesh, sites, sphere, opt);
  };
  DistanceField f1 = run(1);
  DistanceField f2 = run(2);
  REQUIRE(f1.distance.size() == f2.distance.size());
  for (size_t v = 0; v < f1.distance.size(); ++v) {
    CHECK(f1.distance[v] == f2.distance[v]);
    CHECK(f1.nearest_site[v] == f2.nearest_site[v]);
  }
}
