#include <cmath>
#include <random>

#include "doctest.h"
#include "surfoffset/morphology.hpp"
#include "test_helpers.hpp"

using namespace surfoffset;
using namespace surfoffset::testing;

namespace {

Surface wide_plane() {
  return Surface(SurfaceKind::plane, {}, {-2, 2, -2, 2}, {false, false});
}

Region disk_region(ParamPoint c, double r, int samples = 256) {
  Region region;
  region.loops.push_back(circle_uv(c, r, samples));
  return region;
}

}  // namespace

TEST_CASE("even-odd classification") {
  Surface plane = wide_plane();
  Region disk = disk_region({0, 0}, 1.0);
  CHECK(classify_inside(disk, {0, 0}, plane));
  CHECK_FALSE(classify_inside(disk, {1.8, 0}, plane));

  Region annulus = disk_region({0, 0}, 1.0);
  annulus.loops.push_back(circle_uv({0, 0}, 0.5, 256));
  CHECK(classify_inside(annulus, {0.75, 0}, plane));
  CHECK_FALSE(classify_inside(annulus, {0, 0}, plane));
  CHECK_FALSE(classify_inside(annulus, {1.8, 0}, plane));
}

TEST_CASE("region validation") {
  Surface plane = wide_plane();
  Region open_loop;
  SourceCurve arc;
  arc.closed = false;
  for (int i = 0; i < 32; ++i) arc.samples.push_back({-1.0 + 2.0 * i / 31.0, 0.0});
  open_loop.loops.push_back(arc);
  CHECK_THROWS_AS(open_loop.validate(plane), ConfigError);

  Surface torus = Surface::make(SurfaceKind::torus);
  Region seam;
  seam.loops.push_back(const_v_loop(torus, 1.0, 64));  // wraps the u seam
  CHECK_THROWS_AS(seam.validate(torus), ConfigError);
}

TEST_CASE("plane dilation and erosion move the radius by d") {
  Surface plane = wide_plane();
  Region disk = disk_region({0, 0}, 0.8, 512);
  MorphOptions opt;
  opt.segments = 256;
  opt.grid_nu = 81;
  opt.grid_nv = 81;

  Region grown = dilate(disk, 0.3, plane, opt);
  REQUIRE(grown.loops.size() == 1);
  for (const auto& p : grown.loops[0].samples)
    CHECK(param_distance(p, {0, 0}) == doctest::Approx(1.1).epsilon(0.02));

  Region shrunk = erode(disk, 0.3, plane, opt);
  REQUIRE(shrunk.loops.size() == 1);
  for (const auto& p : shrunk.loops[0].samples)
    CHECK(param_distance(p, {0, 0}) == doctest::Approx(0.5).epsilon(0.03));

  CHECK(region_area(shrunk, plane, 128) < region_area(disk, plane, 128));
  CHECK(region_area(disk, plane, 128) < region_area(grown, plane, 128));
}

TEST_CASE("erosion can annihilate the region") {
  Surface plane = wide_plane();
  Region disk = disk_region({0, 0}, 0.3, 256);
  MorphOptions opt;
  opt.segments = 128;
  opt.grid_nu = 65;
  opt.grid_nv = 65;
  Region gone = erode(disk, 0.4, plane, opt);
  CHECK(gone.loops.empty());
  CHECK(region_area(gone, plane, 64) == 0.0);
  Region still_gone = opening(disk, 0.4, plane, opt);
  CHECK(still_gone.loops.empty());
}

TEST_CASE("sphere geodesic disk grows by the offset distance") {
  Surface sphere = Surface::make(SurfaceKind::sphere);
  Region disk;
  disk.loops.push_back(SourceCurve{});
  disk.loops[0].closed = true;
  disk.loops[0].samples = sphere_geodesic_circle(kPi, 0.0, 0.8, 512);
  MorphOptions opt;
  opt.segments = 512;
  opt.grid_nu = 161;
  opt.grid_nv = 81;

  Region grown = dilate(disk, 0.15, sphere, opt);
  REQUIRE(grown.loops.size() == 1);
  // Lifted Hausdorff distance to the analytic geodesic circle of radius r+d.
  auto analytic = sphere_geodesic_circle(kPi, 0.0, 0.95, 4096);
  double worst = 0;
  for (const auto& p : grown.loops[0].samples) {
    SurfacePoint x = sphere.evaluate(p);
    double best = 1e300;
    for (const auto& q : analytic)
      best = std::min(best, distance(x, sphere.evaluate(q)));
    worst = std::max(worst, best);
  }
  CHECK(worst <= 2e-3);

  Region round_trip = dilate(erode(disk, 0.15, sphere, opt), 0.15, sphere, opt);
  REQUIRE(round_trip.loops.size() == 1);
  auto original = sphere_geodesic_circle(kPi, 0.0, 0.8, 4096);
  worst = 0;
  for (const auto& p : round_trip.loops[0].samples) {
    SurfacePoint x = sphere.evaluate(p);
    double best = 1e300;
    for (const auto& q : original)
      best = std::min(best, distance(x, sphere.evaluate(q)));
    worst = std::max(worst, best);
  }
  CHECK(worst <= 4e-3);
}

TEST_CASE("opening removes a thin neck") {
  Surface plane = wide_plane();
  // Barbell: two disks of radius 0.5 joined by a neck of half-width 0.05.
  Region barbell;
  SourceCurve outline;
  outline.closed = true;
  double cx = 0.75, r = 0.5, hw = 0.05;
  auto add_arc = [&](double center_x, double a0, double a1, int n) {
    for (int i = 0; i < n; ++i) {
      double a = a0 + (a1 - a0) * i / n;
      outline.samples.push_back({center_x + r * std::cos(a), r * std::sin(a)});
    }
  };
  double touch = std::asin(hw / r);
  add_arc(cx, touch, 2.0 * kPi - touch, 128);           // right disk
  for (int i = 0; i < 16; ++i)                          // neck bottom
    outline.samples.push_back(
        {cx + r * std::cos(touch) - (2.0 * cx - 2.0 * r * std::cos(touch)) * i / 16.0 -
             0.0,
         -hw});
  add_arc(-cx, kPi + touch, 3.0 * kPi - touch, 128);    // left disk
  for (int i = 0; i < 16; ++i)                          // neck top
    outline.samples.push_back(
        {-cx + r * std::cos(touch) + (2.0 * cx - 2.0 * r * std::cos(touch)) * i / 16.0,
         hw});
  barbell.loops.push_back(outline);
  barbell.validate(plane);
  REQUIRE(classify_inside(barbell, {0.0, 0.0}, plane));   // neck center
  REQUIRE(classify_inside(barbell, {cx, 0.0}, plane));

  MorphOptions opt;
  opt.segments = 384;
  opt.grid_nu = 97;
  opt.grid_nv = 97;
  Region opened = opening(barbell, 0.15, plane, opt);
  CHECK(opened.loops.size() == 2);  // neck of width 0.1 < 2d removed
  CHECK_FALSE(classify_inside(opened, {0.0, 0.0}, plane));
  CHECK(classify_inside(opened, {cx, 0.0}, plane));
  CHECK(classify_inside(opened, {-cx, 0.0}, plane));
}

TEST_CASE("closing fills a small hole, opening removes a small blob") {
  Surface plane = wide_plane();
  MorphOptions opt;
  opt.segments = 256;
  opt.grid_nu = 81;
  opt.grid_nv = 81;
  double d = 0.15;

  Region holed = disk_region({0, 0}, 0.8, 512);
  holed.loops.push_back(circle_uv({0.2, 0.1}, 0.1, 128));  // hole diameter 0.2 < 2d
  REQUIRE_FALSE(classify_inside(holed, {0.2, 0.1}, plane));
  Region closed = closing(holed, d, plane, opt);
  CHECK(closed.loops.size() == 1);  // loop count drops: hole filled
  CHECK(classify_inside(closed, {0.2, 0.1}, plane));

  Region blobby = disk_region({-0.5, 0}, 0.8, 512);
  blobby.loops.push_back(circle_uv({1.5, 0.3}, 0.1, 128));  // satellite blob
  REQUIRE(classify_inside(blobby, {1.5, 0.3}, plane));
  Region opened = opening(blobby, d, plane, opt);
  CHECK(opened.loops.size() == 1);  // blob removed
  CHECK_FALSE(classify_inside(opened, {1.5, 0.3}, plane));
  CHECK(classify_inside(opened, {-0.5, 0}, plane));
}

TEST_CASE("opening is anti-extensive and closing extensive at sampled points") {
  Surface plane = wide_plane();
  MorphOptions opt;
  opt.segments = 256;
  opt.grid_nu = 81;
  opt.grid_nv = 81;
  Region disk = disk_region({0.1, -0.2}, 0.9, 512);
  double d = 0.2;
  Region opened = opening(disk, d, plane, opt);
  Region closed = closing(disk, d, plane, opt);
  REQUIRE(opened.loops.size() == 1);
  REQUIRE(closed.loops.size() == 1);

  double tol = 2.0 * (4.0 / 80.0);  // two mean edge lengths
  auto boundary_distance = [&](ParamPoint p) {
    double best = 1e300;
    for (const auto& s : disk.loops[0].samples)
      best = std::min(best, param_distance(p, s));
    return best;
  };
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> co(-2.0, 2.0);
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    ParamPoint p{co(rng), co(rng)};
    bool in_r = classify_inside(disk, p, plane);
    bool in_open = classify_inside(opened, p, plane);
    bool in_close = classify_inside(closed, p, plane);
    if ((in_open && !in_r) || (in_r && !in_close)) {
      if (boundary_distance(p) > tol) ++violations;
    }
  }
  CHECK(violations == 0);

  // Large smooth disk: opening and closing leave it essentially unchanged.
  double a0 = region_area(disk, plane, 128);
  CHECK(region_area(opened, plane, 128) == doctest::Approx(a0).epsilon(0.02));
  CHECK(region_area(closed, plane, 128) == doctest::Approx(a0).epsilon(0.02));
}
