#include <cmath>
#include <random>

#include "doctest.h"
#include "surfoffset/metrics.hpp"
#include "test_helpers.hpp"

using namespace surfoffset;
using namespace surfoffset::testing;

TEST_CASE("identical point sets have zero distance") {
  std::vector<SurfacePoint> pts;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> co(-1, 1);
  for (int i = 0; i < 2000; ++i) pts.push_back({co(rng), co(rng), co(rng)});
  CurveDistanceReport rep = hausdorff_cd(pts, pts);
  CHECK(rep.hausdorff == 0.0);
  CHECK(rep.chamfer == 0.0);
  CHECK(rep.a_count == pts.size());
}

TEST_CASE("parallel unit segments at gap g") {
  std::vector<SurfacePoint> a, b;
  double g = 0.37;
  for (int i = 0; i <= 20000; ++i) {
    double t = static_cast<double>(i) / 20000;
    a.push_back({t, 0, 0});
    b.push_back({t, g, 0});
  }
  CurveDistanceReport rep = hausdorff_cd(a, b);
  CHECK(std::abs(rep.hausdorff - g) <= 1e-6);
  CHECK(std::abs(rep.chamfer - g) <= 1e-6);
}

TEST_CASE("grid acceleration matches brute force") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> co(-2, 2);
  std::vector<SurfacePoint> a, b;
  for (int i = 0; i < 5000; ++i) a.push_back({co(rng), co(rng), co(rng)});
  for (int i = 0; i < 5000; ++i) b.push_back({co(rng), co(rng), co(rng)});
  CurveDistanceReport fast = hausdorff_cd(a, b);
  CurveDistanceReport slow = hausdorff_cd_bruteforce(a, b);
  CHECK(std::abs(fast.hausdorff - slow.hausdorff) <= 1e-12);
  CHECK(std::abs(fast.chamfer - slow.chamfer) <= 1e-12);
}

TEST_CASE("linear fit recovers an exact line") {
  std::vector<double> x = {500, 1000, 2000, 4000};
  std::vector<double> y;
  for (double xi : x) y.push_back(0.75 + 0.002 * xi);
  LinearFit fit = linear_fit(x, y);
  CHECK(fit.slope == doctest::Approx(0.002).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("offset sampling returns on-surface points") {
  Surface sphere = Surface::make(SurfaceKind::sphere);
  SourceCurve equator = const_v_loop(sphere, 0.0, 1024);
  RunOptions run;
  run.distance = 0.25;
  run.segments = 64;
  run.grid_nu = 61;
  run.grid_nv = 31;
  PipelineResult pipe = run_offset_pipeline(sphere, equator, run);
  auto samples = sample_offset_points(pipe.offset, 5000, sphere);
  CHECK(samples.size() >= 4950);
  for (const auto& p : samples)
    CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("geodesic deviation helper runs at the coarsest resolution") {
  GeodesicDeviationStat stat = sphere_geodesic_deviation(11, 5, 100, 42);
  CHECK(stat.faces == 80);
  CHECK(stat.pairs == 100);
  CHECK(stat.mean_deviation < 0.05);
}

TEST_CASE("bench CSV schema") {
  std::vector<BenchRow> rows;
  BenchRow r;
  r.suite = "accuracy";
  r.model = "sphere";
  r.segments = 2000;
  r.faces = 50176;
  r.d = 0.3;
  r.hd = 1e-4;
  r.cd = 5e-5;
  r.seconds = 12.5;
  r.phase_field = 3.0;
  r.phase_voronoi = 1.0;
  r.phase_extract = 0.1;
  rows.push_back(r);
  write_bench_csv("/tmp/surfoffset_bench_test.csv", rows);
  std::ifstream in("/tmp/surfoffset_bench_test.csv");
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "suite,model,segments,faces,d,hd,cd,seconds,phase_field,phase_voronoi,"
        "phase_extract");
  std::string row;
  std::getline(in, row);
  CHECK(row.rfind("accuracy,sphere,2000,50176,", 0) == 0);
}
