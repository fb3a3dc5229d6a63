#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "surfoffset/pipeline.hpp"

namespace surfoffset {

struct CurveDistanceReport {
  double hausdorff = 0.0;  // one-directional: max over A of nearest in B
  double chamfer = 0.0;    // mean of the same minima
  std::size_t a_count = 0, b_count = 0;
  std::string direction;
};

// Nearest-neighbor distances accelerated by a uniform grid; brute force is
// only acceptable below 1e4 points.
CurveDistanceReport hausdorff_cd(const std::vector<SurfacePoint>& a,
                                 const std::vector<SurfacePoint>& b,
                                 const std::string& direction = "a_to_b");

// Brute-force oracle for the accelerated version.
CurveDistanceReport hausdorff_cd_bruteforce(const std::vector<SurfacePoint>& a,
                                            const std::vector<SurfacePoint>& b,
                                            const std::string& direction = "a_to_b");

// n on-surface points along the offset polylines, distributed
// proportionally to 3D arc length; parameter positions are interpolated
// and lifted exactly through the surface.
std::vector<SurfacePoint> sample_offset_points(const OffsetResult& offset,
                                               std::size_t n,
                                               const Surface& surface);
std::vector<SurfacePoint> sample_polyline_points(
    const std::vector<SurfacePoint>& polyline, bool closed, std::size_t n);

struct LinearFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct BenchRow {
  std::string suite, model;
  int segments = 0, faces = 0;
  double d = 0.0, hd = 0.0, cd = 0.0, seconds = 0.0;
  double phase_field = 0.0, phase_voronoi = 0.0, phase_extract = 0.0;
};

void write_bench_csv(const std::string& path, const std::vector<BenchRow>& rows);

struct GeodesicDeviationStat {
  int faces = 0;
  int pairs = 0;
  double mean_deviation = 0.0;  // relative, vs R*arccos(<x_s,x_t>/R^2)
};

// Mean relative deviation of flip-shortened geodesics from the analytic
// sphere distance over random vertex pairs.
GeodesicDeviationStat sphere_geodesic_deviation(int grid_nu, int grid_nv,
                                                int pairs, std::uint64_t seed);

struct AccuracyReport {
  std::vector<BenchRow> rows;  // sphere + cylinder offset accuracy
  std::vector<GeodesicDeviationStat> geodesic;
};
AccuracyReport run_accuracy_suite(std::uint64_t seed, int threads);

struct ScalingReport {
  std::vector<BenchRow> segment_rows;   // segments in {500,1000,2000,4000}
  std::vector<BenchRow> distance_rows;  // d in {0.1,0.2,0.3,0.4}
  LinearFit fit;                        // seconds vs segments
  bool monotone_in_distance = false;
};
ScalingReport run_scaling_suite(std::uint64_t seed, int threads);

}  // namespace surfoffset
