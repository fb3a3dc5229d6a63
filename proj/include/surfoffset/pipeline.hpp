#pragma once

#include "surfoffset/offset.hpp"

namespace surfoffset {

struct RunOptions {
  double distance = 0.0;
  int segments = 1000;
  int grid_nu = 0, grid_nv = 0;  // 0 = auto from domain aspect
  double cutoff = 0.0;           // 0 = 1.5*d + 2*mean site spacing
  int threads = 0;
  StressInit stress;
};

struct PhaseTimings {
  double build = 0, insert = 0, field = 0, voronoi = 0, extract = 0, total = 0;
};

struct PipelineResult {
  IntrinsicMesh mesh;
  SiteSet sites;
  std::vector<int> site_vids;
  DistanceField field;
  LabeledMesh labeled;
  OffsetResult offset;
  PhaseTimings timings;
  std::vector<int> violating_edges;
};

// Default grid for a surface: ~200x200 for a square domain, scaled by the
// domain aspect ratio.
std::pair<int, int> auto_grid(const Surface& surface, int base = 200);

// Splits n sites across the loops proportionally to induced length and
// merges them with cumulative arc positions.
SiteSet discretize_curves(const std::vector<SourceCurve>& curves, int n,
                          const Surface& surface);

PipelineResult run_offset_pipeline(const Surface& surface,
                                   const std::vector<SourceCurve>& curves,
                                   const RunOptions& options);
PipelineResult run_offset_pipeline(const Surface& surface, const SourceCurve& curve,
                                   const RunOptions& options);

struct GeodesicRunResult {
  GeodesicResult geodesic;
  VertexPath init;
  std::vector<SurfacePoint> lifted;  // path polyline lifted to 3D
};

GeodesicRunResult run_geodesic(const Surface& surface, ParamPoint a, ParamPoint b,
                               int grid_nu = 0, int grid_nv = 0);

}  // namespace surfoffset
