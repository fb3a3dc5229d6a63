#pragma once

#include <optional>
#include <vector>

#include "surfoffset/voronoi.hpp"

namespace surfoffset {

// d-level segment of the linear field over one unfolded triangle. Each
// endpoint lies on a face edge (local index: 0 = v0v1, 1 = v1v2, 2 = v2v0)
// at parameter t from the edge's first corner.
struct LevelSegment {
  bool valid = false;
  std::array<Vec2, 2> pts{};
  std::array<Vec3, 2> bary{};
  std::array<int, 2> local_edge{};
  std::array<double, 2> t{};
};

// Corner values exactly equal to d are perturbed by +1e-12*d so crossings
// never land on vertices.
LevelSegment face_level_segment(const std::array<double, 3>& dist,
                                const UnfoldedTriangle& tri, double d);

struct OffsetPolyline {
  std::vector<ParamPoint> uv;
  std::vector<int> site;     // source-site id of the segment after vertex i
  bool closed = false;
  std::vector<SurfacePoint> xyz;  // densified lifted samples
};

struct OffsetResult {
  double offset_distance = 0.0;
  std::vector<OffsetPolyline> polylines;
  int clipped_endpoints = 0;  // polylines ending at the region/domain border

  size_t total_vertices() const {
    size_t n = 0;
    for (const auto& p : polylines) n += p.uv.size();
    return n;
  }
};

// Extracts the d-level set per labeled face, stitches segments into maximal
// polylines through shared refined-edge crossings, and lifts them to 3D.
OffsetResult extract_offset(const LabeledMesh& labeled, double d,
                            const Surface& surface, int threads = 0);

// Dense point cloud of the d-level of the exhaustive all-sites field on the
// unrefined mesh; end-to-end oracle for small instances.
std::vector<SurfacePoint> brute_force_offset(IntrinsicMesh& mesh,
                                             const std::vector<int>& site_vertices,
                                             double d, const Surface& surface);

}  // namespace surfoffset
