#pragma once

#include <vector>

#include "surfoffset/geodesic.hpp"

namespace surfoffset {

enum class VertexKind { original, voronoi_vertex, site };

// Candidate site plane over one unfolded triangle: the linear function
// interpolating the site's geodesic distance at the three corners.
struct CutCandidate {
  int site = -1;
  std::array<double, 3> corner_dist{};
};

// Convex sub-polygon of the triangle on which one candidate's plane is the
// lower envelope. Vertices are counterclockwise, stored both in the
// unfolded frame and barycentrically.
struct CutPoly {
  int site = -1;
  std::vector<Vec2> pts;
  std::vector<Vec3> bary;
};

// Lower-envelope decomposition of the triangle by incremental half-plane
// cuts. Sub-polygons tile the triangle (slivers thinner than 1e-12 of the
// triangle diameter are dropped); identical planes keep the smaller site.
std::vector<CutPoly> cut_triangle(const UnfoldedTriangle& tri,
                                  std::vector<CutCandidate> candidates);

// Refined triangulation in which every face carries exactly one site label
// and every vertex a geodesic distance to the source curve.
struct LabeledMesh {
  struct LVertex {
    ParamPoint p;
    double distance = 0.0;
    VertexKind kind = VertexKind::original;
  };
  struct LFace {
    std::array<int, 3> v{};
    int label = -1;
    int parent_face = -1;
    std::array<Vec2, 3> corner2d{};  // in the parent face's unfolded frame
  };
  std::vector<LVertex> vertices;
  std::vector<LFace> faces;
  int skipped_faces = 0;  // faces outside the finalized propagation region
  double cutoff = 0.0;    // propagation cutoff of the field that built this
};

LabeledMesh compute_voronoi(const IntrinsicMesh& mesh, const DistanceField& field,
                            const SiteSet& sites, const Surface& surface,
                            int threads = 0);

}  // namespace surfoffset
