#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "surfoffset/curve.hpp"
#include "surfoffset/mesh.hpp"

namespace surfoffset {

// Edge-graph path between mesh vertices.
struct VertexPath {
  std::vector<int> vertices;
  double total_length = 0.0;
};

// Path sample anchored to a face; vertices are encoded as the matching
// barycentric corner.
struct PathPoint {
  int face = -1;
  Vec3 bary;
};

struct GeodesicResult {
  double length = 0.0;
  std::vector<PathPoint> path;
  std::vector<int> path_vertices;
  int iterations = 0;
  bool converged = true;
};

// Shortest edge-graph path under the stored lengths; ties broken by
// popping the smallest vertex id first.
VertexPath dijkstra_path(const IntrinsicMesh& mesh, int s, int t);

// Single-source shortest-path tree; cheaper than repeated dijkstra_path
// when many targets share a source.
struct DijkstraTree {
  int source = -1;
  std::vector<double> dist;
  std::vector<int> pred;
  VertexPath path_to(int t) const;
  bool reached(int t) const {
    return t >= 0 && dist[t] != std::numeric_limits<double>::infinity();
  }
};
DijkstraTree dijkstra_tree(const IntrinsicMesh& mesh, int s,
                           double cutoff = std::numeric_limits<double>::infinity());

// Straightens init by intrinsic edge flips until every interior joint has
// wedge angle >= pi on both sides, or the iteration cap is reached. The
// mesh is flipped in place and restored bit-exactly before returning, so
// a mesh instance must not be shared across concurrent callers.
GeodesicResult flip_shorten(IntrinsicMesh& mesh, const VertexPath& init,
                            int max_iterations = 10000);

// dijkstra_path followed by flip_shorten.
double geodesic_distance(IntrinsicMesh& mesh, int s, int t);
GeodesicResult geodesic_query(IntrinsicMesh& mesh, int s, int t);

// Deliberately poor initialization for the gradient-norm stress protocol:
// concatenates Dijkstra legs through `waypoints` random intermediate
// vertices (0 disables it).
struct StressInit {
  int waypoints = 0;
  std::uint64_t seed = 0;
};

struct FieldOptions {
  double cutoff = 0.0;           // required; propagation stops beyond it
  double alpha = 0.2;            // candidate-site pruning factor
  int threads = 0;               // 0 = hardware default
  StressInit stress;
};

// One refined candidate at a vertex.
struct FieldCandidate {
  int site = -1;
  double distance = std::numeric_limits<double>::infinity();
  double graph_distance = std::numeric_limits<double>::infinity();
};

// Nearest-site geodesic distance field over mesh vertices, cut off at
// options.cutoff. Vertices beyond the cutoff stay unfinalized.
struct DistanceField {
  double cutoff = 0.0;
  std::vector<int> nearest_site;                     // -1 when unfinalized
  std::vector<double> distance;                      // inf when unfinalized
  std::vector<std::vector<FieldCandidate>> candidates;
  std::vector<int> site_vertices;                    // site index -> vertex id
  int non_converged = 0;

  bool finalized(int v) const { return nearest_site[v] >= 0; }
};

DistanceField build_distance_field(IntrinsicMesh& mesh,
                                   const std::vector<int>& site_vertices,
                                   const FieldOptions& options);

// Inserts the sites into the mesh first; convenience overload.
DistanceField build_distance_field(IntrinsicMesh& mesh, const SiteSet& sites,
                                   const Surface& surface, const FieldOptions& options);

// Recommended cutoff for offset distance d: 1.5*d + 2*mean site spacing.
double recommended_cutoff(double offset_distance, double mean_site_spacing);

// Edges whose endpoint distances violate |d_i - d_j| <= L_ij * (1 + 1e-6);
// an empty result certifies the field is 1-Lipschitz under the induced
// metric. Only edges with both endpoints finalized are tested.
std::vector<int> detect_field_inconsistency(const IntrinsicMesh& mesh,
                                            const DistanceField& field);

}  // namespace surfoffset
