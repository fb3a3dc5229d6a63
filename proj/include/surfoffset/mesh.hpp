#pragma once

#include <array>
#include <string>
#include <vector>

#include "surfoffset/surface.hpp"

namespace surfoffset {

// Planar realization of a face from its three edge lengths: first corner at
// the origin, second on the +x axis, third in the upper half plane.
struct UnfoldedTriangle {
  Vec2 a, b, c;
  double area() const { return 0.5 * (b - a).cross(c - a); }
  Vec2 corner(int i) const { return i == 0 ? a : (i == 1 ? b : c); }
};

// Journal entry for one edge flip; enough state to restore it bit-exactly.
struct FlipRecord {
  int edge;
  double length;
  std::array<int, 6> he;                 // h0, h1, n0, p0, n1, p1
  std::array<std::array<int, 3>, 6> he_state;  // origin, next, face per he
  int f0, f1, fh0, fh1;
  int va, vb, va_out, vb_out;
};

// Triangulation of the parameter domain whose per-edge lengths are
// induced-metric lengths. Halfedges are stored in twin pairs (twin = h^1,
// edge id = h>>1); boundary halfedges carry face -1 and chain along the
// boundary loop. Mutation (build/insert/flip) is single-writer; frozen
// meshes may be queried concurrently.
class IntrinsicMesh {
 public:
  struct Vertex {
    ParamPoint p;
    int out = -1;  // outgoing halfedge; for boundary vertices the one whose
                   // twin is a boundary halfedge
    bool is_site = false;
  };

  static IntrinsicMesh build_uniform(const Surface& surface, int nu, int nv);

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int halfedge_count() const { return static_cast<int>(origin_.size()); }
  int edge_count() const { return halfedge_count() / 2; }
  int face_count() const { return static_cast<int>(face_he_.size()); }

  const Vertex& vertex(int v) const { return vertices_[v]; }
  ParamPoint param(int v) const { return vertices_[v].p; }
  bool is_site(int v) const { return vertices_[v].is_site; }

  int twin(int h) const { return h ^ 1; }
  int edge_of(int h) const { return h >> 1; }
  int halfedge_of_edge(int e) const { return e << 1; }
  int next(int h) const { return next_[h]; }
  int origin(int h) const { return origin_[h]; }
  int target(int h) const { return origin_[h ^ 1]; }
  int face(int h) const { return face_[h]; }
  int prev(int h) const;  // walks the face loop (boundary loops included)
  double edge_length(int e) const { return edge_length_[e]; }
  int face_halfedge(int f) const { return face_he_[f]; }
  std::array<int, 3> face_halfedges(int f) const;
  std::array<int, 3> face_vertices(int f) const;
  std::array<double, 3> face_lengths(int f) const;
  bool is_boundary_edge(int e) const {
    return face_[e << 1] < 0 || face_[(e << 1) | 1] < 0;
  }
  // Endpoint vertex ids of an edge, (origin, target) of its even halfedge.
  std::array<int, 2> edge_vertices(int e) const {
    return {origin_[e << 1], origin_[(e << 1) | 1]};
  }

  // Next outgoing halfedge around origin(h); cycles through the full star.
  int rot(int h) const { return next_[h ^ 1]; }
  // Inverse rotation.
  int rot_back(int h) const { return prev(h) ^ 1; }
  // Halfedge a->b, or -1 if the vertices are not adjacent.
  int find_halfedge(int a, int b) const;

  // Interior corner angle at origin(h) inside face(h), by law of cosines.
  double corner_angle(int h) const;
  UnfoldedTriangle unfold(int f) const;

  // Face corner parameters lifted to a consistent chart around the first
  // corner (periodic seams unwrapped).
  std::array<ParamPoint, 3> face_param_chart(int f, const Surface& surface) const;

  // Inserts p as a site vertex: 1->3 face split, 2->4 edge split, or the
  // existing vertex id when p coincides with one.
  int insert_site(const ParamPoint& p, const Surface& surface);

  // Replaces one stored edge length (testing/calibration); callers are
  // responsible for re-validating triangle inequalities.
  void override_edge_length(int e, double length) { edge_length_[e] = length; }

  bool can_flip(int e) const;
  // Intrinsic flip; the new length is the diagonal of the unfolded quad.
  // Returns the edge id (stable across the flip). Throws on boundary edges
  // or non-convex unfolded quads.
  int flip_edge(int e);
  int flip_edge(int e, std::vector<FlipRecord>* journal);
  void rollback(std::vector<FlipRecord>& journal);

  // Locates p: fills face (containing face id), on_edge (edge id if p lies
  // on it, else -1) and on_vertex (vertex id if coincident, else -1).
  void locate(const ParamPoint& p, const Surface& surface, int& face_id,
              int& on_edge, int& on_vertex) const;

  // Strict triangle inequality slack of face f: min over the three
  // (a+b-c) combinations.
  double face_inequality_slack(int f) const;
  // Checks twin/next consistency and strict triangle inequalities
  // everywhere; throws on violation.
  void validate() const;

  // OBJ of the parameter-domain triangulation (z = 0) plus a JSON sidecar
  // with per-edge endpoint ids and lengths.
  void dump_obj(const std::string& obj_path, const std::string& json_path) const;

 private:
  int new_vertex(const ParamPoint& p, bool site);
  int new_edge(int va, int vb, double length);  // returns even halfedge
  void set_face_loop(int f, int h0, int h1, int h2);
  int split_face(int f, const ParamPoint& p, const Surface& surface);
  int split_edge(int e, const ParamPoint& p, const Surface& surface);
  void check_new_faces(const std::vector<int>& faces) const;
  void rebuild_locator() const;
  void bucket_of(double u, double v, int& bu, int& bv) const;

  std::vector<Vertex> vertices_;
  std::vector<int> origin_, next_, face_;
  std::vector<double> edge_length_;
  std::vector<int> face_he_;

  // Point-location buckets (face ids by parameter bounding box).
  mutable std::vector<std::vector<int>> buckets_;
  mutable int buckets_nu_ = 0, buckets_nv_ = 0;
  mutable int locator_faces_ = -1;
  mutable bool locator_dirty_ = true;
  double dom_u0_ = 0, dom_u1_ = 1, dom_v0_ = 0, dom_v1_ = 1;
  bool u_periodic_ = false, v_periodic_ = false;
};

}  // namespace surfoffset
