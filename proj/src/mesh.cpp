#include "surfoffset/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"

namespace surfoffset {

namespace {
constexpr double kVertexSnapRel = 1e-12;  // of domain extent
constexpr double kEdgeSnapBary = 1e-10;
}  // namespace

int IntrinsicMesh::prev(int h) const {
  int x = h, guard = 0;
  while (next_[x] != h) {
    x = next_[x];
    if (++guard > halfedge_count()) throw InternalError("broken face loop");
  }
  return x;
}

std::array<int, 3> IntrinsicMesh::face_halfedges(int f) const {
  int h0 = face_he_[f];
  int h1 = next_[h0];
  int h2 = next_[h1];
  return {h0, h1, h2};
}

std::array<int, 3> IntrinsicMesh::face_vertices(int f) const {
  auto h = face_halfedges(f);
  return {origin_[h[0]], origin_[h[1]], origin_[h[2]]};
}

std::array<double, 3> IntrinsicMesh::face_lengths(int f) const {
  auto h = face_halfedges(f);
  return {edge_length_[h[0] >> 1], edge_length_[h[1] >> 1],
          edge_length_[h[2] >> 1]};
}

int IntrinsicMesh::find_halfedge(int a, int b) const {
  int start = vertices_[a].out;
  if (start < 0) return -1;
  int h = start, guard = 0;
  do {
    if (target(h) == b) return h;
    h = rot(h);
    if (++guard > halfedge_count()) throw InternalError("broken vertex star");
  } while (h != start);
  return -1;
}

double IntrinsicMesh::corner_angle(int h) const {
  double a = edge_length_[h >> 1];
  int p = next_[next_[h]];  // prev within a triangle face
  double b = edge_length_[p >> 1];
  double c = edge_length_[next_[h] >> 1];
  double cosv = (a * a + b * b - c * c) / (2.0 * a * b);
  return std::acos(std::clamp(cosv, -1.0, 1.0));
}

UnfoldedTriangle IntrinsicMesh::unfold(int f) const {
  auto l = face_lengths(f);
  UnfoldedTriangle t;
  t.a = {0.0, 0.0};
  t.b = {l[0], 0.0};
  double cx = (l[0] * l[0] + l[2] * l[2] - l[1] * l[1]) / (2.0 * l[0]);
  double cy2 = l[2] * l[2] - cx * cx;
  t.c = {cx, std::sqrt(std::max(0.0, cy2))};
  return t;
}

std::array<ParamPoint, 3> IntrinsicMesh::face_param_chart(
    int f, const Surface& surface) const {
  auto v = face_vertices(f);
  ParamPoint p0 = vertices_[v[0]].p;
  return {p0, surface.unwrap_near(vertices_[v[1]].p, p0),
          surface.unwrap_near(vertices_[v[2]].p, p0)};
}

double IntrinsicMesh::face_inequality_slack(int f) const {
  auto l = face_lengths(f);
  return std::min({l[0] + l[1] - l[2], l[1] + l[2] - l[0], l[2] + l[0] - l[1]});
}

int IntrinsicMesh::new_vertex(const ParamPoint& p, bool site) {
  vertices_.push_back({p, -1, site});
  return static_cast<int>(vertices_.size()) - 1;
}

int IntrinsicMesh::new_edge(int va, int vb, double length) {
  int h = halfedge_count();
  origin_.push_back(va);
  origin_.push_back(vb);
  next_.push_back(-1);
  next_.push_back(-1);
  face_.push_back(-1);
  face_.push_back(-1);
  edge_length_.push_back(length);
  return h;
}

void IntrinsicMesh::set_face_loop(int f, int h0, int h1, int h2) {
  next_[h0] = h1;
  next_[h1] = h2;
  next_[h2] = h0;
  face_[h0] = face_[h1] = face_[h2] = f;
  face_he_[f] = h0;
}

IntrinsicMesh IntrinsicMesh::build_uniform(const Surface& surface, int nu, int nv) {
  if (nu < 2 || nv < 2) throw ConfigError("build_uniform requires nu, nv >= 2");
  if (surface.u_periodic() && nu < 4)
    throw ConfigError("u-periodic surfaces need nu >= 4");
  if (surface.v_periodic() && nv < 4)
    throw ConfigError("v-periodic surfaces need nv >= 4");

  IntrinsicMesh m;
  m.dom_u0_ = surface.u0();
  m.dom_u1_ = surface.u1();
  m.dom_v0_ = surface.v0();
  m.dom_v1_ = surface.v1();
  m.u_periodic_ = surface.u_periodic();
  m.v_periodic_ = surface.v_periodic();

  int NU = surface.u_periodic() ? nu - 1 : nu;
  int NV = surface.v_periodic() ? nv - 1 : nv;
  double du = surface.u_extent() / (nu - 1);
  double dv = surface.v_extent() / (nv - 1);
  m.vertices_.reserve(static_cast<size_t>(NU) * NV);
  for (int j = 0; j < NV; ++j)
    for (int i = 0; i < NU; ++i)
      m.vertices_.push_back({{surface.u0() + i * du, surface.v0() + j * dv}, -1, false});

  auto vid = [&](int i, int j) { return j * NU + i; };

  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<size_t>(nu - 1) * (nv - 1) * 2);
  for (int j = 0; j + 1 < nv; ++j) {
    for (int i = 0; i + 1 < nu; ++i) {
      int i2 = (i + 1) % NU, j2 = (j + 1) % NV;
      int v00 = vid(i, j), v10 = vid(i2, j), v11 = vid(i2, j2), v01 = vid(i, j2);
      tris.push_back({v00, v10, v11});
      tris.push_back({v00, v11, v01});
    }
  }

  // Halfedge construction: even halfedge of each edge takes the direction
  // first encountered; the facing triangle claims the opposite one.
  std::map<std::pair<int, int>, int> edge_of_pair;
  m.face_he_.assign(tris.size(), -1);
  std::vector<std::array<int, 3>> tri_he(tris.size());
  for (size_t t = 0; t < tris.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      int a = tris[t][k], b = tris[t][(k + 1) % 3];
      auto key = std::minmax(a, b);
      auto it = edge_of_pair.find(key);
      int h;
      if (it == edge_of_pair.end()) {
        h = m.new_edge(a, b, 0.0);
        edge_of_pair.emplace(key, h >> 1);
      } else {
        int e = it->second;
        h = (e << 1) | 1;
        if (m.origin_[e << 1] != b || m.face_[h] >= 0)
          throw InternalError("inconsistent grid orientation");
      }
      tri_he[t][k] = h;
    }
  }
  for (size_t t = 0; t < tris.size(); ++t)
    m.set_face_loop(static_cast<int>(t), tri_he[t][0], tri_he[t][1], tri_he[t][2]);

  // Chain boundary halfedges along boundary loops.
  std::map<int, int> boundary_out;  // origin vertex -> boundary halfedge
  for (int h = 0; h < m.halfedge_count(); ++h) {
    if (m.face_[h] < 0) {
      m.origin_[h] = m.origin_[h ^ 1] >= 0 ? m.target(h ^ 1) : -1;
      boundary_out[m.origin_[h]] = h;
    }
  }
  for (int h = 0; h < m.halfedge_count(); ++h) {
    if (m.face_[h] < 0) {
      auto it = boundary_out.find(m.target(h));
      if (it == boundary_out.end()) throw InternalError("open boundary chain");
      m.next_[h] = it->second;
    }
  }

  for (int h = 0; h < m.halfedge_count(); ++h)
    if (m.face_[h] >= 0 && m.vertices_[m.origin_[h]].out < 0)
      m.vertices_[m.origin_[h]].out = h;

  std::vector<std::pair<int, int>> edge_ends(m.edge_count());
  for (int e = 0; e < m.edge_count(); ++e)
    edge_ends[e] = {m.origin_[e << 1], m.origin_[(e << 1) | 1]};
  parallel_for(m.edge_count(), 0, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t e = lo; e < hi; ++e) {
      auto [a, b] = edge_ends[e];
      m.edge_length_[e] = surface.edge_length(m.vertices_[a].p, m.vertices_[b].p);
    }
  });

  for (int f = 0; f < m.face_count(); ++f) {
    if (!(m.face_inequality_slack(f) > 0))
      throw RefinementError(
          "triangle inequality violated at build; use a denser grid");
  }
  return m;
}

// ---------------------------------------------------------------------------
// Point location

void IntrinsicMesh::bucket_of(double u, double v, int& bu, int& bv) const {
  double fu = (u - dom_u0_) / (dom_u1_ - dom_u0_) * buckets_nu_;
  double fv = (v - dom_v0_) / (dom_v1_ - dom_v0_) * buckets_nv_;
  bu = std::clamp(static_cast<int>(std::floor(fu)), 0, buckets_nu_ - 1);
  bv = std::clamp(static_cast<int>(std::floor(fv)), 0, buckets_nv_ - 1);
}

void IntrinsicMesh::rebuild_locator() const {
  int nb = std::clamp(static_cast<int>(std::sqrt(face_count() / 2.0)), 8, 256);
  buckets_nu_ = buckets_nv_ = nb;
  buckets_.assign(static_cast<size_t>(nb) * nb, {});
  double du = (dom_u1_ - dom_u0_) / nb, dv = (dom_v1_ - dom_v0_) / nb;
  for (int f = 0; f < face_count(); ++f) {
    auto vs = face_vertices(f);
    ParamPoint p0 = vertices_[vs[0]].p;
    double ulo = p0.u, uhi = p0.u, vlo = p0.v, vhi = p0.v;
    for (int k = 1; k < 3; ++k) {
      ParamPoint q = vertices_[vs[k]].p;
      if (u_periodic_) {
        double span = dom_u1_ - dom_u0_;
        q.u += span * std::round((p0.u - q.u) / span);
      }
      if (v_periodic_) {
        double span = dom_v1_ - dom_v0_;
        q.v += span * std::round((p0.v - q.v) / span);
      }
      ulo = std::min(ulo, q.u); uhi = std::max(uhi, q.u);
      vlo = std::min(vlo, q.v); vhi = std::max(vhi, q.v);
    }
    int iu0 = static_cast<int>(std::floor((ulo - dom_u0_) / du)) - 1;
    int iu1 = static_cast<int>(std::floor((uhi - dom_u0_) / du)) + 1;
    int iv0 = static_cast<int>(std::floor((vlo - dom_v0_) / dv)) - 1;
    int iv1 = static_cast<int>(std::floor((vhi - dom_v0_) / dv)) + 1;
    for (int iv = iv0; iv <= iv1; ++iv) {
      int jv = v_periodic_ ? ((iv % nb) + nb) % nb : std::clamp(iv, 0, nb - 1);
      for (int iu = iu0; iu <= iu1; ++iu) {
        int ju = u_periodic_ ? ((iu % nb) + nb) % nb : std::clamp(iu, 0, nb - 1);
        auto& bucket = buckets_[static_cast<size_t>(jv) * nb + ju];
        if (bucket.empty() || bucket.back() != f) bucket.push_back(f);
      }
    }
  }
  locator_faces_ = face_count();
  locator_dirty_ = false;
}

void IntrinsicMesh::locate(const ParamPoint& p_in, const Surface& surface,
                           int& face_id, int& on_edge, int& on_vertex) const {
  if (locator_dirty_ || locator_faces_ != face_count()) rebuild_locator();
  ParamPoint p = surface.wrap(p_in);
  if (!surface.in_domain(p)) throw DomainError("insert point outside domain");
  face_id = on_edge = on_vertex = -1;

  double snap = kVertexSnapRel * std::max(surface.u_extent(), surface.v_extent());
  auto try_face = [&](int f) -> bool {
    auto vs = face_vertices(f);
    std::array<ParamPoint, 3> q;
    for (int k = 0; k < 3; ++k)
      q[k] = surface.unwrap_near(vertices_[vs[k]].p, p);
    for (int k = 0; k < 3; ++k) {
      if (param_distance(p, q[k]) < snap) {
        face_id = f;
        on_vertex = vs[k];
        return true;
      }
    }
    Vec2 e1{q[1].u - q[0].u, q[1].v - q[0].v};
    Vec2 e2{q[2].u - q[0].u, q[2].v - q[0].v};
    Vec2 dp{p.u - q[0].u, p.v - q[0].v};
    double det = e1.cross(e2);
    if (det == 0.0) return false;
    double l1 = dp.cross(e2) / det;
    double l2 = e1.cross(dp) / det;
    double l0 = 1.0 - l1 - l2;
    double tol = 1e-12;
    if (l0 < -tol || l1 < -tol || l2 < -tol) return false;
    face_id = f;
    std::array<double, 3> lam = {l0, l1, l2};
    auto hs = face_halfedges(f);
    for (int k = 0; k < 3; ++k) {
      if (lam[k] <= kEdgeSnapBary) {
        on_edge = hs[(k + 1) % 3] >> 1;  // edge opposite corner k
        return true;
      }
    }
    return true;
  };

  int bu, bv;
  bucket_of(p.u, p.v, bu, bv);
  for (int ring = 0; ring <= std::max(buckets_nu_, buckets_nv_); ++ring) {
    for (int dv = -ring; dv <= ring; ++dv) {
      for (int du = -ring; du <= ring; ++du) {
        if (std::max(std::abs(du), std::abs(dv)) != ring) continue;
        int ju = u_periodic_ ? (((bu + du) % buckets_nu_) + buckets_nu_) % buckets_nu_
                             : bu + du;
        int jv = v_periodic_ ? (((bv + dv) % buckets_nv_) + buckets_nv_) % buckets_nv_
                             : bv + dv;
        if (ju < 0 || ju >= buckets_nu_ || jv < 0 || jv >= buckets_nv_) continue;
        for (int f : buckets_[static_cast<size_t>(jv) * buckets_nu_ + ju])
          if (try_face(f)) return;
      }
    }
  }
  // Last resort: exhaustive scan (covers degenerate bucket boundary cases).
  for (int f = 0; f < face_count(); ++f)
    if (try_face(f)) return;
  throw DomainError("point not contained in any mesh face");
}

// ---------------------------------------------------------------------------
// Site insertion

void IntrinsicMesh::check_new_faces(const std::vector<int>& faces) const {
  for (int f : faces) {
    if (!(face_inequality_slack(f) > 0))
      throw RefinementError(
          "triangle inequality violated after insertion; use a denser grid");
  }
}

int IntrinsicMesh::split_face(int f, const ParamPoint& p, const Surface& surface) {
  auto hs = face_halfedges(f);
  auto vs = face_vertices(f);
  ParamPoint pw = surface.wrap(p);
  double la = surface.edge_length(vertices_[vs[0]].p, pw);
  double lb = surface.edge_length(vertices_[vs[1]].p, pw);
  double lc = surface.edge_length(vertices_[vs[2]].p, pw);
  auto l = face_lengths(f);
  auto ok = [](double x, double y, double z) {
    return x + y > z && y + z > x && z + x > y;
  };
  if (!ok(l[0], lb, la) || !ok(l[1], lc, lb) || !ok(l[2], la, lc))
    throw RefinementError(
        "triangle inequality violated by site insertion; use a denser grid");

  int w = new_vertex(pw, true);
  int h_aw = new_edge(vs[0], w, la);
  int h_bw = new_edge(vs[1], w, lb);
  int h_cw = new_edge(vs[2], w, lc);
  // Faces (a,b,w), (b,c,w), (c,a,w); the first reuses f.
  set_face_loop(f, hs[0], h_bw, h_aw ^ 1);
  face_he_.push_back(-1);
  set_face_loop(face_count() - 1, hs[1], h_cw, h_bw ^ 1);
  face_he_.push_back(-1);
  set_face_loop(face_count() - 1, hs[2], h_aw, h_cw ^ 1);
  vertices_[w].out = h_aw ^ 1;
  check_new_faces({f, face_count() - 2, face_count() - 1});
  locator_dirty_ = true;
  return w;
}

int IntrinsicMesh::split_edge(int e, const ParamPoint& p_raw, const Surface& surface) {
  int h0 = e << 1, h1 = h0 | 1;
  int a = origin_[h0], b = origin_[h1];
  int f0 = face_[h0], f1 = face_[h1];

  // Snap onto the parameter segment so sub-edge lengths stay additive.
  ParamPoint pa = vertices_[a].p;
  ParamPoint pb = surface.unwrap_near(vertices_[b].p, pa);
  ParamPoint pq = surface.unwrap_near(surface.wrap(p_raw), pa);
  Vec2 ab{pb.u - pa.u, pb.v - pa.v};
  Vec2 ap{pq.u - pa.u, pq.v - pa.v};
  double t = std::clamp(ab.dot(ap) / ab.dot(ab), 1e-9, 1.0 - 1e-9);
  ParamPoint pw = surface.wrap({pa.u + t * ab.x, pa.v + t * ab.y});

  double law = surface.edge_length(vertices_[a].p, pw);
  double lwb = surface.edge_length(pw, vertices_[b].p);
  int c = -1, d = -1;
  int n0 = -1, p0 = -1, n1 = -1, p1 = -1;
  double lwc = 0.0, lwd = 0.0;
  auto ok = [](double x, double y, double z) {
    return x + y > z && y + z > x && z + x > y;
  };
  if (f0 >= 0) {
    n0 = next_[h0];
    p0 = next_[n0];
    c = origin_[p0];
    lwc = surface.edge_length(pw, vertices_[c].p);
    if (!ok(law, lwc, edge_length_[p0 >> 1]) ||
        !ok(lwb, edge_length_[n0 >> 1], lwc))
      throw RefinementError("edge split violates triangle inequality");
  }
  if (f1 >= 0) {
    n1 = next_[h1];
    p1 = next_[n1];
    d = origin_[p1];
    lwd = surface.edge_length(pw, vertices_[d].p);
    if (!ok(law, edge_length_[n1 >> 1], lwd) ||
        !ok(lwb, lwd, edge_length_[p1 >> 1]))
      throw RefinementError("edge split violates triangle inequality");
  }

  int w = new_vertex(pw, true);
  int boundary_prev0 = f0 < 0 ? prev(h0) : -1;
  int boundary_prev1 = f1 < 0 ? prev(h1) : -1;

  // Edge e becomes (a,w).
  edge_length_[e] = law;
  origin_[h1] = w;
  int h_wb = new_edge(w, b, lwb);
  if (vertices_[b].out == h1) vertices_[b].out = h_wb ^ 1;
  vertices_[w].out = h1;

  std::vector<int> touched;
  if (f0 >= 0) {
    int h_wc = new_edge(w, c, lwc);
    set_face_loop(f0, h0, h_wc, p0);  // (a, w, c)
    face_he_.push_back(-1);
    set_face_loop(face_count() - 1, h_wb, n0, h_wc ^ 1);  // (w, b, c)
    touched.push_back(f0);
    touched.push_back(face_count() - 1);
  } else {
    // Boundary loop on the h0 side: a -> w -> b.
    face_[h_wb] = -1;
    next_[h_wb] = next_[h0];
    next_[h0] = h_wb;
  }
  if (f1 >= 0) {
    int h_wd = new_edge(w, d, lwd);
    set_face_loop(f1, h1, n1, h_wd ^ 1);  // (w, a, d)
    face_he_.push_back(-1);
    set_face_loop(face_count() - 1, h_wb ^ 1, h_wd, p1);  // (b, w, d)
    touched.push_back(f1);
    touched.push_back(face_count() - 1);
  } else {
    // Boundary loop on the h1 side: b -> w -> a.
    face_[h_wb ^ 1] = -1;
    next_[h_wb ^ 1] = h1;
    next_[boundary_prev1] = h_wb ^ 1;
  }
  (void)boundary_prev0;
  check_new_faces(touched);
  locator_dirty_ = true;
  return w;
}

int IntrinsicMesh::insert_site(const ParamPoint& p, const Surface& surface) {
  int f, e, v;
  locate(p, surface, f, e, v);
  if (v >= 0) {
    vertices_[v].is_site = true;
    return v;
  }
  if (e >= 0) return split_edge(e, p, surface);
  return split_face(f, p, surface);
}

// ---------------------------------------------------------------------------
// Intrinsic edge flip

namespace {

struct QuadUnfold {
  Vec2 c, d;
  double lab;
  bool convex;
  double new_length;
};

QuadUnfold unfold_quad(double lab, double lca, double lbc, double lad, double ldb) {
  QuadUnfold q;
  q.lab = lab;
  double cx = (lab * lab + lca * lca - lbc * lbc) / (2.0 * lab);
  double cy = std::sqrt(std::max(0.0, lca * lca - cx * cx));
  double dx = (lab * lab + lad * lad - ldb * ldb) / (2.0 * lab);
  double dy = -std::sqrt(std::max(0.0, lad * lad - dx * dx));
  q.c = {cx, cy};
  q.d = {dx, dy};
  q.new_length = distance(q.c, q.d);
  double denom = cy - dy;
  if (denom <= 0.0) {
    q.convex = false;
    return q;
  }
  double tcross = cy / denom;
  double xcross = cx + tcross * (dx - cx);
  q.convex = xcross > 0.0 && xcross < lab;
  return q;
}

}  // namespace

bool IntrinsicMesh::can_flip(int e) const {
  int h0 = e << 1, h1 = h0 | 1;
  if (face_[h0] < 0 || face_[h1] < 0) return false;
  int n0 = next_[h0], p0 = next_[n0];
  int n1 = next_[h1], p1 = next_[n1];
  int c = origin_[p0], d = origin_[p1];
  if (c == d) return false;
  QuadUnfold q = unfold_quad(edge_length_[e], edge_length_[p0 >> 1],
                             edge_length_[n0 >> 1], edge_length_[n1 >> 1],
                             edge_length_[p1 >> 1]);
  return q.convex;
}

int IntrinsicMesh::flip_edge(int e) { return flip_edge(e, nullptr); }

int IntrinsicMesh::flip_edge(int e, std::vector<FlipRecord>* journal) {
  int h0 = e << 1, h1 = h0 | 1;
  int f0 = face_[h0], f1 = face_[h1];
  if (f0 < 0 || f1 < 0) throw ConfigError("cannot flip a boundary edge");
  int a = origin_[h0], b = origin_[h1];
  int n0 = next_[h0], p0 = next_[n0];
  int n1 = next_[h1], p1 = next_[n1];
  int c = origin_[p0], d = origin_[p1];
  if (c == d) throw NumericError("flip would create a degenerate edge");

  QuadUnfold q = unfold_quad(edge_length_[e], edge_length_[p0 >> 1],
                             edge_length_[n0 >> 1], edge_length_[n1 >> 1],
                             edge_length_[p1 >> 1]);
  if (!q.convex) throw NumericError("flip refused: unfolded quad not convex");

  if (journal) {
    FlipRecord r;
    r.edge = e;
    r.length = edge_length_[e];
    r.he = {h0, h1, n0, p0, n1, p1};
    for (int i = 0; i < 6; ++i)
      r.he_state[i] = {origin_[r.he[i]], next_[r.he[i]], face_[r.he[i]]};
    r.f0 = f0; r.f1 = f1;
    r.fh0 = face_he_[f0]; r.fh1 = face_he_[f1];
    r.va = a; r.vb = b;
    r.va_out = vertices_[a].out; r.vb_out = vertices_[b].out;
    journal->push_back(r);
  }

  // New faces: f0 = (d, c, a) and f1 = (c, d, b); edge e becomes (d, c).
  origin_[h0] = d;
  origin_[h1] = c;
  set_face_loop(f0, h0, p0, n1);
  set_face_loop(f1, h1, p1, n0);
  edge_length_[e] = q.new_length;
  if (vertices_[a].out == h0) vertices_[a].out = n1;
  if (vertices_[b].out == h1) vertices_[b].out = n0;
  locator_dirty_ = true;
  return e;
}

void IntrinsicMesh::rollback(std::vector<FlipRecord>& journal) {
  for (auto it = journal.rbegin(); it != journal.rend(); ++it) {
    const FlipRecord& r = *it;
    for (int i = 0; i < 6; ++i) {
      origin_[r.he[i]] = r.he_state[i][0];
      next_[r.he[i]] = r.he_state[i][1];
      face_[r.he[i]] = r.he_state[i][2];
    }
    face_he_[r.f0] = r.fh0;
    face_he_[r.f1] = r.fh1;
    vertices_[r.va].out = r.va_out;
    vertices_[r.vb].out = r.vb_out;
    edge_length_[r.edge] = r.length;
  }
  journal.clear();
  locator_dirty_ = true;
}

// ---------------------------------------------------------------------------

void IntrinsicMesh::validate() const {
  for (int f = 0; f < face_count(); ++f) {
    auto hs = face_halfedges(f);
    if (next_[hs[2]] != hs[0]) throw InternalError("face loop not a triangle");
    for (int h : hs)
      if (face_[h] != f) throw InternalError("halfedge face mismatch");
    if (!(face_inequality_slack(f) > 0))
      throw NumericError("triangle inequality violated at face " + std::to_string(f));
  }
  for (int h = 0; h < halfedge_count(); ++h) {
    if (origin_[h] < 0 || origin_[h] >= vertex_count())
      throw InternalError("halfedge with invalid origin");
    if (next_[h] < 0) throw InternalError("halfedge with invalid next");
    if (origin_[next_[h]] != target(h))
      throw InternalError("face loop breaks vertex chain");
  }
  std::vector<int> out_degree(vertex_count(), 0);
  for (int h = 0; h < halfedge_count(); ++h) out_degree[origin_[h]]++;
  for (int v = 0; v < vertex_count(); ++v) {
    int start = vertices_[v].out;
    if (start < 0) throw InternalError("vertex without outgoing halfedge");
    if (origin_[start] != v) throw InternalError("vertex anchor mismatch");
    int h = start, count = 0;
    do {
      ++count;
      h = rot(h);
      if (count > out_degree[v]) throw InternalError("vertex star not a cycle");
    } while (h != start);
    if (count != out_degree[v]) throw InternalError("vertex star misses halfedges");
  }
}

void IntrinsicMesh::dump_obj(const std::string& obj_path,
                             const std::string& json_path) const {
  std::ofstream obj(obj_path);
  if (!obj) throw ConfigError("cannot write " + obj_path);
  obj.precision(17);
  for (const auto& v : vertices_) obj << "v " << v.p.u << ' ' << v.p.v << " 0\n";
  for (int f = 0; f < face_count(); ++f) {
    auto vs = face_vertices(f);
    obj << "f " << vs[0] + 1 << ' ' << vs[1] + 1 << ' ' << vs[2] + 1 << '\n';
  }
  nlohmann::json j;
  nlohmann::json edges = nlohmann::json::array();
  for (int e = 0; e < edge_count(); ++e)
    edges.push_back({origin_[e << 1], origin_[(e << 1) | 1], edge_length_[e]});
  j["edges"] = std::move(edges);
  std::ofstream js(json_path);
  if (!js) throw ConfigError("cannot write " + json_path);
  js << j.dump();
}

}  // namespace surfoffset
