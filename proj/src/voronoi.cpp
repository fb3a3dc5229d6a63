#include "surfoffset/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace surfoffset {

namespace {

double poly_area(const std::vector<Vec2>& pts) {
  double a = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    const Vec2& p = pts[i];
    const Vec2& q = pts[(i + 1) % pts.size()];
    a += p.cross(q);
  }
  return 0.5 * a;
}

// Keeps the g(bary) <= 0 side; boundary vertices are kept exactly.
void clip_poly(std::vector<Vec2>& pts, std::vector<Vec3>& bary,
               const std::array<double, 3>& g) {
  size_t n = pts.size();
  if (n == 0) return;
  std::vector<Vec2> out_pts;
  std::vector<Vec3> out_bary;
  out_pts.reserve(n + 2);
  out_bary.reserve(n + 2);
  auto value = [&](const Vec3& b) { return b.x * g[0] + b.y * g[1] + b.z * g[2]; };
  for (size_t i = 0; i < n; ++i) {
    size_t j = (i + 1) % n;
    double si = value(bary[i]), sj = value(bary[j]);
    bool ini = si <= 0.0, inj = sj <= 0.0;
    if (ini) {
      out_pts.push_back(pts[i]);
      out_bary.push_back(bary[i]);
    }
    if (ini != inj && si != sj) {
      double t = si / (si - sj);
      out_pts.push_back(pts[i] + (pts[j] - pts[i]) * t);
      out_bary.push_back(bary[i] + (bary[j] - bary[i]) * t);
    }
  }
  pts = std::move(out_pts);
  bary = std::move(out_bary);
}

void drop_duplicate_vertices(CutPoly& poly, double tol) {
  std::vector<Vec2> pts;
  std::vector<Vec3> bary;
  size_t n = poly.pts.size();
  for (size_t i = 0; i < n; ++i) {
    size_t j = (i + 1) % n;
    if (distance(poly.pts[i], poly.pts[j]) > tol) {
      pts.push_back(poly.pts[i]);
      bary.push_back(poly.bary[i]);
    }
  }
  poly.pts = std::move(pts);
  poly.bary = std::move(bary);
}

}  // namespace

std::vector<CutPoly> cut_triangle(const UnfoldedTriangle& tri,
                                  std::vector<CutCandidate> candidates) {
  if (candidates.empty())
    throw ConfigError("cut_triangle needs at least one candidate");
  for (const auto& c : candidates)
    for (double d : c.corner_dist)
      if (!std::isfinite(d)) throw ConfigError("non-finite candidate distance");
  std::sort(candidates.begin(), candidates.end(),
            [](const CutCandidate& a, const CutCandidate& b) {
              return a.site < b.site;
            });
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [](const CutCandidate& a, const CutCandidate& b) {
                                 return a.site == b.site;
                               }),
                   candidates.end());

  double diam = std::max({distance(tri.a, tri.b), distance(tri.b, tri.c),
                          distance(tri.c, tri.a)});
  double dist_scale = diam;
  for (const auto& c : candidates)
    for (double d : c.corner_dist) dist_scale = std::max(dist_scale, std::abs(d));

  std::vector<CutPoly> cells;
  std::vector<const CutCandidate*> cell_cand;
  for (const auto& cand : candidates) {
    CutPoly poly;
    poly.site = cand.site;
    poly.pts = {tri.a, tri.b, tri.c};
    poly.bary = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    bool degenerate_tie = false;
    for (size_t i = 0; i < cells.size() && !poly.pts.empty(); ++i) {
      const CutCandidate& other = *cell_cand[i];
      std::array<double, 3> g;  // new minus existing; keep g <= 0 for new
      double gmax = 0.0;
      for (int k = 0; k < 3; ++k) {
        g[k] = cand.corner_dist[k] - other.corner_dist[k];
        gmax = std::max(gmax, std::abs(g[k]));
      }
      if (gmax <= 1e-14 * dist_scale) {
        // Identical planes over the whole triangle: smaller site id wins,
        // and cells are processed in ascending site order.
        degenerate_tie = true;
        break;
      }
      clip_poly(poly.pts, poly.bary, g);
      std::array<double, 3> ng = {-g[0], -g[1], -g[2]};
      clip_poly(cells[i].pts, cells[i].bary, ng);
    }
    if (degenerate_tie) continue;
    if (!poly.pts.empty()) {
      cells.push_back(std::move(poly));
      cell_cand.push_back(&cand);
    }
  }

  std::vector<CutPoly> out;
  double sliver = 1e-12 * diam;
  for (auto& cell : cells) {
    drop_duplicate_vertices(cell, 1e-15 * diam);
    if (cell.pts.size() < 3) continue;
    if (poly_area(cell.pts) <= sliver * diam) continue;
    out.push_back(std::move(cell));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct FaceCandidates {
  std::vector<CutCandidate> list;
};

// Union of the three corners' candidate sites; corners where a site has no
// refined value get a Lipschitz upper-bound fill from the corners that do.
FaceCandidates gather_candidates(const IntrinsicMesh& mesh,
                                 const DistanceField& field, int f) {
  auto vs = mesh.face_vertices(f);
  auto hs = mesh.face_halfedges(f);
  // Pairwise corner distances within the face.
  double l01 = mesh.edge_length(mesh.edge_of(hs[0]));
  double l12 = mesh.edge_length(mesh.edge_of(hs[1]));
  double l20 = mesh.edge_length(mesh.edge_of(hs[2]));
  std::array<std::array<double, 3>, 3> corner_gap = {
      {{0.0, l01, l20}, {l01, 0.0, l12}, {l20, l12, 0.0}}};

  std::vector<int> sites;
  for (int k = 0; k < 3; ++k)
    for (const auto& c : field.candidates[vs[k]]) sites.push_back(c.site);
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());

  FaceCandidates out;
  out.list.reserve(sites.size());
  for (int site : sites) {
    CutCandidate cand;
    cand.site = site;
    std::array<bool, 3> have = {false, false, false};
    for (int k = 0; k < 3; ++k) {
      for (const auto& c : field.candidates[vs[k]]) {
        if (c.site == site) {
          cand.corner_dist[k] = c.distance;
          have[k] = true;
          break;
        }
      }
    }
    for (int k = 0; k < 3; ++k) {
      if (have[k]) continue;
      double best = std::numeric_limits<double>::infinity();
      for (int m = 0; m < 3; ++m)
        if (have[m]) best = std::min(best, cand.corner_dist[m] + corner_gap[k][m]);
      cand.corner_dist[k] = best;
    }
    out.list.push_back(cand);
  }
  return out;
}

struct VertexMerger {
  LabeledMesh* out;
  std::unordered_map<long long, int> corner_map;                 // vertex id
  std::unordered_map<unsigned long long, int> edge_map;          // (edge, qt)
  std::unordered_map<unsigned long long, int> interior_map;      // per face

  // t quantized to 36 bits leaves room for the edge id in the upper bits.
  static unsigned long long edge_hash(int e, long long q) {
    return (static_cast<unsigned long long>(static_cast<unsigned>(e)) << 37) |
           static_cast<unsigned long long>(q & ((1LL << 37) - 1));
  }

  int add(ParamPoint p, double dist, VertexKind kind) {
    out->vertices.push_back({p, dist, kind});
    return static_cast<int>(out->vertices.size()) - 1;
  }
};

}  // namespace

LabeledMesh compute_voronoi(const IntrinsicMesh& mesh, const DistanceField& field,
                            const SiteSet& sites, const Surface& surface,
                            int threads) {
  (void)sites;
  int nf = mesh.face_count();
  std::vector<std::vector<CutPoly>> face_polys(nf);
  std::vector<char> face_live(nf, 0);
  int skipped = 0;

  for (int f = 0; f < nf; ++f) {
    auto vs = mesh.face_vertices(f);
    bool all_final = field.finalized(vs[0]) && field.finalized(vs[1]) &&
                     field.finalized(vs[2]);
    bool has_site = mesh.is_site(vs[0]) || mesh.is_site(vs[1]) || mesh.is_site(vs[2]);
    if (!all_final) {
      if (has_site)
        throw InternalError(
            "unfinalized region touches a site face; increase the cutoff");
      ++skipped;
      continue;
    }
    face_live[f] = 1;
  }

  parallel_for(nf, threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t f = lo; f < hi; ++f) {
      if (!face_live[f]) continue;
      FaceCandidates cands = gather_candidates(mesh, field, static_cast<int>(f));
      UnfoldedTriangle tri = mesh.unfold(static_cast<int>(f));
      if (cands.list.size() == 1) {
        CutPoly whole;
        whole.site = cands.list[0].site;
        whole.pts = {tri.a, tri.b, tri.c};
        whole.bary = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        face_polys[f].push_back(std::move(whole));
      } else {
        face_polys[f] = cut_triangle(tri, cands.list);
      }
    }
  });

  LabeledMesh out;
  out.skipped_faces = skipped;
  out.cutoff = field.cutoff;
  VertexMerger merger{&out, {}, {}, {}};
  std::vector<int> orig_vertex(mesh.vertex_count(), -1);
  constexpr double kBaryCornerTol = 1.0 - 1e-9;
  constexpr double kBaryEdgeTol = 1e-9;
  constexpr long long kQuantum = 1LL << 36;

  for (int f = 0; f < nf; ++f) {
    if (!face_live[f]) continue;
    auto vs = mesh.face_vertices(f);
    auto hs = mesh.face_halfedges(f);
    auto chart = mesh.face_param_chart(f, surface);
    FaceCandidates cands = gather_candidates(mesh, field, f);
    UnfoldedTriangle tri = mesh.unfold(f);
    auto fl = mesh.face_lengths(f);
    double face_diam = std::max({fl[0], fl[1], fl[2]});
    merger.interior_map.clear();

    // Geodesic distance at a new vertex x: each candidate site is placed as
    // a virtual point source in the unfolded frame from its two corner
    // distances along the nearest edge (side resolved by the third corner),
    // and the minimum |x - source| wins. Exact wherever the triangle
    // unfolds the true geometry; far better than interpolating the planes.
    auto virtual_source_at = [&](const Vec2& x, const Vec3& b) {
      std::array<double, 3> lam = {b.x, b.y, b.z};
      int i = 0, j = 1, k = 2;
      for (int m = 0; m < 3; ++m) {
        if (lam[m] <= kBaryEdgeTol) {  // on edge opposite corner m
          i = (m + 1) % 3;
          j = (m + 2) % 3;
          k = m;
          break;
        }
      }
      Vec2 A = tri.corner(i), B = tri.corner(j), C = tri.corner(k);
      Vec2 ab = B - A;
      double L = ab.norm();
      Vec2 ex = ab * (1.0 / L);
      Vec2 ey{-ex.y, ex.x};
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : cands.list) {
        double di = c.corner_dist[i], dj = c.corner_dist[j], dk = c.corner_dist[k];
        double xs = (L * L + di * di - dj * dj) / (2.0 * L);
        double ys = std::sqrt(std::max(0.0, di * di - xs * xs));
        Vec2 rel = x - A;
        double px = rel.dot(ex), py = rel.dot(ey);
        double cx = (C - A).dot(ex), cy = (C - A).dot(ey);
        double err_pos = std::abs(std::hypot(cx - xs, cy - ys) - dk);
        double err_neg = std::abs(std::hypot(cx - xs, cy + ys) - dk);
        double sy = err_pos <= err_neg ? ys : -ys;
        best = std::min(best, std::hypot(px - xs, py - sy));
      }
      return best;
    };
    auto param_at = [&](const Vec3& b) {
      ParamPoint p{b.x * chart[0].u + b.y * chart[1].u + b.z * chart[2].u,
                   b.x * chart[0].v + b.y * chart[1].v + b.z * chart[2].v};
      return surface.wrap(p);
    };

    auto global_id = [&](const Vec2& pt, const Vec3& b) -> int {
      std::array<double, 3> lam = {b.x, b.y, b.z};
      // Corner?
      for (int k = 0; k < 3; ++k) {
        if (lam[k] >= kBaryCornerTol) {
          int mv = vs[k];
          if (orig_vertex[mv] < 0) {
            VertexKind kind =
                mesh.is_site(mv) ? VertexKind::site : VertexKind::original;
            orig_vertex[mv] =
                merger.add(mesh.param(mv), field.distance[mv], kind);
          }
          return orig_vertex[mv];
        }
      }
      // On a face edge?
      for (int k = 0; k < 3; ++k) {
        if (lam[k] <= kBaryEdgeTol) {
          int h = hs[(k + 1) % 3];  // edge opposite corner k
          int e = mesh.edge_of(h);
          int k1 = (k + 1) % 3, k2 = (k + 2) % 3;
          double denom = lam[k1] + lam[k2];
          double t = denom > 0 ? lam[k2] / denom : 0.0;
          auto [va, vb] = mesh.edge_vertices(e);
          double t_canon = vs[k1] == va ? t : 1.0 - t;
          long long q = std::llround(t_canon * kQuantum);
          for (long long probe : {q, q - 1, q + 1}) {
            auto it = merger.edge_map.find(VertexMerger::edge_hash(e, probe));
            if (it != merger.edge_map.end()) {
              double dv = virtual_source_at(pt, b);
              auto& rec = out.vertices[it->second];
              rec.distance = std::min(rec.distance, dv);
              return it->second;
            }
          }
          int id = merger.add(param_at(b), virtual_source_at(pt, b),
                              VertexKind::voronoi_vertex);
          merger.edge_map[VertexMerger::edge_hash(e, q)] = id;
          return id;
        }
      }
      // Interior point (bisector intersection); face-local dedupe at
      // 2^-30 of the face diameter.
      long long qx = std::llround(pt.x / face_diam * (1LL << 30));
      long long qy = std::llround(pt.y / face_diam * (1LL << 30));
      unsigned long long key = (static_cast<unsigned long long>(qx + 2) << 32) |
                               static_cast<unsigned long long>(qy + 2);
      auto it = merger.interior_map.find(key);
      if (it != merger.interior_map.end()) return it->second;
      int id = merger.add(param_at(b), virtual_source_at(pt, b),
                          VertexKind::voronoi_vertex);
      merger.interior_map[key] = id;
      return id;
    };

    for (const auto& poly : face_polys[f]) {
      int npts = static_cast<int>(poly.pts.size());
      std::vector<int> ids(npts);
      for (int i = 0; i < npts; ++i) ids[i] = global_id(poly.pts[i], poly.bary[i]);
      for (int i = 1; i + 1 < npts; ++i) {
        int a = ids[0], b = ids[i], c = ids[i + 1];
        if (a == b || b == c || c == a) continue;
        LabeledMesh::LFace lf;
        lf.v = {a, b, c};
        lf.label = poly.site;
        lf.parent_face = f;
        lf.corner2d = {poly.pts[0], poly.pts[i], poly.pts[i + 1]};
        out.faces.push_back(lf);
      }
    }
  }
  return out;
}

}  // namespace surfoffset
