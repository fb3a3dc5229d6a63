#include "surfoffset/offset.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace surfoffset {

LevelSegment face_level_segment(const std::array<double, 3>& dist,
                                const UnfoldedTriangle& tri, double d) {
  LevelSegment seg;
  std::array<double, 3> s;
  for (int k = 0; k < 3; ++k) {
    double dk = dist[k];
    if (!std::isfinite(dk)) throw ConfigError("non-finite face distance");
    if (dk == d) dk += 1e-12 * d;  // simulation of simplicity
    s[k] = dk - d;
  }
  std::array<Vec2, 3> corners = {tri.a, tri.b, tri.c};
  std::array<Vec3, 3> unit = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  int found = 0;
  for (int k = 0; k < 3 && found < 2; ++k) {
    int j = (k + 1) % 3;
    if (s[k] * s[j] < 0.0) {
      double t = s[k] / (s[k] - s[j]);
      seg.pts[found] = corners[k] + (corners[j] - corners[k]) * t;
      seg.bary[found] = unit[k] + (unit[j] - unit[k]) * t;
      seg.local_edge[found] = k;
      seg.t[found] = t;
      ++found;
    }
  }
  seg.valid = found == 2;
  return seg;
}

namespace {

// Crossings are deduplicated by quantized canonical parameter position:
// a crossing on a shared edge interpolates the same Lipschitz field from
// both sides, so the two computed positions agree far below the quantum.
struct CrossingTable {
  std::unordered_map<unsigned long long, int> map;
  std::vector<ParamPoint> uv;
  double quantum = 1e-9;
  long long mod_u = 0, mod_v = 0;  // quanta per period; 0 = not periodic
  const Surface* surface = nullptr;

  void init(const Surface& s) {
    surface = &s;
    quantum = 1e-9 * std::max(s.u_extent(), s.v_extent());
    if (s.u_periodic()) mod_u = std::llround(s.u_extent() / quantum);
    if (s.v_periodic()) mod_v = std::llround(s.v_extent() / quantum);
  }

  unsigned long long key(long long qu, long long qv) const {
    if (mod_u) qu = ((qu % mod_u) + mod_u) % mod_u;
    if (mod_v) qv = ((qv % mod_v) + mod_v) % mod_v;
    return (static_cast<unsigned long long>(qu) << 21) * 0x9E3779B97F4A7C15ULL ^
           static_cast<unsigned long long>(qv);
  }

  int lookup_or_add(const ParamPoint& p_raw) {
    ParamPoint p = surface->wrap(p_raw);
    long long qu = std::llround((p.u - surface->u0()) / quantum);
    long long qv = std::llround((p.v - surface->v0()) / quantum);
    for (long long du = -1; du <= 1; ++du) {
      for (long long dv = -1; dv <= 1; ++dv) {
        auto it = map.find(key(qu + du, qv + dv));
        if (it != map.end()) {
          int id = it->second;
          if (param_distance(surface->unwrap_near(uv[id], p), p) <= 4.0 * quantum)
            return id;
        }
      }
    }
    int id = static_cast<int>(uv.size());
    uv.push_back(p);
    map[key(qu, qv)] = id;
    return id;
  }
};

struct SegmentLink {
  int a = -1, b = -1;  // crossing ids
  int label = -1;
};

void lift_polyline(OffsetPolyline& poly, const Surface& surface) {
  double tol = 1e-4 * surface.model_diameter();
  poly.xyz.clear();
  if (poly.uv.empty()) return;
  int n = static_cast<int>(poly.uv.size());
  int segs = poly.closed ? n : n - 1;

  std::function<void(const ParamPoint&, const ParamPoint&, const SurfacePoint&,
                     const SurfacePoint&, int)>
      subdivide = [&](const ParamPoint& a, const ParamPoint& b,
                      const SurfacePoint& xa, const SurfacePoint& xb, int depth) {
        ParamPoint mid{0.5 * (a.u + b.u), 0.5 * (a.v + b.v)};
        SurfacePoint xm = surface.evaluate(surface.wrap(mid));
        SurfacePoint chord_mid = (xa + xb) * 0.5;
        if (depth >= 10 || distance(xm, chord_mid) < tol) {
          poly.xyz.push_back(xb);
          return;
        }
        subdivide(a, mid, xa, xm, depth + 1);
        subdivide(mid, b, xm, xb, depth + 1);
      };

  SurfacePoint first = surface.evaluate(poly.uv[0]);
  poly.xyz.push_back(first);
  SurfacePoint xa = first;
  for (int i = 0; i < segs; ++i) {
    ParamPoint a = poly.uv[i];
    ParamPoint b = surface.unwrap_near(poly.uv[(i + 1) % n], a);
    SurfacePoint xb = (i + 1 == n) ? first : surface.evaluate(poly.uv[(i + 1) % n]);
    subdivide(a, b, xa, xb, 0);
    xa = xb;
  }
}

}  // namespace

OffsetResult extract_offset(const LabeledMesh& labeled, double d,
                            const Surface& surface, int threads) {
  if (!(d > 0)) throw ConfigError("offset distance must be positive");
  if (labeled.cutoff > 0 && d >= labeled.cutoff)
    throw ConfigError("offset distance must stay below the field cutoff");

  OffsetResult result;
  result.offset_distance = d;
  int nf = static_cast<int>(labeled.faces.size());

  std::vector<LevelSegment> segments(nf);
  parallel_for(nf, threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      const auto& face = labeled.faces[i];
      std::array<double, 3> dist = {labeled.vertices[face.v[0]].distance,
                                    labeled.vertices[face.v[1]].distance,
                                    labeled.vertices[face.v[2]].distance};
      UnfoldedTriangle tri{face.corner2d[0], face.corner2d[1], face.corner2d[2]};
      segments[i] = face_level_segment(dist, tri, d);
    }
  });

  CrossingTable table;
  table.init(surface);
  std::vector<SegmentLink> links;
  for (int i = 0; i < nf; ++i) {
    if (!segments[i].valid) continue;
    const auto& face = labeled.faces[i];
    const auto& seg = segments[i];
    SegmentLink link;
    for (int e = 0; e < 2; ++e) {
      int k = seg.local_edge[e];
      int va = face.v[k], vb = face.v[(k + 1) % 3];
      ParamPoint pa = labeled.vertices[va].p;
      ParamPoint pb = surface.unwrap_near(labeled.vertices[vb].p, pa);
      ParamPoint p{pa.u + seg.t[e] * (pb.u - pa.u),
                   pa.v + seg.t[e] * (pb.v - pa.v)};
      (e == 0 ? link.a : link.b) = table.lookup_or_add(p);
    }
    if (link.a == link.b) continue;  // degenerate sliver segment
    link.label = face.label;
    links.push_back(link);
  }

  // Crossing adjacency.
  int nc = static_cast<int>(table.uv.size());
  std::vector<std::vector<int>> incident(nc);
  for (int li = 0; li < static_cast<int>(links.size()); ++li) {
    incident[links[li].a].push_back(li);
    incident[links[li].b].push_back(li);
  }

  struct Chain {
    std::vector<ParamPoint> uv;
    std::vector<int> site;  // per segment
    bool closed = false;
    bool dead = false;
  };
  std::vector<Chain> chains;

  std::vector<char> used(links.size(), 0);
  auto walk = [&](int start_crossing, int start_link) {
    Chain chain;
    int cur = start_crossing;
    int li = start_link;
    chain.uv.push_back(table.uv[cur]);
    while (li != -1) {
      used[li] = 1;
      int nxt = links[li].a == cur ? links[li].b : links[li].a;
      chain.site.push_back(links[li].label);
      chain.uv.push_back(table.uv[nxt]);
      cur = nxt;
      li = -1;
      if (cur == start_crossing) break;
      for (int cand : incident[cur]) {
        if (!used[cand]) {
          li = cand;
          break;
        }
      }
    }
    if (cur == start_crossing && chain.uv.size() >= 4) {
      chain.closed = true;
      chain.uv.pop_back();
    }
    return chain;
  };

  // Open chains first, from degree-1 crossings in id order, then cycles.
  for (int c = 0; c < nc; ++c) {
    if (incident[c].size() != 1) continue;
    int li = incident[c][0];
    if (used[li]) continue;
    chains.push_back(walk(c, li));
  }
  for (int li = 0; li < static_cast<int>(links.size()); ++li) {
    if (used[li]) continue;
    chains.push_back(walk(links[li].a, li));
  }

  // Near-degenerate Voronoi cuts can leave hairline gaps: merge open chain
  // endpoints that coincide within a loose tolerance, then close chains
  // whose own ends meet.
  double merge_tol = 1e-6 * std::max(surface.u_extent(), surface.v_extent());
  auto endpoints_close = [&](const ParamPoint& a, const ParamPoint& b) {
    return param_distance(surface.unwrap_near(b, a), a) <= merge_tol;
  };
  auto reverse_chain = [](Chain& c) {
    std::reverse(c.uv.begin(), c.uv.end());
    std::reverse(c.site.begin(), c.site.end());
  };
  bool merged = true;
  while (merged) {
    merged = false;
    for (size_t i = 0; i < chains.size() && !merged; ++i) {
      if (chains[i].dead || chains[i].closed) continue;
      for (size_t j = 0; j < chains.size() && !merged; ++j) {
        if (i == j || chains[j].dead || chains[j].closed) continue;
        Chain& a = chains[i];
        Chain& b = chains[j];
        if (endpoints_close(a.uv.back(), b.uv.back())) reverse_chain(b);
        if (endpoints_close(a.uv.back(), b.uv.front())) {
          a.uv.insert(a.uv.end(), b.uv.begin() + 1, b.uv.end());
          a.site.insert(a.site.end(), b.site.begin(), b.site.end());
          b.dead = true;
          merged = true;
        } else if (endpoints_close(a.uv.front(), b.uv.front())) {
          reverse_chain(b);
          b.uv.insert(b.uv.end(), a.uv.begin() + 1, a.uv.end());
          b.site.insert(b.site.end(), a.site.begin(), a.site.end());
          a.uv = std::move(b.uv);
          a.site = std::move(b.site);
          b.dead = true;
          merged = true;
        }
      }
    }
  }
  for (auto& chain : chains) {
    if (chain.dead || chain.closed) continue;
    if (chain.uv.size() >= 4 && endpoints_close(chain.uv.front(), chain.uv.back())) {
      chain.uv.pop_back();
      chain.site.pop_back();
      chain.closed = true;
    }
  }

  for (auto& chain : chains) {
    if (chain.dead || chain.uv.size() < 2) continue;
    OffsetPolyline poly;
    poly.uv = std::move(chain.uv);
    poly.closed = chain.closed;
    poly.site = std::move(chain.site);
    if (!poly.closed) {
      poly.site.push_back(poly.site.empty() ? -1 : poly.site.back());
      result.clipped_endpoints += 2;
    }
    result.polylines.push_back(std::move(poly));
  }

  if (result.clipped_endpoints > 0)
    log_line(LogLevel::Warn, "offset_clipped_at_boundary",
             {{"endpoints", std::to_string(result.clipped_endpoints)}});

  for (auto& poly : result.polylines) lift_polyline(poly, surface);
  return result;
}

std::vector<SurfacePoint> brute_force_offset(IntrinsicMesh& mesh,
                                             const std::vector<int>& site_vertices,
                                             double d, const Surface& surface) {
  int n = mesh.vertex_count();
  int ns = static_cast<int>(site_vertices.size());
  std::vector<std::vector<double>> per_site(ns);
  parallel_for(ns, 0, [&](std::int64_t lo, std::int64_t hi) {
    IntrinsicMesh local = mesh;
    for (std::int64_t s = lo; s < hi; ++s) {
      DijkstraTree tree = dijkstra_tree(local, site_vertices[s]);
      auto& out = per_site[s];
      out.assign(n, std::numeric_limits<double>::infinity());
      for (int v = 0; v < n; ++v) {
        if (!tree.reached(v)) continue;
        if (v == site_vertices[s]) {
          out[v] = 0.0;
          continue;
        }
        out[v] = flip_shorten(local, tree.path_to(v)).length;
      }
    }
  });
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  for (int s = 0; s < ns; ++s)
    for (int v = 0; v < n; ++v) dist[v] = std::min(dist[v], per_site[s][v]);

  std::vector<SurfacePoint> cloud;
  for (int f = 0; f < mesh.face_count(); ++f) {
    auto vs = mesh.face_vertices(f);
    std::array<double, 3> fd = {dist[vs[0]], dist[vs[1]], dist[vs[2]]};
    if (!std::isfinite(fd[0]) || !std::isfinite(fd[1]) || !std::isfinite(fd[2]))
      continue;
    LevelSegment seg = face_level_segment(fd, mesh.unfold(f), d);
    if (!seg.valid) continue;
    auto chart = mesh.face_param_chart(f, surface);
    for (int e = 0; e < 2; ++e) {
      const Vec3& b = seg.bary[e];
      ParamPoint p{b.x * chart[0].u + b.y * chart[1].u + b.z * chart[2].u,
                   b.x * chart[0].v + b.y * chart[1].v + b.z * chart[2].v};
      cloud.push_back(surface.evaluate(surface.wrap(p)));
    }
  }
  return cloud;
}

}  // namespace surfoffset
