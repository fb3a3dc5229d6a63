#include "surfoffset/geodesic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <queue>
#include <random>
#include <unordered_map>

namespace surfoffset {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kAngleSlack = 1e-10;
constexpr int kMaxLabelsPerVertex = 48;

struct HeapEntry {
  double dist;
  int vertex;
  bool operator>(const HeapEntry& o) const {
    if (dist != o.dist) return dist > o.dist;
    return vertex > o.vertex;
  }
};

}  // namespace

VertexPath DijkstraTree::path_to(int t) const {
  if (!reached(t)) throw ConnectivityError("target not reached by Dijkstra tree");
  VertexPath p;
  p.total_length = dist[t];
  for (int v = t; v != -1; v = pred[v]) p.vertices.push_back(v);
  std::reverse(p.vertices.begin(), p.vertices.end());
  return p;
}

DijkstraTree dijkstra_tree(const IntrinsicMesh& mesh, int s, double cutoff) {
  DijkstraTree tree;
  tree.source = s;
  int n = mesh.vertex_count();
  tree.dist.assign(n, std::numeric_limits<double>::infinity());
  tree.pred.assign(n, -1);
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> heap;
  std::vector<char> settled(n, 0);
  tree.dist[s] = 0.0;
  heap.push({0.0, s});
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (settled[v]) continue;
    settled[v] = 1;
    int start = mesh.vertex(v).out;
    int h = start;
    do {
      int w = mesh.target(h);
      double nd = d + mesh.edge_length(mesh.edge_of(h));
      if (nd <= cutoff && nd < tree.dist[w]) {
        tree.dist[w] = nd;
        tree.pred[w] = v;
        heap.push({nd, w});
      }
      h = mesh.rot(h);
    } while (h != start);
  }
  return tree;
}

VertexPath dijkstra_path(const IntrinsicMesh& mesh, int s, int t) {
  if (s == t) throw ConfigError("dijkstra_path requires distinct endpoints");
  int n = mesh.vertex_count();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<int> pred(n, -1);
  std::vector<char> settled(n, 0);
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> heap;
  dist[s] = 0.0;
  heap.push({0.0, s});
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (settled[v]) continue;
    settled[v] = 1;
    if (v == t) break;
    int start = mesh.vertex(v).out;
    int h = start;
    do {
      int w = mesh.target(h);
      double nd = d + mesh.edge_length(mesh.edge_of(h));
      if (nd < dist[w]) {
        dist[w] = nd;
        pred[w] = v;
        heap.push({nd, w});
      }
      h = mesh.rot(h);
    } while (h != start);
  }
  if (!settled[t]) throw ConnectivityError("vertices are not connected");
  VertexPath p;
  p.total_length = dist[t];
  for (int v = t; v != -1; v = pred[v]) p.vertices.push_back(v);
  std::reverse(p.vertices.begin(), p.vertices.end());
  return p;
}

// ---------------------------------------------------------------------------
// FlipOut-style path straightening

namespace {

// Doubly linked path over node slots; removed nodes keep their slot.
struct PathList {
  std::vector<int> vert, prv, nxt;
  std::vector<char> alive;
  int head = 0, tail = 0;

  explicit PathList(const std::vector<int>& vs) {
    int n = static_cast<int>(vs.size());
    vert = vs;
    prv.resize(n);
    nxt.resize(n);
    alive.assign(n, 1);
    for (int i = 0; i < n; ++i) {
      prv[i] = i - 1;
      nxt[i] = i + 1 < n ? i + 1 : -1;
    }
    head = 0;
    tail = n - 1;
  }
  bool interior(int i) const {
    return alive[i] && prv[i] >= 0 && nxt[i] >= 0;
  }
  void remove(int i) {
    alive[i] = 0;
    if (prv[i] >= 0) nxt[prv[i]] = nxt[i];
    if (nxt[i] >= 0) prv[nxt[i]] = prv[i];
  }
  int insert_after(int node, int vertex) {
    int id = static_cast<int>(vert.size());
    vert.push_back(vertex);
    prv.push_back(node);
    nxt.push_back(nxt[node]);
    alive.push_back(1);
    if (nxt[node] >= 0) prv[nxt[node]] = id;
    nxt[node] = id;
    if (tail == node) tail = id;
    return id;
  }
  std::vector<int> to_vector() const {
    std::vector<int> out;
    for (int i = head; i != -1; i = nxt[i]) out.push_back(vert[i]);
    return out;
  }
};

std::uint64_t edge_key(int a, int b) {
  auto [lo, hi] = std::minmax(a, b);
  return (static_cast<std::uint64_t>(lo) << 32) | static_cast<std::uint32_t>(hi);
}

// Wedge walk at vertex b from halfedge h_start (b->a) to h_end (b->c).
// side 0 steps with rot_back (angle of face(h)); side 1 steps with rot
// (angle of face(twin(h))). Returns the total wedge angle, or +inf across
// a boundary, and collects the interior spokes.
double wedge_angle(const IntrinsicMesh& mesh, int h_start, int h_end, int side,
                   std::vector<int>* spokes) {
  if (spokes) spokes->clear();
  double angle = 0.0;
  int h = h_start;
  int guard = 0;
  while (true) {
    int hn;
    if (side == 0) {
      if (mesh.face(h) < 0) return std::numeric_limits<double>::infinity();
      angle += mesh.corner_angle(h);
      hn = mesh.rot_back(h);
    } else {
      if (mesh.face(mesh.twin(h)) < 0)
        return std::numeric_limits<double>::infinity();
      hn = mesh.rot(h);
      angle += mesh.corner_angle(hn);
    }
    h = hn;
    if (h == h_end) break;
    if (spokes) spokes->push_back(h);
    if (++guard > mesh.halfedge_count())
      throw InternalError("wedge walk failed to terminate");
  }
  return angle;
}

// Flips every flippable spoke between h_start and h_end (path edges are
// never flipped). Non-convex configurations legitimately survive: the
// remaining spoke targets are the reflex vertices the shortened path must
// bend around, returned in wedge order.
std::vector<int> straighten_wedge(
    IntrinsicMesh& mesh, int h_start, int h_end, int side,
    const std::unordered_map<std::uint64_t, int>& path_edges,
    std::vector<FlipRecord>& journal) {
  std::vector<int> spokes;
  while (true) {
    wedge_angle(mesh, h_start, h_end, side, &spokes);
    bool flipped = false;
    for (int h : spokes) {
      int e = mesh.edge_of(h);
      auto it = path_edges.find(edge_key(mesh.origin(h), mesh.target(h)));
      if (it != path_edges.end() && it->second > 0) continue;
      if (!mesh.can_flip(e)) continue;
      mesh.flip_edge(e, &journal);
      flipped = true;
      break;
    }
    if (!flipped) break;
  }
  std::vector<int> arc;
  arc.reserve(spokes.size());
  for (int h : spokes) arc.push_back(mesh.target(h));
  return arc;
}

}  // namespace

GeodesicResult flip_shorten(IntrinsicMesh& mesh, const VertexPath& init,
                            int max_iterations) {
  GeodesicResult result;
  if (init.vertices.size() < 2) {
    result.length = 0.0;
    result.path_vertices = init.vertices;
    if (!init.vertices.empty()) {
      int v = init.vertices[0];
      int h = mesh.vertex(v).out;
      while (mesh.face(h) < 0) h = mesh.rot(h);
      auto vs = mesh.face_vertices(mesh.face(h));
      Vec3 bary;
      bary.x = vs[0] == v ? 1.0 : 0.0;
      bary.y = vs[1] == v ? 1.0 : 0.0;
      bary.z = vs[2] == v ? 1.0 : 0.0;
      result.path.push_back({mesh.face(h), bary});
    }
    return result;
  }

  // Drop zero-length repeats up front.
  std::vector<int> clean;
  clean.reserve(init.vertices.size());
  for (int v : init.vertices)
    if (clean.empty() || clean.back() != v) clean.push_back(v);
  if (clean.size() < 2) clean = {init.vertices.front(), init.vertices.back()};

  PathList path(clean);
  std::unordered_map<std::uint64_t, int> path_edges;
  for (size_t i = 0; i + 1 < clean.size(); ++i)
    path_edges[edge_key(clean[i], clean[i + 1])]++;

  std::vector<FlipRecord> journal;
  std::deque<int> queue;
  std::vector<char> queued(path.vert.size(), 0);
  for (int i = path.nxt[path.head]; i != -1 && i != path.tail; i = path.nxt[i]) {
    queue.push_back(i);
    queued[i] = 1;
  }
  auto enqueue = [&](int node) {
    if (node >= 0 && path.alive[node] && path.interior(node) && !queued[node]) {
      queue.push_back(node);
      queued[node] = 1;
    }
  };

  int iterations = 0;
  bool all_converged = true;
  while (!queue.empty() && iterations < max_iterations) {
    int nb = queue.front();
    queue.pop_front();
    queued[nb] = 0;
    if (!path.interior(nb)) continue;
    int na = path.prv[nb], nc = path.nxt[nb];
    int a = path.vert[na], b = path.vert[nb], c = path.vert[nc];

    if (a == c) {
      // Zigzag a-b-a: drop both middle nodes. The edge from c onward keeps
      // the same endpoints (a == c), so only the a-b legs leave the path.
      ++iterations;
      int after = path.nxt[nc];
      path_edges[edge_key(a, b)] -= 2;
      path.remove(nb);
      path.remove(nc);
      if (after != -1) enqueue(after);
      enqueue(na);
      continue;
    }

    int h_ba = mesh.find_halfedge(b, a);
    int h_bc = mesh.find_halfedge(b, c);
    if (h_ba < 0 || h_bc < 0)
      throw InternalError("path vertices not adjacent in mesh");
    double left = wedge_angle(mesh, h_ba, h_bc, 0, nullptr);
    double right = wedge_angle(mesh, h_ba, h_bc, 1, nullptr);
    int side = left <= right ? 0 : 1;
    double angle = std::min(left, right);
    if (angle >= kPi - kAngleSlack) continue;

    ++iterations;
    std::vector<int> arc =
        straighten_wedge(mesh, h_ba, h_bc, side, path_edges, journal);
    path_edges[edge_key(a, b)]--;
    path_edges[edge_key(b, c)]--;
    path.remove(nb);
    int prev_node = na, prev_vert = a;
    for (int w : arc) {
      prev_node = path.insert_after(prev_node, w);
      queued.push_back(0);
      path_edges[edge_key(prev_vert, w)]++;
      prev_vert = w;
    }
    path_edges[edge_key(prev_vert, c)]++;
    enqueue(na);
    enqueue(nc);
    for (int node = path.nxt[na]; node != nc && node != -1; node = path.nxt[node])
      enqueue(node);
  }
  if (!queue.empty()) all_converged = false;

  std::vector<int> final_path = path.to_vector();
  double length = 0.0;
  for (size_t i = 0; i + 1 < final_path.size(); ++i) {
    int h = mesh.find_halfedge(final_path[i], final_path[i + 1]);
    if (h < 0) throw InternalError("final path edge missing");
    length += mesh.edge_length(mesh.edge_of(h));
  }

  mesh.rollback(journal);

  result.length = length;
  result.iterations = iterations;
  result.converged = all_converged;
  result.path_vertices = final_path;
  result.path.reserve(final_path.size());
  for (int v : final_path) {
    int h = mesh.vertex(v).out;
    int guard = 0;
    while (mesh.face(h) < 0) {
      h = mesh.rot(h);
      if (++guard > mesh.halfedge_count())
        throw InternalError("vertex has no incident face");
    }
    int f = mesh.face(h);
    auto vs = mesh.face_vertices(f);
    Vec3 bary;
    bary.x = vs[0] == v ? 1.0 : 0.0;
    bary.y = vs[1] == v ? 1.0 : 0.0;
    bary.z = vs[2] == v ? 1.0 : 0.0;
    result.path.push_back({f, bary});
  }
  return result;
}

GeodesicResult geodesic_query(IntrinsicMesh& mesh, int s, int t) {
  return flip_shorten(mesh, dijkstra_path(mesh, s, t));
}

double geodesic_distance(IntrinsicMesh& mesh, int s, int t) {
  if (s == t) return 0.0;
  return geodesic_query(mesh, s, t).length;
}

// ---------------------------------------------------------------------------
// Multi-source nearest-site distance field

namespace {

struct FieldLabel {
  int site;
  double gdist;
  int pred;
  bool settled;
};

struct FieldHeapEntry {
  double dist;
  int site;
  int vertex;
  int pred;
  bool operator>(const FieldHeapEntry& o) const {
    if (dist != o.dist) return dist > o.dist;
    if (site != o.site) return site > o.site;
    return vertex > o.vertex;
  }
};

VertexPath stress_init_path(const IntrinsicMesh& mesh, int from, int to,
                            const StressInit& stress) {
  std::mt19937_64 rng(stress.seed ^
                      (static_cast<std::uint64_t>(from) * 0x9E3779B97F4A7C15ULL) ^
                      (static_cast<std::uint64_t>(to) << 17));
  std::uniform_int_distribution<int> pick(0, mesh.vertex_count() - 1);
  std::vector<int> anchors;
  anchors.push_back(from);
  for (int i = 0; i < stress.waypoints; ++i) {
    int w = pick(rng);
    if (w != anchors.back() && w != to) anchors.push_back(w);
  }
  anchors.push_back(to);
  VertexPath full;
  for (size_t i = 0; i + 1 < anchors.size(); ++i) {
    VertexPath leg = dijkstra_path(mesh, anchors[i], anchors[i + 1]);
    if (i == 0) {
      full = leg;
    } else {
      full.vertices.insert(full.vertices.end(), leg.vertices.begin() + 1,
                           leg.vertices.end());
      full.total_length += leg.total_length;
    }
  }
  return full;
}

}  // namespace

double recommended_cutoff(double offset_distance, double mean_site_spacing) {
  return 1.5 * offset_distance + 2.0 * mean_site_spacing;
}

DistanceField build_distance_field(IntrinsicMesh& mesh,
                                   const std::vector<int>& site_vertices,
                                   const FieldOptions& options) {
  if (site_vertices.empty()) throw ConfigError("distance field needs sites");
  if (!(options.cutoff > 0)) throw ConfigError("distance field cutoff must be positive");
  int n = mesh.vertex_count();
  int n_sites = static_cast<int>(site_vertices.size());
  double alpha = options.alpha;
  // Relative pruning alone starves labels next to the sites (best -> 0),
  // so competitors within a couple of edge lengths always survive.
  double mean_edge = 0.0;
  for (int e = 0; e < mesh.edge_count(); ++e) mean_edge += mesh.edge_length(e);
  mean_edge /= std::max(1, mesh.edge_count());
  double floor_slack = 2.0 * mean_edge;
  auto prune_bound = [&](double best) { return (1.0 + alpha) * best + floor_slack; };

  std::vector<std::vector<FieldLabel>> labels(n);
  std::vector<double> settled_best(n, std::numeric_limits<double>::infinity());
  std::priority_queue<FieldHeapEntry, std::vector<FieldHeapEntry>, std::greater<>>
      heap;
  for (int i = 0; i < n_sites; ++i)
    heap.push({0.0, i, site_vertices[i], -1});

  auto find_label = [&](int v, int site) -> FieldLabel* {
    for (auto& l : labels[v])
      if (l.site == site) return &l;
    return nullptr;
  };

  while (!heap.empty()) {
    FieldHeapEntry e = heap.top();
    heap.pop();
    if (e.dist > options.cutoff) break;
    FieldLabel* lab = find_label(e.vertex, e.site);
    if (lab && lab->settled) continue;
    if (lab && e.dist > lab->gdist) continue;  // stale entry
    if (settled_best[e.vertex] < std::numeric_limits<double>::infinity() &&
        e.dist > prune_bound(settled_best[e.vertex]))
      continue;
    if (!lab) {
      if (static_cast<int>(labels[e.vertex].size()) >= kMaxLabelsPerVertex) {
        FieldLabel* worst = nullptr;
        for (auto& l : labels[e.vertex])
          if (!l.settled && (!worst || l.gdist > worst->gdist)) worst = &l;
        if (!worst || worst->gdist <= e.dist) continue;
        *worst = {e.site, e.dist, e.pred, true};
      } else {
        labels[e.vertex].push_back({e.site, e.dist, e.pred, true});
      }
    } else {
      lab->gdist = e.dist;
      lab->pred = e.pred;
      lab->settled = true;
    }
    if (settled_best[e.vertex] == std::numeric_limits<double>::infinity())
      settled_best[e.vertex] = e.dist;

    int start = mesh.vertex(e.vertex).out;
    int h = start;
    do {
      int w = mesh.target(h);
      double nd = e.dist + mesh.edge_length(mesh.edge_of(h));
      if (nd <= options.cutoff &&
          !(settled_best[w] < std::numeric_limits<double>::infinity() &&
            nd > prune_bound(settled_best[w]))) {
        FieldLabel* wl = find_label(w, e.site);
        if (!wl) {
          if (static_cast<int>(labels[w].size()) < kMaxLabelsPerVertex) {
            labels[w].push_back({e.site, nd, e.vertex, false});
            heap.push({nd, e.site, w, e.vertex});
          } else {
            // Full: evict the worst tentative so the kept set stays the
            // nearest sites rather than the first-arrived ones.
            FieldLabel* worst = nullptr;
            for (auto& l : labels[w])
              if (!l.settled && (!worst || l.gdist > worst->gdist)) worst = &l;
            if (worst && nd < worst->gdist) {
              *worst = {e.site, nd, e.vertex, false};
              heap.push({nd, e.site, w, e.vertex});
            }
          }
        } else if (!wl->settled && nd < wl->gdist) {
          wl->gdist = nd;
          wl->pred = e.vertex;
          heap.push({nd, e.site, w, e.vertex});
        }
      }
      h = mesh.rot(h);
    } while (h != start);
  }

  DistanceField field;
  field.cutoff = options.cutoff;
  field.site_vertices = site_vertices;
  field.nearest_site.assign(n, -1);
  field.distance.assign(n, std::numeric_limits<double>::infinity());
  field.candidates.assign(n, {});

  // Exact refinement of every settled candidate via flip shortening of its
  // predecessor-chain initialization path.
  std::vector<int> site_of_vertex(n, -1);
  for (int i = 0; i < n_sites; ++i) site_of_vertex[site_vertices[i]] = i;

  std::atomic<int> non_converged{0};
  int threads = resolve_threads(options.threads);
  parallel_for(n, threads, [&](std::int64_t lo, std::int64_t hi) {
    IntrinsicMesh local = mesh;
    for (std::int64_t v = lo; v < hi; ++v) {
      auto& cands = field.candidates[v];
      for (const FieldLabel& lab : labels[v]) {
        if (!lab.settled) continue;
        FieldCandidate c;
        c.site = lab.site;
        c.graph_distance = lab.gdist;
        if (lab.gdist == 0.0) {
          c.distance = 0.0;
          cands.push_back(c);
          continue;
        }
        VertexPath init;
        if (options.stress.waypoints > 0) {
          init = stress_init_path(local, static_cast<int>(v),
                                  site_vertices[lab.site], options.stress);
        } else {
          int cur = static_cast<int>(v);
          const FieldLabel* l = &lab;
          init.vertices.push_back(cur);
          while (l->pred != -1) {
            cur = l->pred;
            init.vertices.push_back(cur);
            const FieldLabel* pl = nullptr;
            for (const auto& cl : labels[cur])
              if (cl.site == lab.site && cl.settled) { pl = &cl; break; }
            if (!pl) throw InternalError("broken predecessor chain");
            l = pl;
          }
          init.total_length = lab.gdist;
        }
        GeodesicResult r = flip_shorten(local, init);
        if (!r.converged) non_converged.fetch_add(1);
        c.distance = r.length;
        cands.push_back(c);
      }
      std::sort(cands.begin(), cands.end(),
                [](const FieldCandidate& a, const FieldCandidate& b) {
                  return a.site < b.site;
                });
      for (const auto& c : cands) {
        if (c.distance < field.distance[v] ||
            (c.distance == field.distance[v] && c.site < field.nearest_site[v])) {
          field.distance[v] = c.distance;
          field.nearest_site[v] = c.site;
        }
      }
    }
  });
  field.non_converged = non_converged.load();
  if (field.non_converged > 0)
    log_line(LogLevel::Warn, "non_converged_paths",
             {{"count", std::to_string(field.non_converged)}});

  bool any = false;
  for (int v = 0; v < n && !any; ++v) any = field.finalized(v);
  if (!any)
    throw ConfigError("distance field cutoff too small: no vertex finalized");
  return field;
}

DistanceField build_distance_field(IntrinsicMesh& mesh, const SiteSet& sites,
                                   const Surface& surface,
                                   const FieldOptions& options) {
  std::vector<int> vids;
  vids.reserve(sites.sites.size());
  for (const auto& s : sites.sites) vids.push_back(mesh.insert_site(s.p, surface));
  return build_distance_field(mesh, vids, options);
}

std::vector<int> detect_field_inconsistency(const IntrinsicMesh& mesh,
                                            const DistanceField& field) {
  std::vector<int> violating;
  for (int e = 0; e < mesh.edge_count(); ++e) {
    auto [a, b] = mesh.edge_vertices(e);
    if (!field.finalized(a) || !field.finalized(b)) continue;
    double lij = mesh.edge_length(e);
    if (std::abs(field.distance[a] - field.distance[b]) > lij * (1.0 + 1e-6))
      violating.push_back(e);
  }
  return violating;
}

}  // namespace surfoffset
