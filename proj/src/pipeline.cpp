#include "surfoffset/pipeline.hpp"

#include <chrono>
#include <cmath>

namespace surfoffset {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

std::pair<int, int> auto_grid(const Surface& surface, int base) {
  double aspect = std::sqrt(surface.u_extent() / surface.v_extent());
  int nu = std::max(8, static_cast<int>(std::lround(base * aspect)));
  int nv = std::max(8, static_cast<int>(std::lround(base / aspect)));
  if (surface.u_periodic()) nu = std::max(nu, 4);
  if (surface.v_periodic()) nv = std::max(nv, 4);
  return {nu, nv};
}

SiteSet discretize_curves(const std::vector<SourceCurve>& curves, int n,
                          const Surface& surface) {
  if (curves.empty()) throw ConfigError("no source curves given");
  if (curves.size() == 1) return discretize(curves[0], n, surface);

  std::vector<double> lengths(curves.size());
  double total = 0.0;
  for (size_t i = 0; i < curves.size(); ++i) {
    lengths[i] = curve_induced_length(curves[i], surface);
    total += lengths[i];
  }
  SiteSet merged;
  merged.closed = false;
  merged.total_length = total;
  double arc_base = 0.0;
  for (size_t i = 0; i < curves.size(); ++i) {
    int ni = std::max(3, static_cast<int>(std::lround(n * lengths[i] / total)));
    ni = std::min(ni, curves[i].segment_count());
    SiteSet part = discretize(curves[i], ni, surface);
    for (const auto& s : part.sites)
      merged.sites.push_back({s.p, arc_base + s.arc_position});
    arc_base += lengths[i];
  }
  return merged;
}

PipelineResult run_offset_pipeline(const Surface& surface,
                                   const std::vector<SourceCurve>& curves,
                                   const RunOptions& options) {
  if (!(options.distance > 0)) throw ConfigError("offset distance must be positive");
  if (options.segments < 3) throw ConfigError("segments must be at least 3");
  int nu = options.grid_nu, nv = options.grid_nv;
  if (nu == 0 || nv == 0) {
    auto [au, av] = auto_grid(surface);
    if (nu == 0) nu = au;
    if (nv == 0) nv = av;
  }
  if (nu < 8 || nv < 8) throw ConfigError("grid must be at least 8x8");
  for (const auto& c : curves) c.validate(surface);

  PipelineResult result;
  auto t_total = std::chrono::steady_clock::now();

  auto t0 = std::chrono::steady_clock::now();
  result.mesh = IntrinsicMesh::build_uniform(surface, nu, nv);
  result.timings.build = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  result.sites = discretize_curves(curves, options.segments, surface);
  result.site_vids.reserve(result.sites.sites.size());
  for (const auto& s : result.sites.sites)
    result.site_vids.push_back(result.mesh.insert_site(s.p, surface));
  result.timings.insert = seconds_since(t0);

  double cutoff = options.cutoff > 0
                      ? options.cutoff
                      : recommended_cutoff(options.distance,
                                           result.sites.mean_spacing());
  if (cutoff <= options.distance)
    throw ConfigError("cutoff must exceed the offset distance");

  FieldOptions fopts;
  fopts.cutoff = cutoff;
  fopts.threads = options.threads;
  fopts.stress = options.stress;
  t0 = std::chrono::steady_clock::now();
  result.field = build_distance_field(result.mesh, result.site_vids, fopts);
  result.timings.field = seconds_since(t0);

  result.violating_edges = detect_field_inconsistency(result.mesh, result.field);
  if (!result.violating_edges.empty())
    log_line(LogLevel::Warn, "field_gradient_violation",
             {{"edges", std::to_string(result.violating_edges.size())}});

  t0 = std::chrono::steady_clock::now();
  result.labeled = compute_voronoi(result.mesh, result.field, result.sites,
                                   surface, options.threads);
  result.timings.voronoi = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  result.offset =
      extract_offset(result.labeled, options.distance, surface, options.threads);
  result.timings.extract = seconds_since(t0);

  result.timings.total = seconds_since(t_total);
  return result;
}

PipelineResult run_offset_pipeline(const Surface& surface, const SourceCurve& curve,
                                   const RunOptions& options) {
  return run_offset_pipeline(surface, std::vector<SourceCurve>{curve}, options);
}

GeodesicRunResult run_geodesic(const Surface& surface, ParamPoint a, ParamPoint b,
                               int grid_nu, int grid_nv) {
  if (grid_nu == 0 || grid_nv == 0) {
    auto [au, av] = auto_grid(surface);
    if (grid_nu == 0) grid_nu = au;
    if (grid_nv == 0) grid_nv = av;
  }
  IntrinsicMesh mesh = IntrinsicMesh::build_uniform(surface, grid_nu, grid_nv);
  int va = mesh.insert_site(a, surface);
  int vb = mesh.insert_site(b, surface);
  if (va == vb) throw ConfigError("geodesic endpoints coincide on the mesh");

  GeodesicRunResult out;
  out.init = dijkstra_path(mesh, va, vb);
  out.geodesic = flip_shorten(mesh, out.init);
  out.lifted.reserve(out.geodesic.path_vertices.size());
  for (size_t i = 0; i < out.geodesic.path_vertices.size(); ++i) {
    ParamPoint p = mesh.param(out.geodesic.path_vertices[i]);
    out.lifted.push_back(surface.evaluate(p));
    if (i + 1 < out.geodesic.path_vertices.size()) {
      // Densify along the parameter segment for a smoother 3D polyline.
      ParamPoint q =
          surface.unwrap_near(mesh.param(out.geodesic.path_vertices[i + 1]), p);
      for (int k = 1; k < 4; ++k) {
        double t = k / 4.0;
        out.lifted.push_back(surface.evaluate(
            surface.wrap({p.u + t * (q.u - p.u), p.v + t * (q.v - p.v)})));
      }
    }
  }
  return out;
}

}  // namespace surfoffset
