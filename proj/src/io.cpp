#include "surfoffset/io.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include "json.hpp"

namespace surfoffset {

namespace {

std::string site_color(int site) {
  // Golden-ratio hue walk keeps adjacent cells distinguishable.
  double hue = std::fmod(0.618033988749895 * (site + 1), 1.0) * 360.0;
  double c = 0.55, x = c * (1.0 - std::abs(std::fmod(hue / 60.0, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hue < 60) { r = c; g = x; }
  else if (hue < 120) { r = x; g = c; }
  else if (hue < 180) { g = c; b = x; }
  else if (hue < 240) { g = x; b = c; }
  else if (hue < 300) { r = x; b = c; }
  else { r = c; b = x; }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", int(255 * (r + 0.35)),
                int(255 * (g + 0.35)), int(255 * (b + 0.35)));
  return buf;
}

nlohmann::json polyline_json(const OffsetPolyline& poly) {
  nlohmann::json jp;
  jp["closed"] = poly.closed;
  nlohmann::json uv = nlohmann::json::array();
  for (const auto& p : poly.uv) uv.push_back({p.u, p.v});
  jp["uv"] = std::move(uv);
  jp["site"] = poly.site;
  nlohmann::json xyz = nlohmann::json::array();
  for (const auto& p : poly.xyz) xyz.push_back({p.x, p.y, p.z});
  jp["xyz"] = std::move(xyz);
  return jp;
}

}  // namespace

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

void write_offset_obj(const std::string& path, const OffsetResult& offset) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out.precision(17);
  out << "# offset polylines, distance " << offset.offset_distance << "\n";
  std::size_t base = 1;
  for (const auto& poly : offset.polylines)
    for (const auto& p : poly.xyz) out << "v " << p.x << ' ' << p.y << ' ' << p.z << '\n';
  for (const auto& poly : offset.polylines) {
    if (poly.xyz.size() >= 2) {
      out << 'l';
      for (std::size_t i = 0; i < poly.xyz.size(); ++i) out << ' ' << base + i;
      out << '\n';
    }
    base += poly.xyz.size();
  }
}

void write_polyline_obj(const std::string& path,
                        const std::vector<SurfacePoint>& polyline) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out.precision(17);
  for (const auto& p : polyline) out << "v " << p.x << ' ' << p.y << ' ' << p.z << '\n';
  if (polyline.size() >= 2) {
    out << 'l';
    for (std::size_t i = 0; i < polyline.size(); ++i) out << ' ' << i + 1;
    out << '\n';
  }
}

void write_offset_svg(const std::string& path, const Surface& surface,
                      const std::vector<SourceCurve>& curves,
                      const OffsetResult* offset, const LabeledMesh* labeled) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  double u0 = surface.u0(), v1 = surface.v1();
  double w = surface.u_extent(), h = surface.v_extent();
  double stroke = 0.002 * std::max(w, h);
  out.precision(10);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << 0 << ' ' << 0
      << ' ' << w << ' ' << h << "\">\n";
  auto X = [&](double u) { return u - u0; };
  auto Y = [&](double v) { return v1 - v; };

  out << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h
      << "\" fill=\"#ffffff\" stroke=\"#888888\" stroke-width=\"" << stroke
      << "\"/>\n";

  if (labeled) {
    out << "<g stroke=\"none\">\n";
    for (const auto& face : labeled->faces) {
      const auto& a = labeled->vertices[face.v[0]].p;
      ParamPoint b = surface.unwrap_near(labeled->vertices[face.v[1]].p, a);
      ParamPoint c = surface.unwrap_near(labeled->vertices[face.v[2]].p, a);
      out << "<polygon points=\"" << X(a.u) << ',' << Y(a.v) << ' ' << X(b.u) << ','
          << Y(b.v) << ' ' << X(c.u) << ',' << Y(c.v) << "\" fill=\""
          << site_color(face.label) << "\"/>\n";
    }
    out << "</g>\n";
    // Bisectors: refined edges whose two incident faces carry different labels.
    std::map<std::pair<int, int>, std::pair<int, int>> edge_labels;
    for (const auto& face : labeled->faces) {
      for (int k = 0; k < 3; ++k) {
        auto key = std::minmax(face.v[k], face.v[(k + 1) % 3]);
        auto it = edge_labels.find(key);
        if (it == edge_labels.end())
          edge_labels[key] = {face.label, -1};
        else
          it->second.second = face.label;
      }
    }
    out << "<g stroke=\"#b03030\" stroke-width=\"" << stroke
        << "\" fill=\"none\">\n";
    for (const auto& [key, labels] : edge_labels) {
      if (labels.second < 0 || labels.first == labels.second) continue;
      const auto& a = labeled->vertices[key.first].p;
      ParamPoint b = surface.unwrap_near(labeled->vertices[key.second].p, a);
      out << "<line x1=\"" << X(a.u) << "\" y1=\"" << Y(a.v) << "\" x2=\"" << X(b.u)
          << "\" y2=\"" << Y(b.v) << "\"/>\n";
    }
    out << "</g>\n";
  }

  auto draw_polyline = [&](const std::vector<ParamPoint>& pts, bool closed,
                           const char* color, double width) {
    if (pts.size() < 2) return;
    out << "<g stroke=\"" << color << "\" stroke-width=\"" << width
        << "\" fill=\"none\">\n";
    std::size_t n = pts.size();
    std::size_t segs = closed ? n : n - 1;
    for (std::size_t i = 0; i < segs; ++i) {
      ParamPoint a = surface.wrap(pts[i]);
      ParamPoint b = surface.unwrap_near(pts[(i + 1) % n], a);
      out << "<line x1=\"" << X(a.u) << "\" y1=\"" << Y(a.v) << "\" x2=\"" << X(b.u)
          << "\" y2=\"" << Y(b.v) << "\"/>\n";
      if (!surface.in_domain(b) || b.u < surface.u0() || b.u > surface.u1() ||
          b.v < surface.v0() || b.v > surface.v1()) {
        // Seam-crossing segment: draw the wrapped twin as well.
        ParamPoint b2 = surface.wrap(pts[(i + 1) % n]);
        ParamPoint a2 = surface.unwrap_near(pts[i], b2);
        out << "<line x1=\"" << X(a2.u) << "\" y1=\"" << Y(a2.v) << "\" x2=\""
            << X(b2.u) << "\" y2=\"" << Y(b2.v) << "\"/>\n";
      }
    }
    out << "</g>\n";
  };

  for (const auto& curve : curves)
    draw_polyline(curve.samples, curve.closed, "#d81b60", 1.5 * stroke);
  if (offset) {
    for (const auto& poly : offset->polylines)
      draw_polyline(poly.uv, poly.closed, "#1e50c8", 1.5 * stroke);
  }
  out << "</svg>\n";
}

std::string offset_result_json(const Surface& surface,
                               const std::vector<SourceCurve>& curves,
                               const RunOptions& options,
                               const OffsetResult& offset) {
  nlohmann::json j;
  j["surface"] = nlohmann::json::parse(surface.to_json_text());
  nlohmann::json jc = nlohmann::json::array();
  for (const auto& c : curves) jc.push_back({{"closed", c.closed},
                                             {"samples", c.samples.size()}});
  j["curves"] = std::move(jc);
  j["distance"] = offset.offset_distance;
  j["segments"] = options.segments;
  j["polyline_count"] = offset.polylines.size();
  j["clipped_endpoints"] = offset.clipped_endpoints;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& poly : offset.polylines) arr.push_back(polyline_json(poly));
  j["polylines"] = std::move(arr);
  return j.dump(2);
}

std::string geodesic_result_json(const Surface& surface, ParamPoint a, ParamPoint b,
                                 const GeodesicRunResult& run) {
  nlohmann::json j;
  j["surface"] = nlohmann::json::parse(surface.to_json_text());
  j["from"] = {a.u, a.v};
  j["to"] = {b.u, b.v};
  j["length"] = run.geodesic.length;
  j["init_length"] = run.init.total_length;
  j["iterations"] = run.geodesic.iterations;
  j["converged"] = run.geodesic.converged;
  nlohmann::json path = nlohmann::json::array();
  for (const auto& p : run.lifted) path.push_back({p.x, p.y, p.z});
  j["path_xyz"] = std::move(path);
  return j.dump(2);
}

std::string diagnostics_json(const std::string& failure,
                             const std::vector<int>& violating_edges,
                             const IntrinsicMesh* mesh, int non_converged) {
  nlohmann::json j;
  j["failure"] = failure;
  j["non_converged_paths"] = non_converged;
  nlohmann::json edges = nlohmann::json::array();
  for (int e : violating_edges) {
    nlohmann::json je;
    je["edge"] = e;
    if (mesh) {
      auto [a, b] = mesh->edge_vertices(e);
      je["vertices"] = {a, b};
      je["uv"] = {{mesh->param(a).u, mesh->param(a).v},
                  {mesh->param(b).u, mesh->param(b).v}};
      je["length"] = mesh->edge_length(e);
    }
    edges.push_back(je);
  }
  j["violating_edges"] = std::move(edges);
  return j.dump(2);
}

}  // namespace surfoffset
