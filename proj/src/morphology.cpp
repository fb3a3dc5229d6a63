#include "surfoffset/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace surfoffset {

namespace {

double loop_signed_area(const SourceCurve& loop) {
  double a = 0.0;
  int n = static_cast<int>(loop.samples.size());
  for (int i = 0; i < n; ++i) {
    const ParamPoint& p = loop.samples[i];
    const ParamPoint& q = loop.samples[(i + 1) % n];
    a += p.u * q.v - q.u * p.v;
  }
  return 0.5 * a;
}

bool point_in_loop(const SourceCurve& loop, const ParamPoint& p) {
  bool inside = false;
  int n = static_cast<int>(loop.samples.size());
  for (int i = 0; i < n; ++i) {
    const ParamPoint& a = loop.samples[i];
    const ParamPoint& b = loop.samples[(i + 1) % n];
    if ((a.v > p.v) != (b.v > p.v)) {
      double x = a.u + (p.v - a.v) * (b.u - a.u) / (b.v - a.v);
      if (x > p.u) inside = !inside;
    }
  }
  return inside;
}

void check_no_seam(const SourceCurve& loop, const Surface& surface) {
  int n = static_cast<int>(loop.samples.size());
  for (int i = 0; i < n; ++i) {
    const ParamPoint& a = loop.samples[i];
    const ParamPoint& b = loop.samples[(i + 1) % n];
    if (surface.u_periodic() && std::abs(b.u - a.u) > 0.5 * surface.u_extent())
      throw ConfigError("regions spanning a periodic seam are unsupported");
    if (surface.v_periodic() && std::abs(b.v - a.v) > 0.5 * surface.v_extent())
      throw ConfigError("regions spanning a periodic seam are unsupported");
  }
}

SourceCurve polyline_to_loop(const OffsetPolyline& poly, const Surface& surface) {
  SourceCurve loop;
  loop.closed = true;
  double tol = 1e-14 * (surface.u_extent() + surface.v_extent());
  for (const auto& p : poly.uv) {
    if (loop.samples.empty() || param_distance(loop.samples.back(), p) > tol)
      loop.samples.push_back(p);
  }
  while (loop.samples.size() > 1 &&
         param_distance(loop.samples.front(), loop.samples.back()) <= tol)
    loop.samples.pop_back();
  return loop;
}

Region morph_offset(const Region& region, double d, const Surface& surface,
                    const MorphOptions& options, bool keep_inside) {
  if (!(d > 0)) throw ConfigError("morphology distance must be positive");
  region.validate(surface);

  RunOptions run;
  run.distance = d;
  run.segments = options.segments;
  run.grid_nu = options.grid_nu;
  run.grid_nv = options.grid_nv;
  run.cutoff = options.cutoff;
  run.threads = options.threads;
  PipelineResult pipe = run_offset_pipeline(surface, region.loops, run);

  Region out;
  for (const auto& poly : pipe.offset.polylines) {
    if (!poly.closed) {
      log_line(LogLevel::Warn, "morph_open_component_discarded",
               {{"vertices", std::to_string(poly.uv.size())}});
      continue;
    }
    SourceCurve loop = polyline_to_loop(poly, surface);
    if (loop.samples.size() < 3) continue;
    bool inside = classify_inside(region, loop.samples.front(), surface);
    if (inside != keep_inside) continue;
    out.loops.push_back(densify_curve(loop, surface, 16));
  }

  // Orientation convention: loops at even nesting depth run counterclockwise.
  for (size_t i = 0; i < out.loops.size(); ++i) {
    int depth = 0;
    for (size_t j = 0; j < out.loops.size(); ++j) {
      if (i != j && point_in_loop(out.loops[j], out.loops[i].samples.front()))
        ++depth;
    }
    bool want_ccw = depth % 2 == 0;
    if ((loop_signed_area(out.loops[i]) > 0) != want_ccw)
      std::reverse(out.loops[i].samples.begin(), out.loops[i].samples.end());
  }
  return out;
}

}  // namespace

void Region::validate(const Surface& surface) const {
  for (const auto& loop : loops) {
    if (!loop.closed) throw ConfigError("region loops must be closed");
    loop.validate(surface);
    check_no_seam(loop, surface);
  }
}

Region Region::from_json_text(const std::string& text, const Surface& surface) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid region JSON: ") + e.what());
  }
  Region r;
  if (j.contains("loops")) {
    for (const auto& lj : j["loops"])
      r.loops.push_back(SourceCurve::from_json_text(lj.dump(), surface));
  } else {
    r.loops.push_back(SourceCurve::from_json_text(text, surface));
  }
  r.validate(surface);
  return r;
}

Region Region::load(const std::string& path, const Surface& surface) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open region file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str(), surface);
}

std::string Region::to_json_text() const {
  nlohmann::json j;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& loop : loops) arr.push_back(nlohmann::json::parse(loop.to_json_text()));
  j["loops"] = std::move(arr);
  return j.dump();
}

bool classify_inside(const Region& region, const ParamPoint& p,
                     const Surface& surface) {
  ParamPoint q = surface.wrap(p);
  int crossings = 0;
  for (const auto& loop : region.loops)
    if (point_in_loop(loop, q)) ++crossings;
  return crossings % 2 == 1;
}

Region dilate(const Region& region, double d, const Surface& surface,
              const MorphOptions& options) {
  return morph_offset(region, d, surface, options, false);
}

Region erode(const Region& region, double d, const Surface& surface,
             const MorphOptions& options) {
  return morph_offset(region, d, surface, options, true);
}

Region opening(const Region& region, double d, const Surface& surface,
               const MorphOptions& options) {
  Region eroded = erode(region, d, surface, options);
  if (eroded.loops.empty()) return eroded;
  return dilate(eroded, d, surface, options);
}

Region closing(const Region& region, double d, const Surface& surface,
               const MorphOptions& options) {
  return erode(dilate(region, d, surface, options), d, surface, options);
}

double region_area(const Region& region, const Surface& surface,
                   int samples_per_axis) {
  if (region.loops.empty()) return 0.0;
  int n = samples_per_axis;
  double du = surface.u_extent() / n, dv = surface.v_extent() / n;
  double area = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      ParamPoint p{surface.u0() + (i + 0.5) * du, surface.v0() + (j + 0.5) * dv};
      if (!classify_inside(region, p, surface)) continue;
      FundamentalForm g = surface.fundamental_form(p);
      area += std::sqrt(g.det()) * du * dv;
    }
  }
  return area;
}

}  // namespace surfoffset
