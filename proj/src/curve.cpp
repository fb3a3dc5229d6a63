#include "surfoffset/curve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "surfoffset/geodesic.hpp"
#include "surfoffset/mesh.hpp"

namespace surfoffset {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

SourceCurve circle_uv(ParamPoint center, double radius, int samples) {
  if (radius <= 0) throw ConfigError("circle_uv radius must be positive");
  if (samples < 16) throw ConfigError("circle_uv needs at least 16 samples");
  SourceCurve c;
  c.closed = true;
  c.samples.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    double t = 2.0 * kPi * i / samples;
    c.samples.push_back(
        {center.u + radius * std::cos(t), center.v + radius * std::sin(t)});
  }
  return c;
}

SourceCurve const_v_loop(const Surface& surface, double v, int samples) {
  if (!surface.u_periodic())
    throw ConfigError("const_v_loop requires a u-periodic surface");
  if (samples < 16) throw ConfigError("const_v_loop needs at least 16 samples");
  SourceCurve c;
  c.closed = true;
  c.samples.reserve(samples);
  for (int i = 0; i < samples; ++i)
    c.samples.push_back({surface.u0() + surface.u_extent() * i / samples, v});
  return c;
}

void SourceCurve::validate(const Surface& surface) const {
  if (samples.size() < 16)
    throw ConfigError("source curve needs at least 16 samples");
  for (const auto& p : samples) {
    if (!surface.in_domain(p))
      throw DomainError("curve sample outside surface domain");
  }
  int n = static_cast<int>(samples.size());
  for (int i = 0; i + 1 < n; ++i) {
    if (param_distance(samples[i], samples[i + 1]) == 0.0)
      throw ConfigError("consecutive curve samples coincide");
  }
  if (closed && param_distance(samples.front(), samples.back()) == 0.0)
    throw ConfigError("closed curve must not repeat the first sample");
}

SourceCurve SourceCurve::from_json_text(const std::string& text,
                                        const Surface& surface) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid curve JSON: ") + e.what());
  }
  SourceCurve c;
  if (j.contains("generator")) {
    std::string gen = j["generator"].get<std::string>();
    int n = j.value("samples", 1024);
    if (gen == "circle_uv") {
      auto ctr = j.at("center");
      c = circle_uv({ctr[0].get<double>(), ctr[1].get<double>()},
                    j.at("radius").get<double>(), n);
    } else if (gen == "const_v") {
      c = const_v_loop(surface, j.at("v").get<double>(), n);
    } else {
      throw ConfigError("unknown curve generator: " + gen);
    }
  } else {
    if (!j.contains("samples")) throw ConfigError("curve JSON missing \"samples\"");
    c.closed = j.value("closed", false);
    for (const auto& s : j["samples"])
      c.samples.push_back({s[0].get<double>(), s[1].get<double>()});
  }
  c.validate(surface);
  return c;
}

SourceCurve SourceCurve::load(const std::string& path, const Surface& surface) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open curve file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str(), surface);
}

std::string SourceCurve::to_json_text() const {
  nlohmann::json j;
  j["closed"] = closed;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : samples) arr.push_back({p.u, p.v});
  j["samples"] = std::move(arr);
  return j.dump();
}

std::vector<double> curve_cumulative_lengths(const SourceCurve& curve,
                                             const Surface& surface) {
  int n = static_cast<int>(curve.samples.size());
  std::vector<double> cum(curve.closed ? n + 1 : n, 0.0);
  for (int i = 1; i < n; ++i)
    cum[i] = cum[i - 1] +
             surface.induced_length(curve.samples[i - 1], curve.samples[i]);
  if (curve.closed)
    cum[n] = cum[n - 1] +
             surface.induced_length(curve.samples[n - 1], curve.samples[0]);
  return cum;
}

double curve_induced_length(const SourceCurve& curve, const Surface& surface) {
  return curve_cumulative_lengths(curve, surface).back();
}

ParamPoint curve_point_at_arc(const SourceCurve& curve, const Surface& surface,
                              const std::vector<double>& cumulative, double s) {
  double total = cumulative.back();
  s = std::clamp(s, 0.0, total);
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
  int seg = static_cast<int>(std::max<std::ptrdiff_t>(
      0, std::distance(cumulative.begin(), it) - 1));
  int n = static_cast<int>(curve.samples.size());
  seg = std::min(seg, static_cast<int>(cumulative.size()) - 2);
  double seg_len = cumulative[seg + 1] - cumulative[seg];
  double t = seg_len > 0 ? (s - cumulative[seg]) / seg_len : 0.0;
  ParamPoint a = curve.samples[seg];
  ParamPoint b_raw = curve.samples[(seg + 1) % n];
  ParamPoint b = surface.unwrap_near(b_raw, a);
  return surface.wrap({a.u + t * (b.u - a.u), a.v + t * (b.v - a.v)});
}

SiteSet discretize(const SourceCurve& curve, int n, const Surface& surface) {
  curve.validate(surface);
  if (n < 3) throw ConfigError("discretize requires n >= 3");
  if (n > curve.segment_count())
    throw ResolutionError(
        "site count exceeds curve sample density; supply a denser polyline");
  std::vector<double> cum = curve_cumulative_lengths(curve, surface);
  double total = cum.back();
  if (!(total > 0)) throw ConfigError("curve has zero induced length");
  SiteSet set;
  set.closed = curve.closed;
  set.total_length = total;
  set.sites.reserve(n);
  for (int k = 0; k < n; ++k) {
    double s = curve.closed ? (k + 0.5) * total / n
                            : k * total / (n - 1);
    set.sites.push_back({curve_point_at_arc(curve, surface, cum, s), s});
  }
  return set;
}

SourceCurve densify_curve(const SourceCurve& curve, const Surface& surface,
                          int min_samples) {
  SourceCurve out = curve;
  while (static_cast<int>(out.samples.size()) < min_samples) {
    SourceCurve next;
    next.closed = out.closed;
    int n = static_cast<int>(out.samples.size());
    int segs = out.segment_count();
    for (int i = 0; i < n; ++i) {
      next.samples.push_back(out.samples[i]);
      if (i < segs) {
        ParamPoint a = out.samples[i];
        ParamPoint b = surface.unwrap_near(out.samples[(i + 1) % n], a);
        next.samples.push_back(
            surface.wrap({0.5 * (a.u + b.u), 0.5 * (a.v + b.v)}));
      }
    }
    out = std::move(next);
  }
  return out;
}

double brute_force_curve_distance(const SourceCurve& curve, const ParamPoint& p,
                                  const Surface& surface, IntrinsicMesh& mesh) {
  int pv = mesh.insert_site(p, surface);
  std::vector<int> sample_vids;
  sample_vids.reserve(curve.samples.size());
  for (const auto& s : curve.samples)
    sample_vids.push_back(mesh.insert_site(s, surface));
  DijkstraTree tree = dijkstra_tree(mesh, pv);
  double best = std::numeric_limits<double>::infinity();
  for (int vid : sample_vids) {
    if (vid == pv) return 0.0;
    VertexPath init = tree.path_to(vid);
    GeodesicResult r = flip_shorten(mesh, init);
    best = std::min(best, r.length);
  }
  return best;
}

}  // namespace surfoffset
