#pragma once

#include <string>
#include <vector>

#include "surfoffset/surface.hpp"

namespace surfoffset {

class IntrinsicMesh;

// Dense polyline in the parameter domain. For closed curves the wrap-around
// segment from the last sample back to the first is implicit.
struct SourceCurve {
  std::vector<ParamPoint> samples;
  bool closed = false;

  // Accepts {"closed":bool,"samples":[[u,v],...]} or a generator form such
  // as {"generator":"circle_uv","center":[u,v],"radius":r,"samples":n}.
  static SourceCurve from_json_text(const std::string& text, const Surface& surface);
  static SourceCurve load(const std::string& path, const Surface& surface);
  std::string to_json_text() const;

  void validate(const Surface& surface) const;
  int segment_count() const {
    return closed ? static_cast<int>(samples.size())
                  : static_cast<int>(samples.size()) - 1;
  }
};

// Parameter-space circle, sampled counterclockwise.
SourceCurve circle_uv(ParamPoint center, double radius, int samples);
// Closed iso-v loop across the full u range of a u-periodic surface.
SourceCurve const_v_loop(const Surface& surface, double v, int samples);

struct Site {
  ParamPoint p;
  double arc_position = 0.0;  // induced-metric arc length along the curve
};

struct SiteSet {
  std::vector<Site> sites;
  bool closed = false;
  double total_length = 0.0;

  double mean_spacing() const {
    if (sites.empty()) return 0.0;
    int n = static_cast<int>(sites.size());
    return total_length / (closed ? n : std::max(1, n - 1));
  }
};

// Induced-metric length of the polyline (chord sum over sample segments).
double curve_induced_length(const SourceCurve& curve, const Surface& surface);

// Cumulative induced lengths; entry i is the arc position of sample i
// (plus the closing entry for closed curves).
std::vector<double> curve_cumulative_lengths(const SourceCurve& curve,
                                             const Surface& surface);

// Parameter point at induced arc position s along the curve.
ParamPoint curve_point_at_arc(const SourceCurve& curve, const Surface& surface,
                              const std::vector<double>& cumulative, double s);

// Places n sites at equal induced arc-length intervals; each site is the
// arc-length midpoint of its segment (open curves put sites at the
// endpoints and give the end segments half length).
SiteSet discretize(const SourceCurve& curve, int n, const Surface& surface);

// Midpoint-subdivides segments until the curve has at least min_samples.
SourceCurve densify_curve(const SourceCurve& curve, const Surface& surface,
                          int min_samples);

// Min over curve samples of geodesic_distance(mesh, p, sample vertex).
// Inserts the samples (and p) into the mesh as needed; test oracle.
double brute_force_curve_distance(const SourceCurve& curve, const ParamPoint& p,
                                  const Surface& surface, IntrinsicMesh& mesh);

}  // namespace surfoffset
