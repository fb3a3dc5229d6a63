#include "surfoffset/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <unordered_map>

namespace surfoffset {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct PointGrid {
  Vec3 lo;
  double cell = 1.0;
  std::unordered_map<unsigned long long, std::vector<int>> cells;
  const std::vector<SurfacePoint>* pts = nullptr;

  static unsigned long long key(long long x, long long y, long long z) {
    return (static_cast<unsigned long long>(x & 0x1FFFFF) << 42) |
           (static_cast<unsigned long long>(y & 0x1FFFFF) << 21) |
           static_cast<unsigned long long>(z & 0x1FFFFF);
  }

  void build(const std::vector<SurfacePoint>& points) {
    pts = &points;
    Vec3 hi{-1e300, -1e300, -1e300};
    lo = {1e300, 1e300, 1e300};
    for (const auto& p : points) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    double diag = distance(lo, hi);
    double res = std::clamp(2.0 * std::cbrt(static_cast<double>(points.size())),
                            16.0, 512.0);
    cell = std::max(diag / res, 1e-12);
    for (int i = 0; i < static_cast<int>(points.size()); ++i) {
      auto [x, y, z] = cell_of(points[i]);
      cells[key(x, y, z)].push_back(i);
    }
  }

  std::array<long long, 3> cell_of(const SurfacePoint& p) const {
    return {static_cast<long long>(std::floor((p.x - lo.x) / cell)),
            static_cast<long long>(std::floor((p.y - lo.y) / cell)),
            static_cast<long long>(std::floor((p.z - lo.z) / cell))};
  }

  double nearest_distance(const SurfacePoint& q) const {
    auto [cx, cy, cz] = cell_of(q);
    double best2 = std::numeric_limits<double>::infinity();
    for (long long r = 0;; ++r) {
      for (long long dz = -r; dz <= r; ++dz) {
        for (long long dy = -r; dy <= r; ++dy) {
          for (long long dx = -r; dx <= r; ++dx) {
            if (std::max({std::llabs(dx), std::llabs(dy), std::llabs(dz)}) != r)
              continue;
            auto it = cells.find(key(cx + dx, cy + dy, cz + dz));
            if (it == cells.end()) continue;
            for (int idx : it->second) {
              const SurfacePoint& p = (*pts)[idx];
              Vec3 dvec = p - q;
              best2 = std::min(best2, dvec.dot(dvec));
            }
          }
        }
      }
      // Unscanned cells lie at Chebyshev ring > r, hence at Euclidean
      // distance >= r*cell from anywhere in q's cell.
      if (best2 < std::numeric_limits<double>::infinity() &&
          std::sqrt(best2) <= static_cast<double>(r) * cell)
        break;
      if (r > 4096) break;  // degenerate inputs
    }
    return std::sqrt(best2);
  }
};

}  // namespace

CurveDistanceReport hausdorff_cd(const std::vector<SurfacePoint>& a,
                                 const std::vector<SurfacePoint>& b,
                                 const std::string& direction) {
  if (a.empty() || b.empty())
    throw ConfigError("hausdorff_cd requires non-empty point sets");
  PointGrid grid;
  grid.build(b);
  double worst = 0.0, sum = 0.0;
  for (const auto& q : a) {
    double d = grid.nearest_distance(q);
    worst = std::max(worst, d);
    sum += d;
  }
  CurveDistanceReport r;
  r.hausdorff = worst;
  r.chamfer = sum / static_cast<double>(a.size());
  r.a_count = a.size();
  r.b_count = b.size();
  r.direction = direction;
  return r;
}

CurveDistanceReport hausdorff_cd_bruteforce(const std::vector<SurfacePoint>& a,
                                            const std::vector<SurfacePoint>& b,
                                            const std::string& direction) {
  if (a.empty() || b.empty())
    throw ConfigError("hausdorff_cd requires non-empty point sets");
  double worst = 0.0, sum = 0.0;
  for (const auto& q : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : b) best = std::min(best, distance(p, q));
    worst = std::max(worst, best);
    sum += best;
  }
  CurveDistanceReport r;
  r.hausdorff = worst;
  r.chamfer = sum / static_cast<double>(a.size());
  r.a_count = a.size();
  r.b_count = b.size();
  r.direction = direction;
  return r;
}

std::vector<SurfacePoint> sample_polyline_points(
    const std::vector<SurfacePoint>& polyline, bool closed, std::size_t n) {
  std::vector<SurfacePoint> out;
  if (polyline.size() < 2 || n == 0) return out;
  std::size_t m = polyline.size();
  std::size_t segs = closed ? m : m - 1;
  std::vector<double> cum(segs + 1, 0.0);
  for (std::size_t i = 0; i < segs; ++i)
    cum[i + 1] = cum[i] + distance(polyline[i], polyline[(i + 1) % m]);
  double total = cum.back();
  if (total <= 0) return out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    double s = closed ? (k + 0.5) * total / n
                      : (n == 1 ? 0.0 : k * total / (n - 1));
    auto it = std::upper_bound(cum.begin(), cum.end(), s);
    std::size_t seg = std::min<std::size_t>(
        segs - 1,
        static_cast<std::size_t>(std::max<std::ptrdiff_t>(
            0, std::distance(cum.begin(), it) - 1)));
    double len = cum[seg + 1] - cum[seg];
    double t = len > 0 ? (s - cum[seg]) / len : 0.0;
    const SurfacePoint& p = polyline[seg];
    const SurfacePoint& q = polyline[(seg + 1) % m];
    out.push_back(p + (q - p) * t);
  }
  return out;
}

std::vector<SurfacePoint> sample_offset_points(const OffsetResult& offset,
                                               std::size_t n,
                                               const Surface& surface) {
  struct PolyGeom {
    std::vector<SurfacePoint> lifted;  // per uv vertex
    std::vector<double> cum;
  };
  std::vector<PolyGeom> geom(offset.polylines.size());
  double total = 0.0;
  for (std::size_t i = 0; i < offset.polylines.size(); ++i) {
    const auto& poly = offset.polylines[i];
    auto& g = geom[i];
    std::size_t m = poly.uv.size();
    if (m < 2) continue;
    g.lifted.reserve(m);
    for (const auto& p : poly.uv) g.lifted.push_back(surface.evaluate(p));
    std::size_t segs = poly.closed ? m : m - 1;
    g.cum.assign(segs + 1, 0.0);
    for (std::size_t k = 0; k < segs; ++k)
      g.cum[k + 1] = g.cum[k] + distance(g.lifted[k], g.lifted[(k + 1) % m]);
    total += g.cum.back();
  }
  std::vector<SurfacePoint> out;
  if (total <= 0) return out;
  for (std::size_t i = 0; i < offset.polylines.size(); ++i) {
    const auto& poly = offset.polylines[i];
    const auto& g = geom[i];
    if (g.cum.empty()) continue;
    double len = g.cum.back();
    std::size_t ni = static_cast<std::size_t>(
        std::llround(static_cast<double>(n) * len / total));
    if (ni == 0 && len > 0) ni = 1;
    std::size_t m = poly.uv.size();
    std::size_t segs = poly.closed ? m : m - 1;
    for (std::size_t k = 0; k < ni; ++k) {
      double s = poly.closed ? (k + 0.5) * len / ni
                             : (ni == 1 ? 0.0 : k * len / (ni - 1));
      auto it = std::upper_bound(g.cum.begin(), g.cum.end(), s);
      std::size_t seg = std::min<std::size_t>(
          segs - 1, static_cast<std::size_t>(std::max<std::ptrdiff_t>(
                        0, std::distance(g.cum.begin(), it) - 1)));
      double seg_len = g.cum[seg + 1] - g.cum[seg];
      double t = seg_len > 0 ? (s - g.cum[seg]) / seg_len : 0.0;
      ParamPoint a = poly.uv[seg];
      ParamPoint b = surface.unwrap_near(poly.uv[(seg + 1) % m], a);
      out.push_back(surface.evaluate(
          surface.wrap({a.u + t * (b.u - a.u), a.v + t * (b.v - a.v)})));
    }
  }
  return out;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ConfigError("linear_fit needs matching samples (>= 2)");
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinearFit fit;
  double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double mean_y = sy / n, ss_tot = 0, ss_res = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    double pred = fit.slope * x[i] + fit.intercept;
    ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
    ss_res += (y[i] - pred) * (y[i] - pred);
  }
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

void write_bench_csv(const std::string& path, const std::vector<BenchRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "suite,model,segments,faces,d,hd,cd,seconds,phase_field,phase_voronoi,"
         "phase_extract\n";
  out.precision(12);
  for (const auto& r : rows) {
    out << r.suite << ',' << r.model << ',' << r.segments << ',' << r.faces << ','
        << r.d << ',' << r.hd << ',' << r.cd << ',' << r.seconds << ','
        << r.phase_field << ',' << r.phase_voronoi << ',' << r.phase_extract
        << '\n';
  }
}

GeodesicDeviationStat sphere_geodesic_deviation(int grid_nu, int grid_nv,
                                                int pairs, std::uint64_t seed) {
  // Coarse anisotropic grids overestimate near-pole diagonals enough to
  // break the triangle inequality, so use the widest latitude band that
  // still builds a valid intrinsic triangulation.
  std::optional<Surface> sphere;
  std::optional<IntrinsicMesh> built;
  for (double vmax : {kPi / 2.0, 1.55, 1.5, 1.45, 1.4, 1.3, 1.2, 1.0}) {
    try {
      Surface s(SurfaceKind::sphere, {{"R", 1.0}},
                {0.0, 2.0 * kPi, -vmax, vmax}, {true, false});
      built = IntrinsicMesh::build_uniform(s, grid_nu, grid_nv);
      sphere = s;
      if (vmax < kPi / 2.0)
        log_line(LogLevel::Info, "sphere_deviation_band",
                 {{"vmax", std::to_string(vmax)}});
      break;
    } catch (const RefinementError&) {
      continue;
    }
  }
  if (!built) throw RefinementError("no valid sphere band for this resolution");
  IntrinsicMesh& mesh = *built;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, mesh.vertex_count() - 1);
  double sum = 0.0;
  int used = 0;
  GeodesicDeviationStat stat;
  stat.faces = mesh.face_count();
  while (used < pairs) {
    int s = pick(rng), t = pick(rng);
    if (s == t) continue;
    SurfacePoint xs = sphere->evaluate(mesh.param(s));
    SurfacePoint xt = sphere->evaluate(mesh.param(t));
    double truth = std::acos(std::clamp(xs.dot(xt), -1.0, 1.0));
    if (truth < 1e-9) continue;
    double len = geodesic_distance(mesh, s, t);
    sum += std::abs(len - truth) / truth;
    ++used;
  }
  stat.pairs = used;
  stat.mean_deviation = sum / used;
  return stat;
}

namespace {

std::vector<SurfacePoint> sphere_latitude_circles(double R, double lat,
                                                  std::size_t n_per_circle) {
  std::vector<SurfacePoint> pts;
  pts.reserve(2 * n_per_circle);
  for (int sign : {-1, 1}) {
    double v = sign * lat;
    for (std::size_t i = 0; i < n_per_circle; ++i) {
      double u = 2.0 * kPi * i / n_per_circle;
      pts.push_back({R * std::cos(u) * std::cos(v), R * std::sin(u) * std::cos(v),
                     R * std::sin(v)});
    }
  }
  return pts;
}

std::vector<SurfacePoint> cylinder_offset_circles(double R, double z,
                                                  std::size_t n_per_circle) {
  std::vector<SurfacePoint> pts;
  pts.reserve(2 * n_per_circle);
  for (int sign : {-1, 1}) {
    for (std::size_t i = 0; i < n_per_circle; ++i) {
      double u = 2.0 * kPi * i / n_per_circle;
      pts.push_back({R * std::cos(u), R * std::sin(u), sign * z});
    }
  }
  return pts;
}

BenchRow pipeline_row(const std::string& suite, const std::string& model,
                      const Surface& surface, const SourceCurve& curve,
                      const RunOptions& run,
                      const std::vector<SurfacePoint>& reference,
                      std::size_t samples) {
  PipelineResult pipe = run_offset_pipeline(surface, curve, run);
  BenchRow row;
  row.suite = suite;
  row.model = model;
  row.segments = run.segments;
  row.faces = 2 * (run.grid_nu - 1) * (run.grid_nv - 1);
  row.d = run.distance;
  row.seconds = pipe.timings.total;
  row.phase_field = pipe.timings.field;
  row.phase_voronoi = pipe.timings.voronoi;
  row.phase_extract = pipe.timings.extract;
  if (!reference.empty()) {
    auto computed = sample_offset_points(pipe.offset, samples, surface);
    CurveDistanceReport rep =
        hausdorff_cd(computed, reference, "computed_to_analytic");
    row.hd = rep.hausdorff;
    row.cd = rep.chamfer;
  }
  return row;
}

}  // namespace

AccuracyReport run_accuracy_suite(std::uint64_t seed, int threads) {
  AccuracyReport report;

  {
    Surface sphere = Surface::make(SurfaceKind::sphere);
    SourceCurve equator = const_v_loop(sphere, 0.0, 8192);
    RunOptions run;
    run.distance = 0.3;
    run.segments = 2000;
    run.grid_nu = 225;
    run.grid_nv = 113;
    run.threads = threads;
    auto reference = sphere_latitude_circles(1.0, 0.3, 50000);
    report.rows.push_back(pipeline_row("accuracy", "sphere", sphere, equator, run,
                                       reference, 100000));
  }
  {
    Surface cylinder = Surface::make(SurfaceKind::cylinder);
    SourceCurve section = const_v_loop(cylinder, 0.0, 8192);
    RunOptions run;
    run.distance = 0.5;
    run.segments = 2000;
    run.grid_nu = 199;
    run.grid_nv = 128;
    run.threads = threads;
    auto reference = cylinder_offset_circles(1.0, 0.5, 50000);
    report.rows.push_back(pipeline_row("accuracy", "cylinder", cylinder, section,
                                       run, reference, 100000));
  }
  report.geodesic.push_back(sphere_geodesic_deviation(11, 5, 1000, seed));
  report.geodesic.push_back(sphere_geodesic_deviation(33, 21, 1000, seed + 1));
  report.geodesic.push_back(sphere_geodesic_deviation(161, 65, 1000, seed + 2));
  return report;
}

ScalingReport run_scaling_suite(std::uint64_t seed, int threads) {
  (void)seed;
  ScalingReport report;
  Surface sphere = Surface::make(SurfaceKind::sphere);
  SourceCurve equator = const_v_loop(sphere, 0.0, 8192);
  auto reference = sphere_latitude_circles(1.0, 0.3, 20000);

  for (int segments : {500, 1000, 2000, 4000}) {
    RunOptions run;
    run.distance = 0.3;
    run.segments = segments;
    run.grid_nu = 225;
    run.grid_nv = 113;
    run.threads = threads;
    report.segment_rows.push_back(pipeline_row("scaling_segments", "sphere", sphere,
                                               equator, run, reference, 20000));
  }
  std::vector<double> xs, ys;
  for (const auto& row : report.segment_rows) {
    xs.push_back(row.segments);
    ys.push_back(row.seconds);
  }
  report.fit = linear_fit(xs, ys);

  for (double d : {0.1, 0.2, 0.3, 0.4}) {
    RunOptions run;
    run.distance = d;
    run.segments = 2000;
    run.grid_nu = 225;
    run.grid_nv = 113;
    run.threads = threads;
    std::vector<SurfacePoint> ref = sphere_latitude_circles(1.0, d, 20000);
    report.distance_rows.push_back(pipeline_row("scaling_distance", "sphere",
                                                sphere, equator, run, ref, 20000));
  }
  report.monotone_in_distance = true;
  for (size_t i = 0; i + 1 < report.distance_rows.size(); ++i) {
    if (report.distance_rows[i + 1].seconds < report.distance_rows[i].seconds)
      report.monotone_in_distance = false;
  }
  return report;
}

}  // namespace surfoffset
