#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "surfoffset/io.hpp"

namespace py = pybind11;
using namespace surfoffset;

namespace {

py::list polyline_uv(const OffsetPolyline& p) {
  py::list out;
  for (const auto& q : p.uv) out.append(py::make_tuple(q.u, q.v));
  return out;
}

py::list polyline_xyz(const OffsetPolyline& p) {
  py::list out;
  for (const auto& q : p.xyz) out.append(py::make_tuple(q.x, q.y, q.z));
  return out;
}

py::dict offset_to_dict(const OffsetResult& r) {
  py::dict d;
  d["distance"] = r.offset_distance;
  d["clipped_endpoints"] = r.clipped_endpoints;
  py::list polys;
  for (const auto& p : r.polylines) {
    py::dict jp;
    jp["closed"] = p.closed;
    jp["uv"] = polyline_uv(p);
    jp["xyz"] = polyline_xyz(p);
    jp["site"] = p.site;
    polys.append(jp);
  }
  d["polylines"] = polys;
  return d;
}

RunOptions make_run_options(double distance, int segments, int grid_nu, int grid_nv,
                            double cutoff, int threads) {
  RunOptions o;
  o.distance = distance;
  o.segments = segments;
  o.grid_nu = grid_nu;
  o.grid_nv = grid_nv;
  o.cutoff = cutoff;
  o.threads = threads;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Geodesic offset curves of source curves on analytic parametric "
            "surfaces";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<Surface>(m, "Surface")
      .def_static("from_json", &Surface::from_json_text, py::arg("text"))
      .def_static("make",
                  [](const std::string& kind) {
                    return Surface::make(surface_kind_from_name(kind));
                  },
                  py::arg("kind"))
      .def("to_json", &Surface::to_json_text)
      .def_property_readonly("kind",
                             [](const Surface& s) {
                               return std::string(surface_kind_name(s.kind()));
                             })
      .def_property_readonly("domain",
                             [](const Surface& s) {
                               return py::make_tuple(s.u0(), s.u1(), s.v0(), s.v1());
                             })
      .def("evaluate",
           [](const Surface& s, double u, double v) {
             SurfacePoint p = s.evaluate({u, v});
             return py::make_tuple(p.x, p.y, p.z);
           },
           py::arg("u"), py::arg("v"))
      .def("fundamental_form",
           [](const Surface& s, double u, double v) {
             FundamentalForm f = s.fundamental_form({u, v});
             return py::make_tuple(f.E, f.F, f.G);
           },
           py::arg("u"), py::arg("v"))
      .def("induced_length",
           [](const Surface& s, std::pair<double, double> p,
              std::pair<double, double> q) {
             return s.induced_length({p.first, p.second}, {q.first, q.second});
           },
           py::arg("p"), py::arg("q"))
      .def("model_diameter", &Surface::model_diameter);

  py::class_<SourceCurve>(m, "SourceCurve")
      .def_static("from_json",
                  [](const std::string& text, const Surface& s) {
                    return SourceCurve::from_json_text(text, s);
                  },
                  py::arg("text"), py::arg("surface"))
      .def_static("from_samples",
                  [](const std::vector<std::pair<double, double>>& samples,
                     bool closed, const Surface& s) {
                    SourceCurve c;
                    c.closed = closed;
                    for (auto& [u, v] : samples) c.samples.push_back({u, v});
                    c.validate(s);
                    return c;
                  },
                  py::arg("samples"), py::arg("closed"), py::arg("surface"))
      .def_property_readonly("closed",
                             [](const SourceCurve& c) { return c.closed; })
      .def("__len__", [](const SourceCurve& c) { return c.samples.size(); });

  m.def("circle_uv",
        [](std::pair<double, double> center, double radius, int samples) {
          return circle_uv({center.first, center.second}, radius, samples);
        },
        py::arg("center"), py::arg("radius"), py::arg("samples") = 1024);
  m.def("const_v_loop", &const_v_loop, py::arg("surface"), py::arg("v"),
        py::arg("samples") = 1024);

  m.def("geodesic_distance",
        [](const Surface& s, std::pair<double, double> a,
           std::pair<double, double> b, int grid_nu, int grid_nv) {
          GeodesicRunResult r = run_geodesic(s, {a.first, a.second},
                                             {b.first, b.second}, grid_nu, grid_nv);
          return r.geodesic.length;
        },
        py::arg("surface"), py::arg("a"), py::arg("b"), py::arg("grid_nu") = 0,
        py::arg("grid_nv") = 0,
        "Geodesic distance between two parameter points (Dijkstra "
        "initialization followed by intrinsic edge flipping).");

  m.def("offset_curve",
        [](const Surface& s, const SourceCurve& curve, double distance,
           int segments, int grid_nu, int grid_nv, double cutoff, int threads) {
          PipelineResult r = run_offset_pipeline(
              s, curve,
              make_run_options(distance, segments, grid_nu, grid_nv, cutoff,
                               threads));
          py::dict d = offset_to_dict(r.offset);
          d["violating_edges"] = r.violating_edges;
          d["sites"] = r.sites.sites.size();
          return d;
        },
        py::arg("surface"), py::arg("curve"), py::arg("distance"),
        py::arg("segments") = 1000, py::arg("grid_nu") = 0, py::arg("grid_nv") = 0,
        py::arg("cutoff") = 0.0, py::arg("threads") = 0,
        "Geodesic offset polylines of a source curve at one distance.");

  py::class_<Region>(m, "Region")
      .def_static("from_json",
                  [](const std::string& text, const Surface& s) {
                    return Region::from_json_text(text, s);
                  },
                  py::arg("text"), py::arg("surface"))
      .def_static("from_loops",
                  [](const std::vector<SourceCurve>& loops, const Surface& s) {
                    Region r;
                    r.loops = loops;
                    r.validate(s);
                    return r;
                  },
                  py::arg("loops"), py::arg("surface"))
      .def("to_json", &Region::to_json_text)
      .def_property_readonly("loops", [](const Region& r) { return r.loops; })
      .def("__len__", [](const Region& r) { return r.loops.size(); });

  m.def("classify_inside",
        [](const Region& r, std::pair<double, double> p, const Surface& s) {
          return classify_inside(r, {p.first, p.second}, s);
        },
        py::arg("region"), py::arg("p"), py::arg("surface"));

  auto morph = [](const char* op) {
    return [op](const Region& r, double d, const Surface& s, int segments,
                int grid_nu, int grid_nv, int threads) {
      MorphOptions o;
      o.segments = segments;
      o.grid_nu = grid_nu;
      o.grid_nv = grid_nv;
      o.threads = threads;
      std::string name(op);
      if (name == "dilate") return dilate(r, d, s, o);
      if (name == "erode") return erode(r, d, s, o);
      if (name == "opening") return opening(r, d, s, o);
      return closing(r, d, s, o);
    };
  };
  m.def("dilate", morph("dilate"), py::arg("region"), py::arg("distance"),
        py::arg("surface"), py::arg("segments") = 1024, py::arg("grid_nu") = 0,
        py::arg("grid_nv") = 0, py::arg("threads") = 0);
  m.def("erode", morph("erode"), py::arg("region"), py::arg("distance"),
        py::arg("surface"), py::arg("segments") = 1024, py::arg("grid_nu") = 0,
        py::arg("grid_nv") = 0, py::arg("threads") = 0);
  m.def("opening", morph("opening"), py::arg("region"), py::arg("distance"),
        py::arg("surface"), py::arg("segments") = 1024, py::arg("grid_nu") = 0,
        py::arg("grid_nv") = 0, py::arg("threads") = 0);
  m.def("closing", morph("closing"), py::arg("region"), py::arg("distance"),
        py::arg("surface"), py::arg("segments") = 1024, py::arg("grid_nu") = 0,
        py::arg("grid_nv") = 0, py::arg("threads") = 0);

  m.def("region_area", &region_area, py::arg("region"), py::arg("surface"),
        py::arg("samples_per_axis") = 256);

  m.def("hausdorff_cd",
        [](const std::vector<std::tuple<double, double, double>>& a,
           const std::vector<std::tuple<double, double, double>>& b) {
          std::vector<SurfacePoint> pa, pb;
          for (auto& [x, y, z] : a) pa.push_back({x, y, z});
          for (auto& [x, y, z] : b) pb.push_back({x, y, z});
          CurveDistanceReport r = hausdorff_cd(pa, pb);
          return py::make_tuple(r.hausdorff, r.chamfer);
        },
        py::arg("a"), py::arg("b"),
        "One-directional Hausdorff and Chamfer distance from a to b.");
}
