#pragma once

#include <array>
#include <map>
#include <string>

#include "surfoffset/core.hpp"

namespace surfoffset {

enum class SurfaceKind {
  plane,
  sphere,
  cylinder,
  torus,
  gaussian_bump,
  bivariate_sine,
  spiral_paraboloid,
  circular_wave,
};

const char* surface_kind_name(SurfaceKind kind);
SurfaceKind surface_kind_from_name(const std::string& name);

// Coefficients of the first fundamental form at a parameter point.
struct FundamentalForm {
  double E = 0.0, F = 0.0, G = 0.0;
  double det() const { return E * G - F * F; }
};

// Analytic parametric surface over a rectangular (u,v) domain, optionally
// periodic per axis. All queries are pure and safe to call concurrently.
class Surface {
 public:
  Surface(SurfaceKind kind, const std::map<std::string, double>& params,
          std::array<double, 4> domain, std::array<bool, 2> periodic);

  // Catalog entry with that kind's default parameters and domain.
  static Surface make(SurfaceKind kind);
  static Surface make(SurfaceKind kind, const std::map<std::string, double>& params);

  // JSON document of the form
  // {"kind":"torus","params":{"R":2.0,"r":0.7},"domain":[u0,u1,v0,v1],
  //  "periodic":[true,true]}; params/domain/periodic fall back to the
  // catalog defaults when omitted.
  static Surface from_json_text(const std::string& text);
  static Surface load(const std::string& path);
  std::string to_json_text() const;

  SurfaceKind kind() const { return kind_; }
  const std::map<std::string, double>& params() const { return params_; }
  double u0() const { return u0_; }
  double u1() const { return u1_; }
  double v0() const { return v0_; }
  double v1() const { return v1_; }
  bool u_periodic() const { return u_periodic_; }
  bool v_periodic() const { return v_periodic_; }
  double u_extent() const { return u1_ - u0_; }
  double v_extent() const { return v1_ - v0_; }

  bool in_domain(const ParamPoint& p) const;
  // Wraps periodic coordinates into [u0,u1) x [v0,v1); non-periodic axes
  // are returned unchanged.
  ParamPoint wrap(const ParamPoint& p) const;
  // Representative of p whose periodic coordinates are nearest to ref.
  ParamPoint unwrap_near(const ParamPoint& p, const ParamPoint& ref) const;

  SurfacePoint evaluate(const ParamPoint& p) const;
  void partials(const ParamPoint& p, Vec3& xu, Vec3& xv) const;
  void second_partials(const ParamPoint& p, Vec3& xuu, Vec3& xuv, Vec3& xvv) const;
  FundamentalForm fundamental_form(const ParamPoint& p) const;
  // Central finite differences on evaluate(); test oracle for partials.
  FundamentalForm fundamental_form_fd(const ParamPoint& p) const;

  // Arc length of the surface image of the straight parameter segment
  // p->q (shorter periodic representative), by adaptive 5-point
  // Gauss-Legendre quadrature to 1e-10 relative.
  double induced_length(const ParamPoint& p, const ParamPoint& q) const;

  // Geodesic-distance estimate for a mesh edge p->q: the chord inverted
  // through the osculating-circle relation d = (2/k) asin(k*c/2) with the
  // normal curvature k along the segment at its midpoint, never exceeding
  // the induced_length arc (a valid path) and never below the chord.
  double edge_length(const ParamPoint& p, const ParamPoint& q) const;

  // Bounding-box diagonal of a sampled embedding; scale for tolerances.
  double model_diameter() const;

 private:
  void validate() const;
  double param(const char* name) const;
  SurfacePoint eval_raw(double u, double v) const;

  SurfaceKind kind_;
  std::map<std::string, double> params_;
  double u0_, u1_, v0_, v1_;
  bool u_periodic_, v_periodic_;
  std::array<double, 4> p_{};  // resolved per-kind shape parameters
  mutable double diameter_ = -1.0;
};

}  // namespace surfoffset
