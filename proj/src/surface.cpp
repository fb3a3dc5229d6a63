#include "surfoffset/surface.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace surfoffset {

namespace {

constexpr double kPi = 3.14159265358979323846;

constexpr double kGL5X[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                             0.5384693101056831, 0.9061798459386640};
constexpr double kGL5W[5] = {0.2369268850561891, 0.4786286704993665,
                             0.5688888888888889, 0.4786286704993665,
                             0.2369268850561891};

struct KindDefaults {
  std::map<std::string, double> params;
  std::array<double, 4> domain;
  std::array<bool, 2> periodic;
};

KindDefaults kind_defaults(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::plane:
      return {{}, {0.0, 1.0, 0.0, 1.0}, {false, false}};
    case SurfaceKind::sphere:
      return {{{"R", 1.0}}, {0.0, 2.0 * kPi, -kPi / 2.0, kPi / 2.0}, {true, false}};
    case SurfaceKind::cylinder:
      return {{{"R", 1.0}}, {0.0, 2.0 * kPi, -2.0, 2.0}, {true, false}};
    case SurfaceKind::torus:
      return {{{"R", 2.0}, {"r", 0.7}},
              {0.0, 2.0 * kPi, 0.0, 2.0 * kPi},
              {true, true}};
    case SurfaceKind::gaussian_bump:
      return {{{"A", 1.0}, {"sigma", 0.5}}, {-2.0, 2.0, -2.0, 2.0}, {false, false}};
    case SurfaceKind::bivariate_sine:
      return {{{"A", 0.5}, {"fu", 1.0}, {"fv", 1.0}},
              {0.0, 2.0 * kPi, 0.0, 2.0 * kPi},
              {false, false}};
    case SurfaceKind::spiral_paraboloid:
      return {{{"a", 0.25}, {"b", 0.15}},
              {0.0, 4.0 * kPi, 0.2, 2.0},
              {false, false}};
    case SurfaceKind::circular_wave:
      return {{{"A", 0.3}, {"omega", 3.0}}, {-3.0, 3.0, -3.0, 3.0}, {false, false}};
  }
  throw ConfigError("unknown surface kind");
}

double wrap_coord(double x, double lo, double hi) {
  double span = hi - lo;
  double t = std::fmod(x - lo, span);
  if (t < 0) t += span;
  return lo + t;
}

// sin(w*r)/r with a series guard near r = 0.
double sinc_w(double w, double r) {
  double wr = w * r;
  if (std::abs(wr) < 1e-6) return w * (1.0 - wr * wr / 6.0);
  return std::sin(wr) / r;
}

}  // namespace

const char* surface_kind_name(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::plane: return "plane";
    case SurfaceKind::sphere: return "sphere";
    case SurfaceKind::cylinder: return "cylinder";
    case SurfaceKind::torus: return "torus";
    case SurfaceKind::gaussian_bump: return "gaussian_bump";
    case SurfaceKind::bivariate_sine: return "bivariate_sine";
    case SurfaceKind::spiral_paraboloid: return "spiral_paraboloid";
    case SurfaceKind::circular_wave: return "circular_wave";
  }
  return "unknown";
}

SurfaceKind surface_kind_from_name(const std::string& name) {
  static const std::map<std::string, SurfaceKind> table = {
      {"plane", SurfaceKind::plane},
      {"sphere", SurfaceKind::sphere},
      {"cylinder", SurfaceKind::cylinder},
      {"torus", SurfaceKind::torus},
      {"gaussian_bump", SurfaceKind::gaussian_bump},
      {"bivariate_sine", SurfaceKind::bivariate_sine},
      {"spiral_paraboloid", SurfaceKind::spiral_paraboloid},
      {"circular_wave", SurfaceKind::circular_wave},
  };
  auto it = table.find(name);
  if (it == table.end()) throw ConfigError("unknown surface kind: " + name);
  return it->second;
}

Surface::Surface(SurfaceKind kind, const std::map<std::string, double>& params,
                 std::array<double, 4> domain, std::array<bool, 2> periodic)
    : kind_(kind),
      params_(params),
      u0_(domain[0]),
      u1_(domain[1]),
      v0_(domain[2]),
      v1_(domain[3]),
      u_periodic_(periodic[0]),
      v_periodic_(periodic[1]) {
  KindDefaults defaults = kind_defaults(kind);
  for (const auto& [name, value] : defaults.params) {
    if (!params_.count(name)) params_[name] = value;
  }
  // Keep mesh vertices off the metric singularity at the sphere poles.
  if (kind_ == SurfaceKind::sphere) {
    double eps = 1e-3 * (v1_ - v0_);
    bool shrunk = false;
    if (v0_ <= -kPi / 2.0 + 1e-12) { v0_ = -kPi / 2.0 + eps; shrunk = true; }
    if (v1_ >= kPi / 2.0 - 1e-12) { v1_ = kPi / 2.0 - eps; shrunk = true; }
    if (shrunk)
      log_line(LogLevel::Debug, "sphere_pole_shrink",
               {{"v0", std::to_string(v0_)}, {"v1", std::to_string(v1_)}});
  }
  switch (kind_) {
    case SurfaceKind::plane: break;
    case SurfaceKind::sphere:
    case SurfaceKind::cylinder: p_[0] = param("R"); break;
    case SurfaceKind::torus: p_[0] = param("R"); p_[1] = param("r"); break;
    case SurfaceKind::gaussian_bump: p_[0] = param("A"); p_[1] = param("sigma"); break;
    case SurfaceKind::bivariate_sine:
      p_[0] = param("A"); p_[1] = param("fu"); p_[2] = param("fv"); break;
    case SurfaceKind::spiral_paraboloid: p_[0] = param("a"); p_[1] = param("b"); break;
    case SurfaceKind::circular_wave: p_[0] = param("A"); p_[1] = param("omega"); break;
  }
  validate();
}

Surface Surface::make(SurfaceKind kind) {
  KindDefaults d = kind_defaults(kind);
  return Surface(kind, d.params, d.domain, d.periodic);
}

Surface Surface::make(SurfaceKind kind, const std::map<std::string, double>& params) {
  KindDefaults d = kind_defaults(kind);
  return Surface(kind, params, d.domain, d.periodic);
}

double Surface::param(const char* name) const {
  auto it = params_.find(name);
  if (it == params_.end())
    throw ConfigError(std::string("missing surface parameter: ") + name);
  return it->second;
}

void Surface::validate() const {
  if (!(u1_ > u0_) || !(v1_ > v0_))
    throw ConfigError("surface domain is degenerate");
  switch (kind_) {
    case SurfaceKind::plane: break;
    case SurfaceKind::sphere:
    case SurfaceKind::cylinder:
      if (!(p_[0] > 0)) throw ConfigError("radius R must be positive");
      break;
    case SurfaceKind::torus:
      if (!(p_[0] > p_[1]) || !(p_[1] > 0))
        throw ConfigError("torus requires R > r > 0");
      break;
    case SurfaceKind::gaussian_bump:
      if (!(p_[1] > 0)) throw ConfigError("sigma must be positive");
      break;
    case SurfaceKind::bivariate_sine: break;
    case SurfaceKind::spiral_paraboloid:
      if (!(p_[1] > 0) && !(v0_ > 0))
        throw ConfigError("spiral_paraboloid requires b > 0 or v0 > 0");
      break;
    case SurfaceKind::circular_wave: break;
  }
  // A periodic flag must correspond to a seam the embedding actually closes.
  auto probe = [&](bool along_u) {
    for (double t : {0.21, 0.5, 0.83}) {
      SurfacePoint pa, pb;
      if (along_u) {
        double v = v0_ + t * (v1_ - v0_);
        pa = eval_raw(u0_, v);
        pb = eval_raw(u1_, v);
      } else {
        double u = u0_ + t * (u1_ - u0_);
        pa = eval_raw(u, v0_);
        pb = eval_raw(u, v1_);
      }
      double scale = 1.0 + pa.norm() + pb.norm();
      if (distance(pa, pb) > 1e-9 * scale)
        throw ConfigError("periodic flag set on an axis the embedding does not close");
    }
  };
  if (u_periodic_) probe(true);
  if (v_periodic_) probe(false);
}

bool Surface::in_domain(const ParamPoint& p) const {
  double tu = 1e-12 * u_extent(), tv = 1e-12 * v_extent();
  bool ok_u = u_periodic_ || (p.u >= u0_ - tu && p.u <= u1_ + tu);
  bool ok_v = v_periodic_ || (p.v >= v0_ - tv && p.v <= v1_ + tv);
  return ok_u && ok_v;
}

ParamPoint Surface::wrap(const ParamPoint& p) const {
  ParamPoint q = p;
  if (u_periodic_) q.u = wrap_coord(q.u, u0_, u1_);
  if (v_periodic_) q.v = wrap_coord(q.v, v0_, v1_);
  return q;
}

ParamPoint Surface::unwrap_near(const ParamPoint& p, const ParamPoint& ref) const {
  ParamPoint q = p;
  if (u_periodic_) {
    double span = u_extent();
    q.u += span * std::round((ref.u - q.u) / span);
  }
  if (v_periodic_) {
    double span = v_extent();
    q.v += span * std::round((ref.v - q.v) / span);
  }
  return q;
}

SurfacePoint Surface::evaluate(const ParamPoint& p) const {
  if (!in_domain(p))
    throw DomainError("parameter point outside surface domain");
  ParamPoint q = wrap(p);
  return eval_raw(q.u, q.v);
}

SurfacePoint Surface::eval_raw(double u, double v) const {
  switch (kind_) {
    case SurfaceKind::plane:
      return {u, v, 0.0};
    case SurfaceKind::sphere: {
      double R = p_[0];
      return {R * std::cos(u) * std::cos(v), R * std::sin(u) * std::cos(v),
              R * std::sin(v)};
    }
    case SurfaceKind::cylinder: {
      double R = p_[0];
      return {R * std::cos(u), R * std::sin(u), v};
    }
    case SurfaceKind::torus: {
      double R = p_[0], r = p_[1];
      double w = R + r * std::cos(v);
      return {w * std::cos(u), w * std::sin(u), r * std::sin(v)};
    }
    case SurfaceKind::gaussian_bump: {
      double A = p_[0], s = p_[1];
      return {u, v, A * std::exp(-(u * u + v * v) / (2.0 * s * s))};
    }
    case SurfaceKind::bivariate_sine: {
      double A = p_[0], fu = p_[1], fv = p_[2];
      return {u, v, A * std::sin(fu * u) * std::sin(fv * v)};
    }
    case SurfaceKind::spiral_paraboloid: {
      double a = p_[0], b = p_[1];
      return {v * std::cos(u), v * std::sin(u), a * v * v + b * u};
    }
    case SurfaceKind::circular_wave: {
      double A = p_[0], w = p_[1];
      double r = std::hypot(u, v);
      return {u, v, A * std::cos(w * r)};
    }
  }
  throw InternalError("unhandled surface kind");
}

void Surface::partials(const ParamPoint& p, Vec3& xu, Vec3& xv) const {
  ParamPoint q = wrap(p);
  double u = q.u, v = q.v;
  switch (kind_) {
    case SurfaceKind::plane:
      xu = {1, 0, 0};
      xv = {0, 1, 0};
      return;
    case SurfaceKind::sphere: {
      double R = p_[0];
      xu = {-R * std::sin(u) * std::cos(v), R * std::cos(u) * std::cos(v), 0.0};
      xv = {-R * std::cos(u) * std::sin(v), -R * std::sin(u) * std::sin(v),
            R * std::cos(v)};
      return;
    }
    case SurfaceKind::cylinder: {
      double R = p_[0];
      xu = {-R * std::sin(u), R * std::cos(u), 0.0};
      xv = {0.0, 0.0, 1.0};
      return;
    }
    case SurfaceKind::torus: {
      double R = p_[0], r = p_[1];
      double w = R + r * std::cos(v);
      xu = {-w * std::sin(u), w * std::cos(u), 0.0};
      xv = {-r * std::sin(v) * std::cos(u), -r * std::sin(v) * std::sin(u),
            r * std::cos(v)};
      return;
    }
    case SurfaceKind::gaussian_bump: {
      double A = p_[0], s = p_[1];
      double g = A * std::exp(-(u * u + v * v) / (2.0 * s * s));
      xu = {1.0, 0.0, -u / (s * s) * g};
      xv = {0.0, 1.0, -v / (s * s) * g};
      return;
    }
    case SurfaceKind::bivariate_sine: {
      double A = p_[0], fu = p_[1], fv = p_[2];
      xu = {1.0, 0.0, A * fu * std::cos(fu * u) * std::sin(fv * v)};
      xv = {0.0, 1.0, A * fv * std::sin(fu * u) * std::cos(fv * v)};
      return;
    }
    case SurfaceKind::spiral_paraboloid: {
      double a = p_[0], b = p_[1];
      xu = {-v * std::sin(u), v * std::cos(u), b};
      xv = {std::cos(u), std::sin(u), 2.0 * a * v};
      return;
    }
    case SurfaceKind::circular_wave: {
      double A = p_[0], w = p_[1];
      double r = std::hypot(u, v);
      double dz = -A * w * sinc_w(w, r);  // dz/du = dz * u, dz/dv = dz * v
      xu = {1.0, 0.0, dz * u};
      xv = {0.0, 1.0, dz * v};
      return;
    }
  }
  throw InternalError("unhandled surface kind");
}

void Surface::second_partials(const ParamPoint& p, Vec3& xuu, Vec3& xuv,
                              Vec3& xvv) const {
  ParamPoint q = wrap(p);
  double u = q.u, v = q.v;
  switch (kind_) {
    case SurfaceKind::plane:
      xuu = xuv = xvv = {0, 0, 0};
      return;
    case SurfaceKind::sphere: {
      double R = p_[0], cu = std::cos(u), su = std::sin(u);
      double cv = std::cos(v), sv = std::sin(v);
      xuu = {-R * cu * cv, -R * su * cv, 0.0};
      xuv = {R * su * sv, -R * cu * sv, 0.0};
      xvv = {-R * cu * cv, -R * su * cv, -R * sv};
      return;
    }
    case SurfaceKind::cylinder: {
      double R = p_[0];
      xuu = {-R * std::cos(u), -R * std::sin(u), 0.0};
      xuv = xvv = {0, 0, 0};
      return;
    }
    case SurfaceKind::torus: {
      double R = p_[0], r = p_[1];
      double cu = std::cos(u), su = std::sin(u);
      double cv = std::cos(v), sv = std::sin(v);
      double w = R + r * cv;
      xuu = {-w * cu, -w * su, 0.0};
      xuv = {r * sv * su, -r * sv * cu, 0.0};
      xvv = {-r * cv * cu, -r * cv * su, -r * sv};
      return;
    }
    case SurfaceKind::gaussian_bump: {
      double A = p_[0], s = p_[1];
      double s2 = s * s;
      double g = A * std::exp(-(u * u + v * v) / (2.0 * s2));
      xuu = {0, 0, g * (u * u - s2) / (s2 * s2)};
      xuv = {0, 0, g * u * v / (s2 * s2)};
      xvv = {0, 0, g * (v * v - s2) / (s2 * s2)};
      return;
    }
    case SurfaceKind::bivariate_sine: {
      double A = p_[0], fu = p_[1], fv = p_[2];
      double su = std::sin(fu * u), cu = std::cos(fu * u);
      double sv = std::sin(fv * v), cv = std::cos(fv * v);
      xuu = {0, 0, -A * fu * fu * su * sv};
      xuv = {0, 0, A * fu * fv * cu * cv};
      xvv = {0, 0, -A * fv * fv * su * sv};
      return;
    }
    case SurfaceKind::spiral_paraboloid: {
      double a = p_[0];
      xuu = {-v * std::cos(u), -v * std::sin(u), 0.0};
      xuv = {-std::sin(u), std::cos(u), 0.0};
      xvv = {0.0, 0.0, 2.0 * a};
      return;
    }
    case SurfaceKind::circular_wave: {
      double A = p_[0], w = p_[1];
      double r = std::hypot(u, v);
      double S = sinc_w(w, r);  // sin(wr)/r
      double T;                 // (w*cos(wr) - S) / r^2
      if (r < 1e-5) {
        T = -w * w * w / 3.0;
      } else {
        T = (w * std::cos(w * r) - S) / (r * r);
      }
      xuu = {0, 0, -A * w * (S + u * u * T)};
      xuv = {0, 0, -A * w * (u * v * T)};
      xvv = {0, 0, -A * w * (S + v * v * T)};
      return;
    }
  }
  throw InternalError("unhandled surface kind");
}

FundamentalForm Surface::fundamental_form(const ParamPoint& p) const {
  if (!in_domain(p))
    throw DomainError("parameter point outside surface domain");
  Vec3 xu, xv;
  partials(p, xu, xv);
  FundamentalForm f{xu.dot(xu), xu.dot(xv), xv.dot(xv)};
  if (!(f.E > 0) || !(f.G > 0) || !(f.det() > 0))
    throw DegenerateMetricError("degenerate first fundamental form");
  return f;
}

FundamentalForm Surface::fundamental_form_fd(const ParamPoint& p) const {
  double hu = 1e-6 * u_extent(), hv = 1e-6 * v_extent();
  SurfacePoint up = eval_raw(p.u + hu, p.v), um = eval_raw(p.u - hu, p.v);
  SurfacePoint vp = eval_raw(p.u, p.v + hv), vm = eval_raw(p.u, p.v - hv);
  Vec3 xu = (up - um) * (0.5 / hu);
  Vec3 xv = (vp - vm) * (0.5 / hv);
  return {xu.dot(xu), xu.dot(xv), xv.dot(xv)};
}

namespace {

template <typename F>
double gauss5(const F& f, double a, double b) {
  double m = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += kGL5W[i] * f(m + h * kGL5X[i]);
  return s * h;
}

template <typename F>
double adaptive_gauss(const F& f, double a, double b, double whole, double rel_tol,
                      int depth) {
  double m = 0.5 * (a + b);
  double left = gauss5(f, a, m), right = gauss5(f, m, b);
  double refined = left + right;
  if (std::abs(refined - whole) <= rel_tol * std::abs(refined) || depth >= 48)
    return refined;
  return adaptive_gauss(f, a, m, left, rel_tol, depth + 1) +
         adaptive_gauss(f, m, b, right, rel_tol, depth + 1);
}

}  // namespace

double Surface::induced_length(const ParamPoint& p, const ParamPoint& q) const {
  ParamPoint qn = unwrap_near(q, p);
  double du = qn.u - p.u, dv = qn.v - p.v;
  if (du == 0.0 && dv == 0.0) return 0.0;
  auto speed = [&](double t) {
    Vec3 xu, xv;
    partials({p.u + t * du, p.v + t * dv}, xu, xv);
    return (xu * du + xv * dv).norm();
  };
  double whole = gauss5(speed, 0.0, 1.0);
  return adaptive_gauss(speed, 0.0, 1.0, whole, 1e-10, 0);
}

double Surface::edge_length(const ParamPoint& p, const ParamPoint& q) const {
  ParamPoint qn = unwrap_near(q, p);
  double du = qn.u - p.u, dv = qn.v - p.v;
  if (du == 0.0 && dv == 0.0) return 0.0;
  ParamPoint pw = wrap(p);
  SurfacePoint xa = eval_raw(pw.u, pw.v);
  ParamPoint qw = wrap(qn);
  SurfacePoint xb = eval_raw(qw.u, qw.v);
  double chord = distance(xa, xb);
  ParamPoint mid{p.u + 0.5 * du, p.v + 0.5 * dv};
  Vec3 xu, xv, xuu, xuv, xvv;
  partials(mid, xu, xv);
  second_partials(mid, xuu, xuv, xvv);
  Vec3 n = xu.cross(xv);
  double nn = n.norm();
  double arc = induced_length(p, q);
  if (nn <= 0.0) return arc;
  n = n * (1.0 / nn);
  double one = (xu * du + xv * dv).dot(xu * du + xv * dv);
  double two = xuu.dot(n) * du * du + 2.0 * xuv.dot(n) * du * dv +
               xvv.dot(n) * dv * dv;
  double kappa = std::abs(two) / one;
  if (kappa * chord * 0.5 >= 0.999) return arc;
  double d = kappa < 1e-12 ? chord
                           : (2.0 / kappa) * std::asin(kappa * chord * 0.5);
  return std::clamp(d, chord, arc);
}

double Surface::model_diameter() const {
  if (diameter_ > 0) return diameter_;
  Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
  const int n = 32;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      SurfacePoint s = evaluate({u0_ + u_extent() * i / n, v0_ + v_extent() * j / n});
      lo = {std::min(lo.x, s.x), std::min(lo.y, s.y), std::min(lo.z, s.z)};
      hi = {std::max(hi.x, s.x), std::max(hi.y, s.y), std::max(hi.z, s.z)};
    }
  }
  diameter_ = distance(lo, hi);
  return diameter_;
}

Surface Surface::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid surface JSON: ") + e.what());
  }
  if (!j.contains("kind")) throw ConfigError("surface JSON missing \"kind\"");
  SurfaceKind kind = surface_kind_from_name(j["kind"].get<std::string>());
  KindDefaults d = kind_defaults(kind);
  std::map<std::string, double> params = d.params;
  if (j.contains("params")) {
    for (auto& [k, v] : j["params"].items()) params[k] = v.get<double>();
  }
  std::array<double, 4> domain = d.domain;
  if (j.contains("domain")) {
    auto arr = j["domain"];
    if (!arr.is_array() || arr.size() != 4)
      throw ConfigError("surface domain must be [u0,u1,v0,v1]");
    for (int i = 0; i < 4; ++i) domain[i] = arr[i].get<double>();
  }
  std::array<bool, 2> periodic = d.periodic;
  if (j.contains("periodic")) {
    auto arr = j["periodic"];
    if (!arr.is_array() || arr.size() != 2)
      throw ConfigError("surface periodic must be [u_periodic,v_periodic]");
    for (int i = 0; i < 2; ++i) periodic[i] = arr[i].get<bool>();
  }
  return Surface(kind, params, domain, periodic);
}

Surface Surface::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open surface file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string Surface::to_json_text() const {
  nlohmann::json j;
  j["kind"] = surface_kind_name(kind_);
  j["params"] = params_;
  j["domain"] = {u0_, u1_, v0_, v1_};
  j["periodic"] = {u_periodic_, v_periodic_};
  return j.dump();
}

}  // namespace surfoffset
