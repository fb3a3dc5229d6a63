#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace surfoffset {

struct Vec2 {
  double x = 0.0, y = 0.0;
  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}
  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::sqrt(x * x + y * y); }
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}
  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }
inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Location in the 2D parameter rectangle of a surface.
struct ParamPoint {
  double u = 0.0, v = 0.0;
  ParamPoint() = default;
  ParamPoint(double u_, double v_) : u(u_), v(v_) {}
};

// 3D image of a parameter point under the surface embedding.
using SurfacePoint = Vec3;

inline double param_distance(const ParamPoint& a, const ParamPoint& b) {
  return std::hypot(a.u - b.u, a.v - b.v);
}

// Error taxonomy. ConfigError maps to CLI exit code 2, NumericError to 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct DomainError : ConfigError {
  using ConfigError::ConfigError;
};
struct ResolutionError : ConfigError {
  using ConfigError::ConfigError;
};
struct NumericError : Error {
  using Error::Error;
};
struct DegenerateMetricError : NumericError {
  using NumericError::NumericError;
};
struct RefinementError : NumericError {
  using NumericError::NumericError;
};
struct ConnectivityError : NumericError {
  using NumericError::NumericError;
};
struct InternalError : Error {
  using Error::Error;
};

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Quiet = 3 };

// Level read from SURFOFFSET_LOG (quiet|info|debug) on first use.
LogLevel log_level();
void set_log_level(LogLevel level);

// Emits one JSON line {"level":...,"event":...,...} to stderr.
void log_line(LogLevel level, const std::string& event,
              const std::vector<std::pair<std::string, std::string>>& fields = {});

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Static chunked parallel loop. fn(begin, end) must only write to
// per-index state; chunk boundaries are deterministic for a given n.
void parallel_for(std::int64_t n, int threads,
                  const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace surfoffset
