#include "surfoffset/core.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>

namespace surfoffset {

namespace {

LogLevel g_level = LogLevel::Info;
std::once_flag g_level_once;
std::mutex g_log_mutex;

void init_level_from_env() {
  const char* env = std::getenv("SURFOFFSET_LOG");
  if (!env) return;
  std::string s(env);
  if (s == "quiet") g_level = LogLevel::Quiet;
  else if (s == "info") g_level = LogLevel::Info;
  else if (s == "debug") g_level = LogLevel::Debug;
}

const char* level_name(LogLevel level) {
  switch (level) {
    case LogLevel::Debug: return "debug";
    case LogLevel::Info: return "info";
    case LogLevel::Warn: return "warn";
    default: return "quiet";
  }
}

void append_json_string(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

}  // namespace

LogLevel log_level() {
  std::call_once(g_level_once, init_level_from_env);
  return g_level;
}

void set_log_level(LogLevel level) {
  std::call_once(g_level_once, init_level_from_env);
  g_level = level;
}

void log_line(LogLevel level, const std::string& event,
              const std::vector<std::pair<std::string, std::string>>& fields) {
  // Warnings are kept even in quiet mode going to stderr only when >= level.
  if (static_cast<int>(level) < static_cast<int>(log_level())) return;
  std::string line = "{\"level\":";
  append_json_string(line, level_name(level));
  line += ",\"event\":";
  append_json_string(line, event);
  for (const auto& [k, v] : fields) {
    line += ',';
    append_json_string(line, k);
    line += ':';
    append_json_string(line, v);
  }
  line += "}\n";
  std::lock_guard<std::mutex> lock(g_log_mutex);
  std::fputs(line.c_str(), stderr);
}

void parallel_for(std::int64_t n, int threads,
                  const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  int t = resolve_threads(threads);
  if (t <= 1 || n < 64) {
    fn(0, n);
    return;
  }
  if (static_cast<std::int64_t>(t) > n) t = static_cast<int>(n);
  std::vector<std::thread> pool;
  pool.reserve(t);
  std::int64_t chunk = (n + t - 1) / t;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int i = 0; i < t; ++i) {
    std::int64_t lo = i * chunk;
    std::int64_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        fn(lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace surfoffset
