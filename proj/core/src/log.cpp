#include "imbench/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace imbench::log {

namespace {

std::atomic<Level> g_level{Level::Warn};
std::mutex g_mutex;

std::string_view tag(Level l) {
  switch (l) {
    case Level::Debug: return "debug";
    case Level::Info: return "info";
    case Level::Warn: return "warning";
    case Level::Error: return "error";
    case Level::Off: break;
  }
  return "";
}

}  // namespace

void set_level(Level level) { g_level.store(level); }
Level level() { return g_level.load(); }

void write(Level l, std::string_view message) {
  if (l < g_level.load() || l == Level::Off) return;
  std::lock_guard lock(g_mutex);
  std::cerr << "imbench " << tag(l) << ": " << message << '\n';
}

}  // namespace imbench::log
