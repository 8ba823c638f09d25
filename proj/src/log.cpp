#include "fnls/log.hpp"

#include <atomic>
#include <iostream>
#include <map>
#include <mutex>

namespace fnls {

namespace {
std::mutex log_mutex;
std::map<std::string, int, std::less<>> counts;
std::atomic<bool> enabled{true};
constexpr int kLimit = 3;
}  // namespace

void set_warnings_enabled(bool on) { enabled = on; }

void warn(std::string_view category, const std::string& message) {
  if (!enabled) return;
  std::lock_guard<std::mutex> lock(log_mutex);
  auto it = counts.find(category);
  if (it == counts.end()) it = counts.emplace(std::string(category), 0).first;
  const int n = ++it->second;
  if (n <= kLimit) std::cerr << "warning: " << message << "\n";
  if (n == kLimit) std::cerr << "warning: further '" << category << "' warnings suppressed\n";
}

}  // namespace fnls
