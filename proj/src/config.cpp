#include "heisenlab/config.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace heisenlab {

namespace {
std::atomic<unsigned> g_workers{1};
}

std::uint64_t enumeration_cap() {
  if (const char* env = std::getenv("HEISENLAB_CAP")) {
    try {
      std::size_t pos = 0;
      const auto value = std::stoull(env, &pos);
      if (pos == std::string(env).size() && value > 0) return value;
    } catch (const std::exception&) {
    }
  }
  return kDefaultEnumerationCap;
}

unsigned worker_count() { return g_workers.load(); }

void set_worker_count(unsigned workers) { g_workers.store(workers == 0 ? 1 : workers); }

}  // namespace heisenlab
