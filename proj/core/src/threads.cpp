#include <cstdlib>
#include <string>
#include <thread>

#include "internal.hpp"

namespace lamelab::detail {

int thread_count() {
  if (const char* env = std::getenv("LAMELAB_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace lamelab::detail
