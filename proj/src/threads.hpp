#ifndef CHIRALWG_SRC_THREADS_HPP
#define CHIRALWG_SRC_THREADS_HPP

#include <cstdlib>
#include <thread>

namespace chiralwg::detail {

// CHIRALWG_THREADS caps the worker count for all parallel sections.
inline int worker_count() {
  if (const char* env = std::getenv("CHIRALWG_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace chiralwg::detail

#endif
