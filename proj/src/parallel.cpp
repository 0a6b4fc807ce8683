#include "kobalab/parallel.hpp"

namespace kobalab {

namespace {
std::atomic<std::size_t> g_workers{0};
}

void set_worker_count(std::size_t workers) noexcept { g_workers = workers; }

std::size_t worker_count() noexcept {
  const std::size_t w = g_workers.load();
  if (w != 0) return w;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace kobalab
