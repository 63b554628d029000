#include "heatlab/parallel.hpp"

namespace heatlab {

namespace {
std::atomic<int> g_threads{1};
}

int default_threads() { return g_threads.load(); }

void set_default_threads(int threads) { g_threads.store(std::max(threads, 1)); }

} // namespace heatlab
