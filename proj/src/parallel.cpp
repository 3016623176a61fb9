#include "gapkit/parallel.hpp"

#include <atomic>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gapkit {

namespace {

int env_threads() {
    const char* v = std::getenv("GAPKIT_THREADS");
    if (v == nullptr) return 0;
    int n = std::atoi(v);
    return n > 0 ? n : 0;
}

std::atomic<int> g_override{-1};

} // namespace

int thread_count() {
    int n = g_override.load(std::memory_order_relaxed);
    if (n < 0) n = env_threads();
#ifdef _OPENMP
    if (n == 0) n = omp_get_max_threads();
#else
    n = 1;
#endif
    return n > 0 ? n : 1;
}

void set_thread_count(int n) {
    g_override.store(n > 0 ? n : -1, std::memory_order_relaxed);
}

} // namespace gapkit
