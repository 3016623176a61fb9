#pragma once

namespace gapkit {

// Number of threads used by the parallel kernels. Resolves once from the
// GAPKIT_THREADS environment variable (0 or unset means "all available").
int thread_count();

// Force a specific thread count (0 = reset to environment default).
void set_thread_count(int n);

} // namespace gapkit
