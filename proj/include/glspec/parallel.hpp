#pragma once

#include <cstddef>
#include <functional>

namespace glspec {

/// Worker count: explicit setting, else GL_SPECTRA_THREADS, else hardware concurrency.
int thread_count();
void set_thread_count(int n);

/// Runs body(i) for i in [0, n) on up to thread_count() workers; rethrows the first exception.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads = 0);

} // namespace glspec
