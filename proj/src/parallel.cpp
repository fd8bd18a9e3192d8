#include "glspec/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace glspec {

namespace {
std::atomic<int> configured{0};
}

int thread_count()
{
    int n = configured.load();
    if (n > 0)
        return n;
    if (const char* env = std::getenv("GL_SPECTRA_THREADS")) {
        try {
            int v = std::stoi(env);
            if (v > 0)
                return v;
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void set_thread_count(int n)
{
    configured.store(std::max(0, n));
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads)
{
    int nt = threads > 0 ? threads : thread_count();
    nt = int(std::min<std::size_t>(std::size_t(nt), n));
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mtx;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mtx);
                if (!err)
                    err = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (err)
        std::rethrow_exception(err);
}

} // namespace glspec
