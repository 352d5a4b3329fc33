#include "levy/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace levy
{
    unsigned worker_count()
    {
        unsigned n = std::max(1u, std::thread::hardware_concurrency());
        if (const char *env = std::getenv("LEVY_TRANSIENCE_THREADS")) {
            const long cap = std::strtol(env, nullptr, 10);
            if (cap >= 1) n = std::min<unsigned>(n, unsigned(cap));
        }
        return n;
    }

    void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body)
    {
        const unsigned workers = unsigned(std::min<std::size_t>(worker_count(), n));
        if (workers <= 1) {
            for (std::size_t i = 0; i < n; ++i) body(i);
            return;
        }
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex guard;
        auto run = [&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(guard);
                    if (!failure) failure = std::current_exception();
                }
            }
        };
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
        run();
        pool.clear();
        if (failure) std::rethrow_exception(failure);
    }
}
