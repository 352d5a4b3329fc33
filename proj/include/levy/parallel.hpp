#pragma once

#include <cstddef>
#include <functional>

namespace levy
{
    // worker count: hardware concurrency, capped by LEVY_TRANSIENCE_THREADS when set
    unsigned worker_count();

    // runs body(i) for i in [0,n); each index is handled exactly once, results
    // must be written to per-index slots so the reduction order stays fixed
    void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);
}
