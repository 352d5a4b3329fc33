#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <vector>

namespace levy
{
    // Thread-safe lookup table keyed by a vector of doubles; cleared when full.
    template <class V>
    class Memo
    {
    public:
        explicit Memo(std::size_t capacity = 1u << 18) : cap_(capacity) {}

        template <class F>
        V get(const std::vector<double> &key, F compute)
        {
            {
                std::lock_guard lock(mu_);
                if (auto it = map_.find(key); it != map_.end()) return it->second;
            }
            V v = compute();
            std::lock_guard lock(mu_);
            if (map_.size() >= cap_) map_.clear();
            map_.emplace(key, v);
            return v;
        }

    private:
        std::mutex mu_;
        std::map<std::vector<double>, V> map_;
        std::size_t cap_;
    };
}
