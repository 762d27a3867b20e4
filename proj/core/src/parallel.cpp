#include "presslab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace presslab {

int thread_count() {
    static const int cached = [] {
        if (const char* env = std::getenv("PRESSLAB_THREADS")) {
            const int v = std::atoi(env);
            if (v >= 1) return v;
        }
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }();
    return cached;
}

void parallel_for(size_t count, const std::function<void(size_t)>& body) {
    const int workers = thread_count();
    if (workers <= 1 || count < 2) {
        for (size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<size_t> next{0};
    const size_t chunk = std::max<size_t>(1, count / (static_cast<size_t>(workers) * 8));
    auto run = [&] {
        while (true) {
            const size_t begin = next.fetch_add(chunk);
            if (begin >= count) break;
            const size_t end = std::min(count, begin + chunk);
            for (size_t i = begin; i < end; ++i) body(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers) - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
}

} // namespace presslab
