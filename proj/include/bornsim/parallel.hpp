#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace bornsim {

/// Splits [0, n) into contiguous chunks, runs body(begin, end) -> Acc on
/// each in its own thread and folds the results with +=. Deterministic as
/// long as body derives its randomness from the item index.
template <typename Acc, typename Body>
Acc parallel_accumulate(std::uint64_t n, Body body, unsigned max_workers = 0) {
    unsigned workers = max_workers != 0 ? max_workers : std::max(1u, std::thread::hardware_concurrency());
    constexpr std::uint64_t kMinChunk = 4096;
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(1, n / kMinChunk)));
    if (workers <= 1) return body(std::uint64_t{0}, n);

    std::vector<Acc> partial(workers);
    {
        std::vector<std::jthread> threads;
        threads.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t begin = n * w / workers;
            const std::uint64_t end = n * (w + 1) / workers;
            threads.emplace_back([&partial, &body, w, begin, end] { partial[w] = body(begin, end); });
        }
    }
    Acc total = std::move(partial.front());
    for (unsigned w = 1; w < workers; ++w) total += partial[w];
    return total;
}

}  // namespace bornsim
