#pragma once

// Reproducible random streams and the replication harness.
//
// Each replication i of a run with master seed S draws from its own
// std::mt19937_64 engine seeded with splitmix64(S + (i + 1) * 0x9e3779b97f4a7c15).
// Both algorithms have published reference implementations, and uniforms are
// taken from the top 53 bits of each output, so a stream is bit-identical on
// every conforming platform. Poisson counts use std::poisson_distribution and
// are therefore reproducible within one standard library only.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace qmax {

inline constexpr const char* kPrngName = "mt19937_64";
inline constexpr const char* kSeedMixName = "splitmix64(master + (i+1)*0x9e3779b97f4a7c15)";
inline constexpr std::uint64_t kDefaultSeed = 20190706;

/// SplitMix64 output function (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of replication `index` under `master`.
constexpr std::uint64_t replication_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(master + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double prob) noexcept { return uniform() < prob; }

    /// Inverse-CDF exponential with the given rate.
    double exponential(double rate) noexcept { return -std::log1p(-uniform()) / rate; }

    long poisson(double mean) {
        std::poisson_distribution<long> dist(mean);
        return dist(engine_);
    }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// Runs body(index, seed) for index in [0, reps) on up to `threads` workers and
/// returns the results in index order. The output depends only on the master
/// seed, never on the schedule.
template <typename Body>
auto replicate(std::size_t reps, std::uint64_t master_seed, unsigned threads, Body&& body)
    -> std::vector<decltype(body(std::size_t{}, std::uint64_t{}))> {
    using Result = decltype(body(std::size_t{}, std::uint64_t{}));
    std::vector<Result> out(reps);
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(reps, 1))));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= reps) return;
            try {
                out[i] = body(i, replication_seed(master_seed, i));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(reps);
                return;
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace qmax
