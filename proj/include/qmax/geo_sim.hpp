#pragma once

// Monte Carlo for the running maximum of the Geo/Geo/c LAS-DA queue.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "qmax/errors.hpp"
#include "qmax/extreme_stats.hpp"
#include "qmax/params.hpp"
#include "qmax/rng.hpp"

namespace qmax {

inline constexpr std::int64_t kQueueLengthCap = std::int64_t{1} << 31;

struct GeoSimConfig {
    GeoParams params;
    std::int64_t n = 1;      ///< horizon in slots
    std::size_t reps = 1;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 1;
};

/// Per-path statistics beyond the maximum.
struct GeoPath {
    std::int64_t max_length = 0;
    double mean_length = 0.0;          ///< time average of the queue length
    std::vector<double> batch_means;   ///< time averages over equal consecutive batches
};

namespace detail {

/// One slot of the LAS-DA chain: an arrival into an empty queue waits a slot
/// before it can be served; otherwise each of min(u, c) busy servers finishes
/// with probability r.
inline std::int64_t geo_step(std::int64_t u, const GeoParams& params, RandomStream& rng) {
    const std::int64_t arrival = rng.bernoulli(params.p) ? 1 : 0;
    if (u == 0) return arrival;
    const auto busy = std::min<std::int64_t>(u, params.c);
    std::int64_t departures = 0;
    for (std::int64_t i = 0; i < busy; ++i) departures += rng.bernoulli(params.r) ? 1 : 0;
    return std::max<std::int64_t>(0, u + arrival - departures);
}

}  // namespace detail

/// Maximum queue length over n slots starting from an empty queue.
inline std::int64_t simulate_max_length(const GeoParams& params, std::int64_t n, std::uint64_t seed) {
    if (n < 1) throw range_error("horizon n must be at least 1");
    RandomStream rng(seed);
    std::int64_t u = 0;
    std::int64_t m = 0;
    for (std::int64_t t = 0; t < n; ++t) {
        u = detail::geo_step(u, params, rng);
        if (u >= kQueueLengthCap) throw numeric_error("queue length passed the 2^31 tripwire");
        m = std::max(m, u);
    }
    return m;
}

/// Same path as simulate_max_length(params, n, seed) plus time averages,
/// split into `batches` equal blocks for batch-means error estimates.
inline GeoPath simulate_path(const GeoParams& params, std::int64_t n, std::uint64_t seed,
                             std::int64_t batches = 1) {
    if (n < 1) throw range_error("horizon n must be at least 1");
    if (batches < 1 || batches > n) throw range_error("batch count must lie in [1, n]");
    RandomStream rng(seed);
    GeoPath out;
    const std::int64_t per_batch = n / batches;
    std::int64_t u = 0;
    double total = 0.0;
    double batch_total = 0.0;
    std::int64_t in_batch = 0;
    for (std::int64_t t = 0; t < n; ++t) {
        u = detail::geo_step(u, params, rng);
        out.max_length = std::max(out.max_length, u);
        total += static_cast<double>(u);
        if (static_cast<std::int64_t>(out.batch_means.size()) < batches) {
            batch_total += static_cast<double>(u);
            if (++in_batch == per_batch) {
                out.batch_means.push_back(batch_total / static_cast<double>(per_batch));
                batch_total = 0.0;
                in_batch = 0;
            }
        }
    }
    out.mean_length = total / static_cast<double>(n);
    return out;
}

struct GeoSimResult {
    std::vector<std::int64_t> samples;   ///< one maximum per replication
    std::vector<std::uint64_t> seeds;    ///< per-replication seeds
    SampleSummary summary;

    std::vector<double> samples_as_double() const { return {samples.begin(), samples.end()}; }
};

inline GeoSimResult replicate_max_length(const GeoSimConfig& config) {
    if (config.n < 1) throw range_error("horizon n must be at least 1");
    if (config.reps < 1) throw range_error("replication count must be at least 1");
    GeoSimResult out;
    out.samples = replicate(config.reps, config.seed, config.threads,
                            [&](std::size_t, std::uint64_t seed) {
                                return simulate_max_length(config.params, config.n, seed);
                            });
    out.seeds.reserve(config.reps);
    for (std::size_t i = 0; i < config.reps; ++i) out.seeds.push_back(replication_seed(config.seed, i));
    out.summary = summarize(out.samples_as_double());
    return out;
}

}  // namespace qmax
