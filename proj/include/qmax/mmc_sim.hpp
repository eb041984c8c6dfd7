#pragma once

// FIFO M/M/c Monte Carlo over a fixed time window, tracking the largest
// system and queue waits of the customers that arrive in it.

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "qmax/errors.hpp"
#include "qmax/extreme_stats.hpp"
#include "qmax/mm_analytic.hpp"
#include "qmax/rng.hpp"

namespace qmax {

struct MMSimConfig {
    MMParams params;
    double n = 1.0;  ///< window length
    std::size_t reps = 1;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 1;
};

/// Maxima and means over one window. All zero when nobody arrives.
struct WaitMaxima {
    double max_sys = 0.0;
    double max_que = 0.0;
    double mean_sys = 0.0;
    double mean_que = 0.0;
    std::int64_t customers = 0;
};

struct CustomerRecord {
    double arrival = 0.0;
    double start = 0.0;
    double service = 0.0;
    double w_que = 0.0;  ///< start - arrival
    double w_sys = 0.0;  ///< w_que + service
    int server = 0;
};

/// Serves customers in arrival order; each goes to the server that frees up
/// first (lowest index on ties). `arrivals` must be sorted.
inline WaitMaxima serve_fifo(std::span<const double> arrivals, std::span<const double> services, int servers,
                             std::vector<CustomerRecord>* log = nullptr) {
    if (servers < 1) throw range_error("server count must be at least 1");
    if (arrivals.size() != services.size()) throw range_error("arrival and service counts differ");
    std::vector<double> free_at(static_cast<std::size_t>(servers), 0.0);
    WaitMaxima out;
    out.customers = static_cast<std::int64_t>(arrivals.size());
    if (log) {
        log->clear();
        log->reserve(arrivals.size());
    }
    double sum_que = 0.0;
    double sum_sys = 0.0;
    for (std::size_t i = 0; i < arrivals.size(); ++i) {
        const auto it = std::min_element(free_at.begin(), free_at.end());
        const double start = std::max(arrivals[i], *it);
        *it = start + services[i];
        const double w_que = start - arrivals[i];
        const double w_sys = w_que + services[i];
        out.max_que = std::max(out.max_que, w_que);
        out.max_sys = std::max(out.max_sys, w_sys);
        sum_que += w_que;
        sum_sys += w_sys;
        if (log) {
            log->push_back({arrivals[i], start, services[i], w_que, w_sys, static_cast<int>(it - free_at.begin())});
        }
    }
    if (out.customers > 0) {
        out.mean_que = sum_que / static_cast<double>(out.customers);
        out.mean_sys = sum_sys / static_cast<double>(out.customers);
    }
    return out;
}

/// One window [0, n]: K ~ Poisson(lambda n) arrivals placed as sorted uniforms,
/// exponential(mu) services drawn afterwards in arrival order.
inline WaitMaxima simulate_wait_maxima(const MMParams& params, double n, std::uint64_t seed,
                                       std::vector<CustomerRecord>* log = nullptr) {
    if (!(n > 0.0)) throw range_error("window length n must be positive");
    RandomStream rng(seed);
    const long k = rng.poisson(params.lambda * n);
    std::vector<double> arrivals(static_cast<std::size_t>(k));
    for (auto& t : arrivals) t = rng.uniform() * n;
    std::sort(arrivals.begin(), arrivals.end());
    std::vector<double> services(static_cast<std::size_t>(k));
    for (auto& s : services) s = rng.exponential(params.mu);
    return serve_fifo(arrivals, services, params.c, log);
}

struct MMSimResult {
    std::vector<WaitMaxima> runs;
    std::vector<std::uint64_t> seeds;
    SampleSummary max_sys;
    SampleSummary max_que;
    double pooled_mean_sys = 0.0;  ///< customer-weighted over all replications
    double pooled_mean_que = 0.0;
    std::int64_t total_customers = 0;

    std::vector<double> max_sys_samples() const {
        std::vector<double> v;
        v.reserve(runs.size());
        for (const auto& r : runs) v.push_back(r.max_sys);
        return v;
    }
    std::vector<double> max_que_samples() const {
        std::vector<double> v;
        v.reserve(runs.size());
        for (const auto& r : runs) v.push_back(r.max_que);
        return v;
    }
};

/// Folds replications in index order into summaries.
inline MMSimResult aggregate_wait_maxima(std::vector<WaitMaxima> runs, std::vector<std::uint64_t> seeds) {
    if (runs.empty()) throw range_error("no replications to aggregate");
    MMSimResult out;
    out.runs = std::move(runs);
    out.seeds = std::move(seeds);
    out.max_sys = summarize(out.max_sys_samples());
    out.max_que = summarize(out.max_que_samples());
    double sum_sys = 0.0;
    double sum_que = 0.0;
    for (const auto& r : out.runs) {
        out.total_customers += r.customers;
        sum_sys += r.mean_sys * static_cast<double>(r.customers);
        sum_que += r.mean_que * static_cast<double>(r.customers);
    }
    if (out.total_customers > 0) {
        out.pooled_mean_sys = sum_sys / static_cast<double>(out.total_customers);
        out.pooled_mean_que = sum_que / static_cast<double>(out.total_customers);
    }
    return out;
}

inline MMSimResult replicate_wait_maxima(const MMSimConfig& config) {
    if (!(config.n > 0.0)) throw range_error("window length n must be positive");
    if (config.reps < 1) throw range_error("replication count must be at least 1");
    auto runs = replicate(config.reps, config.seed, config.threads, [&](std::size_t, std::uint64_t seed) {
        return simulate_wait_maxima(config.params, config.n, seed);
    });
    std::vector<std::uint64_t> seeds;
    seeds.reserve(config.reps);
    for (std::size_t i = 0; i < config.reps; ++i) seeds.push_back(replication_seed(config.seed, i));
    return aggregate_wait_maxima(std::move(runs), std::move(seeds));
}

}  // namespace qmax
