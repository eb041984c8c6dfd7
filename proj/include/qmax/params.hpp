#pragma once

// Discrete-time Geo/Geo/c parameters and the one-slot increment law.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qmax/errors.hpp"

namespace qmax {

/// Largest server count with analytic support.
inline constexpr int kMaxGeoServers = 3;

/// Smallest accepted c*r - p. Closer to the boundary the decay rate is within
/// rounding of 1 and the tail quantities lose all precision.
inline constexpr double kStabilityMargin = 1e-12;

/// Validated Geo/Geo/c parameters. Construct through validate_geo_params().
struct GeoParams {
    double p = 0.0;  ///< arrival probability per slot
    double r = 0.0;  ///< per-server departure probability per slot
    int c = 1;       ///< number of servers
    double q = 1.0;  ///< 1 - p
    double s = 1.0;  ///< 1 - r
};

inline GeoParams validate_geo_params(double p, double r, int c) {
    if (!(p > 0.0 && p < 1.0)) {
        throw range_error("arrival probability p must lie in (0,1), got " + std::to_string(p));
    }
    if (!(r > 0.0 && r < 1.0)) {
        throw range_error("departure probability r must lie in (0,1), got " + std::to_string(r));
    }
    if (c < 1 || c > kMaxGeoServers) {
        throw unsupported_error("server count c must be 1, 2 or 3, got " + std::to_string(c));
    }
    if (!(p < c * r)) {
        throw stability_error("unstable queue: need p < c*r, got p=" + std::to_string(p) +
                              " c*r=" + std::to_string(c * r));
    }
    if (!(c * r - p > kStabilityMargin)) {
        throw stability_error("queue is within rounding of the stability boundary p = c*r");
    }
    return GeoParams{p, r, c, 1.0 - p, 1.0 - r};
}

/// Law of the queue-length change over one slot when `busy` servers are working.
/// Support is the contiguous range [-busy, +1].
class IncrementPmf {
public:
    IncrementPmf() = default;
    IncrementPmf(int busy, std::vector<double> probs) : busy_(busy), probs_(std::move(probs)) {}

    int busy() const noexcept { return busy_; }
    int min_step() const noexcept { return -busy_; }
    int max_step() const noexcept { return 1; }
    std::size_t width() const noexcept { return probs_.size(); }

    /// P(step == d); zero outside the support.
    double operator()(int d) const noexcept {
        if (d < -busy_ || d > 1) return 0.0;
        return probs_[static_cast<std::size_t>(d + busy_)];
    }

    /// Probabilities ordered from -busy to +1.
    const std::vector<double>& probabilities() const noexcept { return probs_; }

    double mean() const noexcept {
        double m = 0.0;
        for (int d = -busy_; d <= 1; ++d) m += d * (*this)(d);
        return m;
    }

private:
    int busy_ = 0;
    std::vector<double> probs_;
};

/// Arrival Bernoulli(p) convolved with Binomial(busy, r) departures.
inline IncrementPmf increment_distribution(const GeoParams& params, int busy) {
    if (busy < 0 || busy > params.c) {
        throw range_error("busy server count must lie in [0, c], got " + std::to_string(busy));
    }
    // binomial(busy, r) departure weights, built by repeated convolution
    std::vector<double> dep(static_cast<std::size_t>(busy) + 1, 0.0);
    dep[0] = 1.0;
    for (int k = 0; k < busy; ++k) {
        for (int j = k + 1; j >= 0; --j) {
            const double stay = dep[static_cast<std::size_t>(j)] * params.s;
            const double leave = j > 0 ? dep[static_cast<std::size_t>(j - 1)] * params.r : 0.0;
            dep[static_cast<std::size_t>(j)] = stay + leave;
        }
    }
    std::vector<double> probs(static_cast<std::size_t>(busy) + 2, 0.0);
    for (int d = 0; d <= busy; ++d) {
        const double w = dep[static_cast<std::size_t>(d)];
        probs[static_cast<std::size_t>(busy - d + 1)] += params.p * w;  // step 1 - d
        probs[static_cast<std::size_t>(busy - d)] += params.q * w;      // step -d
    }
    return IncrementPmf(busy, std::move(probs));
}

/// One-slot transition probability of the LAS-DA queue-length chain.
inline double geo_transition(const GeoParams& params, long from, long to) {
    const int busy = static_cast<int>(std::min<long>(from, params.c));
    const long d = to - from;
    if (d < -busy || d > 1) return 0.0;
    return increment_distribution(params, busy)(static_cast<int>(d));
}

}  // namespace qmax
